"""Tests for expanding a narrow-band eigenbasis in a wider-band one."""

import numpy as np
import pytest

from colored_scatter.errors import ExpansionMismatchError
from colored_scatter.kernel import (
    AngularSupport,
    KernelSpec,
    cross_expansion_coefficients,
    eigendecompose,
)


@pytest.fixture
def spectra(three_clusters: AngularSupport):
    """W1=40 and W2=20 on a shared grid."""
    fine = eigendecompose(KernelSpec.default(three_clusters, 40.0))
    coarse = eigendecompose(KernelSpec.default(three_clusters, 20.0, reference_bandwidth=40.0))
    return fine, coarse


class TestCrossExpansion:
    """Tests for the coefficient identities."""

    def test_identities_hold(self, spectra) -> None:
        """Test orthonormality on the concentrated rows and the weighted identity everywhere."""
        fine, coarse = spectra
        truncation = fine.truncation(1 - 1e-7)
        expansion = cross_expansion_coefficients(fine, coarse, truncation=truncation)
        assert expansion.checked_rows >= 3
        assert expansion.orthonormality_residual < 1e-3
        assert expansion.weighted_residual < 1e-3

    def test_same_bandwidth_is_identity(self, three_clusters: AngularSupport) -> None:
        """Test W1 = W2 gives the identity matrix."""
        spectrum = eigendecompose(KernelSpec.default(three_clusters, 20.0))
        expansion = cross_expansion_coefficients(spectrum, spectrum, truncation=10)
        np.testing.assert_allclose(expansion.coefficients, np.eye(10), atol=1e-8)

    def test_no_concentrated_rows(self, three_clusters: AngularSupport) -> None:
        """Test a narrow coarse band leaves orthonormality unmeasured."""
        fine = eigendecompose(KernelSpec.default(three_clusters, 4.0))
        coarse = eigendecompose(KernelSpec.default(three_clusters, 2.0, reference_bandwidth=4.0))
        expansion = cross_expansion_coefficients(fine, coarse)
        assert expansion.checked_rows == 0
        assert np.isnan(expansion.orthonormality_residual)
        assert expansion.weighted_residual < 1e-3

    def test_shape_and_read_only(self, spectra) -> None:
        """Test the coefficients form an N x N frozen matrix."""
        fine, coarse = spectra
        expansion = cross_expansion_coefficients(fine, coarse)
        n = expansion.truncation
        assert n == fine.truncation()
        assert expansion.coefficients.shape == (n, n)
        with pytest.raises(ValueError):
            expansion.coefficients[0, 0] = 1.0

    def test_explicit_truncation(self, spectra) -> None:
        """Test a smaller N is honored."""
        fine, coarse = spectra
        expansion = cross_expansion_coefficients(fine, coarse, truncation=12)
        assert expansion.coefficients.shape == (12, 12)
        assert np.isfinite(expansion.orthonormality_residual_all)

    @pytest.mark.parametrize("truncation", [0, -1, 10**6])
    def test_truncation_out_of_range(self, spectra, truncation: int) -> None:
        """Test N outside 1..size is refused."""
        fine, coarse = spectra
        with pytest.raises(ExpansionMismatchError):
            cross_expansion_coefficients(fine, coarse, truncation=truncation)


class TestMismatch:
    """Tests for spectra that cannot be related."""

    def test_different_support(self, three_clusters: AngularSupport) -> None:
        """Test spectra on different supports are refused."""
        fine = eigendecompose(KernelSpec.default(three_clusters, 20.0))
        other = AngularSupport.parse("-0.3:0.3")
        coarse = eigendecompose(KernelSpec(other, 10.0, fine.spec.grid_points_per_unit))
        with pytest.raises(ExpansionMismatchError) as exc_info:
            cross_expansion_coefficients(fine, coarse)
        assert "supports differ" in str(exc_info.value)

    def test_coarse_wider_than_fine(self, spectra) -> None:
        """Test W2 > W1 is refused."""
        fine, coarse = spectra
        with pytest.raises(ExpansionMismatchError) as exc_info:
            cross_expansion_coefficients(coarse, fine)
        assert "exceeds" in str(exc_info.value)

    def test_different_grid(self, three_clusters: AngularSupport) -> None:
        """Test spectra built without a shared reference bandwidth are refused."""
        fine = eigendecompose(KernelSpec.default(three_clusters, 20.0))
        coarse = eigendecompose(KernelSpec.default(three_clusters, 10.0))
        with pytest.raises(ExpansionMismatchError) as exc_info:
            cross_expansion_coefficients(fine, coarse)
        assert "grids differ" in str(exc_info.value)
