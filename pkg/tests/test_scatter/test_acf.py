"""Tests for the sinc autocorrelation and its square root."""

import numpy as np
import pytest

from colored_scatter.errors import EmptySupportError
from colored_scatter.kernel import AngularSupport
from colored_scatter.scatter import acf_value, correlation_matrix, covariance_factor


class TestAcfValue:
    """Tests for (1/gamma) sinc(delta/gamma)."""

    def test_peak(self) -> None:
        """Test the value at zero lag is 1/gamma."""
        assert acf_value(0.1, 0.0) == pytest.approx(10.0)

    def test_zeros_at_multiples_of_gamma(self) -> None:
        """Test the sinc vanishes at nonzero multiples of gamma."""
        np.testing.assert_allclose(acf_value(0.1, np.array([0.1, 0.2, -0.3])), 0.0, atol=1e-12)

    def test_even(self) -> None:
        """Test the correlation is symmetric in the lag."""
        lags = np.linspace(0.0, 0.5, 11)
        np.testing.assert_array_equal(acf_value(0.07, lags), acf_value(0.07, -lags))

    def test_side_lobes_beyond_gamma(self) -> None:
        """Test the correlation keeps oscillating past |delta| = gamma."""
        assert acf_value(0.1, 0.15) == pytest.approx(-10.0 / (1.5 * np.pi))
        assert acf_value(0.1, 0.25) == pytest.approx(10.0 / (2.5 * np.pi))


class TestCorrelationMatrix:
    """Tests for the sampled correlation between grid nodes."""

    def test_diagonal_is_cell_scaled_peak(self) -> None:
        """Test R_ii = 1/(K gamma)."""
        matrix = correlation_matrix(np.arange(-4, 5), 0.25, 16)
        np.testing.assert_allclose(np.diag(matrix), 1.0 / (16 * 0.25))
        np.testing.assert_array_equal(matrix, matrix.T)


class TestCovarianceFactor:
    """Tests for the clipped positive-semidefinite square root."""

    @pytest.fixture
    def factor(self, three_clusters: AngularSupport):
        return covariance_factor(three_clusters, 0.1, 32)

    def test_square_root_reconstructs(self, factor) -> None:
        """Test S S^T matches R."""
        assert factor.reconstruction_error() < 1e-8
        np.testing.assert_array_equal(factor.factor, factor.factor.T)

    @pytest.mark.parametrize("gamma,grid_k", [(0.1, 512), (0.02, 512), (0.005, 512), (0.2, 16)])
    def test_reconstruction_across_widths(
        self, three_clusters: AngularSupport, gamma: float, grid_k: int
    ) -> None:
        """Test S S^T reproduces R within 1e-8 from near-white to strongly correlated."""
        assert covariance_factor(three_clusters, gamma, grid_k).reconstruction_error() < 1e-8

    def test_eigenvalues_descending_and_nonnegative(self, factor) -> None:
        """Test the kept eigenvalues are sorted and clipped at zero."""
        assert np.all(np.diff(factor.eigenvalues) <= 0)
        assert factor.eigenvalues.min() >= 0.0
        assert factor.clipped_mass < 1e-3 * np.trace(factor.covariance)

    def test_rank_tracks_bandwidth(self, single_interval: AngularSupport) -> None:
        """Test an oversampled grid has rank near |Omega|/gamma, not the node count."""
        factor = covariance_factor(single_interval, 0.1, 128)
        assert factor.size == 77
        assert 6 <= factor.rank() < factor.size // 2

    def test_labels_follow_clusters(self, factor) -> None:
        """Test every node carries its cluster index."""
        assert set(factor.labels.tolist()) == {0, 1, 2}
        assert np.all(np.diff(factor.labels) >= 0)

    def test_read_only(self, factor) -> None:
        """Test the cached arrays are frozen."""
        with pytest.raises(ValueError):
            factor.factor[0, 0] = 0.0

    def test_cached(self, three_clusters: AngularSupport, factor) -> None:
        """Test repeated requests return the same factor."""
        assert covariance_factor(three_clusters, 0.1, 32) is factor

    def test_support_without_nodes(self) -> None:
        """Test a support between grid nodes is refused."""
        with pytest.raises(EmptySupportError):
            covariance_factor(AngularSupport.parse("0.01:0.02"), 0.1, 16)
