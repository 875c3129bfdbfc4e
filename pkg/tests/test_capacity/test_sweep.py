"""Tests for the Monte Carlo capacity sweep."""

import numpy as np
import pytest

from colored_scatter.capacity import (
    SnrPoint,
    build_sampler,
    ergodic_sweep,
    sample_trials,
    waterfill,
)
from colored_scatter.channel import ArrayGeometry, calibrate_eta
from colored_scatter.errors import DimensionMismatchError, InvalidConfigError
from colored_scatter.kernel import AngularSupport
from colored_scatter.scatter import Bounce, ScatterConfig, sample_field

SNRS = [SnrPoint.from_db(0.0), SnrPoint.from_db(30.0)]


@pytest.fixture
def config(three_clusters: AngularSupport) -> ScatterConfig:
    return ScatterConfig.symmetric(three_clusters, 0.1, 32)


class TestErgodicSweep:
    """Tests for sweep results and their ordering."""

    def test_result_grid(self, config: ScatterConfig) -> None:
        """Test one result per array and SNR, arrays ascending."""
        results = ergodic_sweep(config, [2, 0, 1], SNRS, trials=4, seed=7, eta=1.0)
        expected = [(1, 0), (1, 30), (3, 0), (3, 30), (5, 0), (5, 30)]
        assert [(r.antennas, round(r.snr_db)) for r in results] == expected
        assert all(r.trials == 4 and r.gamma == 0.1 for r in results)

    def test_deterministic(self, config: ScatterConfig) -> None:
        """Test a fixed seed reproduces every mean exactly."""
        a = ergodic_sweep(config, [1, 3], SNRS, trials=6, seed=7)
        b = ergodic_sweep(config, [1, 3], SNRS, trials=6, seed=7)
        assert a == b

    def test_seed_changes_results(self, config: ScatterConfig) -> None:
        """Test different seeds draw different channels."""
        a = ergodic_sweep(config, [3], SNRS, trials=4, seed=1, eta=1.0)
        b = ergodic_sweep(config, [3], SNRS, trials=4, seed=2, eta=1.0)
        assert a[0].mean_mi_equal_power != b[0].mean_mi_equal_power

    def test_waterfilling_dominates(self, config: ScatterConfig) -> None:
        """Test the waterfilling mean never falls below equal power."""
        for result in ergodic_sweep(config, [0, 2, 5], SNRS, trials=8, seed=3):
            assert result.mean_capacity_wf >= result.mean_mi_equal_power - 1e-12
            assert result.dominance_violations == 0
            assert result.ci_mi >= 0.0 and result.ci_cap >= 0.0

    def test_normalized_by_c0(self, config: ScatterConfig) -> None:
        """Test the normalized columns divide by log2(1 + P/sigma^2)."""
        result = ergodic_sweep(config, [1], [SNRS[1]], trials=4, seed=0)[0]
        assert result.c0 == pytest.approx(np.log2(1001.0))
        assert result.mi_norm == pytest.approx(result.mean_mi_equal_power / result.c0)

    def test_dof_limit_attached(self, config: ScatterConfig) -> None:
        """Test each result carries |Omega| min{L, 1/Gamma}."""
        results = ergodic_sweep(config, [2, 12], [SNRS[0]], trials=2, seed=0, eta=1.0)
        assert results[0].dof_limit == pytest.approx(1.8)
        assert results[1].dof_limit == pytest.approx(9.0)

    def test_geometries_accepted(self, config: ScatterConfig) -> None:
        """Test ArrayGeometry and half-counts are interchangeable."""
        a = ergodic_sweep(config, [ArrayGeometry(2, 32)], SNRS, trials=3, seed=5, eta=1.0)
        b = ergodic_sweep(config, [2], SNRS, trials=3, seed=5, eta=1.0)
        assert a == b

    def test_geometry_grid_mismatch(self, config: ScatterConfig) -> None:
        """Test an array on another grid is refused."""
        with pytest.raises(DimensionMismatchError):
            ergodic_sweep(config, [ArrayGeometry(2, 64)], SNRS, trials=3, seed=0)

    @pytest.mark.parametrize("trials", [0, 1])
    def test_too_few_trials(self, config: ScatterConfig, trials: int) -> None:
        """Test a confidence interval needs two trials."""
        with pytest.raises(InvalidConfigError):
            ergodic_sweep(config, [1], SNRS, trials=trials, seed=0)

    def test_empty_grids(self, config: ScatterConfig) -> None:
        """Test arrays and SNRs must be non-empty."""
        with pytest.raises(InvalidConfigError):
            ergodic_sweep(config, [], SNRS, trials=2, seed=0)
        with pytest.raises(InvalidConfigError):
            ergodic_sweep(config, [1], [], trials=2, seed=0)

    def test_default_eta_is_calibrated(self, config: ScatterConfig) -> None:
        """Test omitting eta uses the calibration at min(49, K)."""
        implicit = ergodic_sweep(config, [1], SNRS, trials=3, seed=4)
        eta = calibrate_eta(config, 32)
        assert implicit == ergodic_sweep(config, [1], SNRS, trials=3, seed=4, eta=eta)


class TestSampleTrials:
    """Tests for per-trial sampling and worker independence."""

    def test_shape(self, config: ScatterConfig) -> None:
        """Test values come out as (trials, arrays, snrs, 2)."""
        sampler = build_sampler(config, [1, 3, 3], SNRS, eta=1.0)
        assert sampler.half_counts == (1, 3)
        assert sample_trials(sampler, 5, seed=0).shape == (5, 2, 2, 2)

    def test_workers_do_not_change_results(self, config: ScatterConfig) -> None:
        """Test two workers reproduce the serial values bit for bit."""
        sampler = build_sampler(config, [0, 2], SNRS, eta=1.0)
        serial = sample_trials(sampler, 10, seed=9, workers=1)
        parallel = sample_trials(sampler, 10, seed=9, workers=2)
        np.testing.assert_array_equal(serial, parallel)

    def test_subarrays_share_one_channel(self, config: ScatterConfig) -> None:
        """Test a trial's 1x1 channel is the center entry of the largest array."""
        small = build_sampler(config, [0], [SnrPoint(1.0)], eta=1.0)
        large = build_sampler(config, [0, 4], [SnrPoint(1.0)], eta=1.0)
        np.testing.assert_allclose(small.trial(3, 2)[0], large.trial(3, 2)[0], rtol=1e-12)

    def test_trial_matches_brute_force_channel(self, config: ScatterConfig) -> None:
        """Test a trial's rates come from the explicit sum over grid nodes."""
        sampler = build_sampler(config, [0, 2], SNRS, eta=0.7)
        values = sampler.trial(4, 3)
        field = sample_field(config, 4, trial=3)

        k = np.asarray(field.rx_indices)[:, None, None, None]
        l = np.asarray(field.tx_indices)[None, :, None, None]
        m = np.arange(-2, 3)[None, None, :, None]
        n = np.arange(-2, 3)[None, None, None, :]
        terms = (
            np.exp(1j * np.pi * k * m / 32)
            * field.values[:, :, None, None]
            * np.exp(-1j * np.pi * l * n / 32)
        )
        expected = 0.7 * terms.sum(axis=(0, 1))

        for i, half in enumerate((0, 2)):
            block = expected[2 - half : 3 + half, 2 - half : 3 + half]
            gram = block @ block.conj().T
            for j, snr in enumerate(SNRS):
                size = 2 * half + 1
                _, logdet = np.linalg.slogdet(np.eye(size) + snr.ratio / size * gram)
                assert values[i, j, 0] == pytest.approx(logdet / np.log(2.0), rel=1e-10)
                gains = np.clip(np.linalg.eigvalsh(gram), 0.0, None) / snr.noise_var
                capacity = waterfill(gains, snr.power).capacity_bits
                assert values[i, j, 1] == pytest.approx(capacity, rel=1e-10)


@pytest.mark.slow
class TestSaturation:
    """Tests that waterfilling capacity stops growing once L passes 1/Gamma."""

    @staticmethod
    def _growth(support: AngularSupport, gamma: float, bounce: Bounce) -> float:
        config = ScatterConfig.symmetric(support, gamma, 512, bounce)
        results = ergodic_sweep(
            config, [30, 49], [SnrPoint.from_db(30.0)], trials=500, seed=1
        )
        return results[1].cap_norm / results[0].cap_norm

    def test_correlated_scattering_saturates(self, three_clusters: AngularSupport) -> None:
        """Test 61 to 99 antennas barely helps at Gamma = 0.1."""
        assert self._growth(three_clusters, 0.1, Bounce.MULTI) < 1.1

    def test_fine_scattering_keeps_growing(self, three_clusters: AngularSupport) -> None:
        """Test 61 to 99 antennas still helps at Gamma = 0.005."""
        assert self._growth(three_clusters, 0.005, Bounce.MULTI) > 1.2
