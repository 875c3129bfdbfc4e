"""Tests for scattering-field synthesis and the binary dump."""

from pathlib import Path

import numpy as np
import pytest

from colored_scatter.errors import (
    EmptySupportError,
    FieldDumpError,
    InvalidConfigError,
    UnderResolvedError,
)
from colored_scatter.kernel import AngularSupport
from colored_scatter.scatter import (
    Bounce,
    ScatterConfig,
    build_synthesizer,
    correlation_matrix,
    read_field_dump,
    sample_field,
    trial_rng,
    write_field_dump,
)

SUPPORT = "-1:-0.7,-0.15:0.15,0.7:1"
DRAWS = 2000


@pytest.fixture
def multi_config(three_clusters: AngularSupport) -> ScatterConfig:
    return ScatterConfig.symmetric(three_clusters, 0.1, 32)


@pytest.fixture
def single_config(three_clusters: AngularSupport) -> ScatterConfig:
    return ScatterConfig.symmetric(three_clusters, 0.1, 32, Bounce.SINGLE)


class TestScatterConfig:
    """Tests for config validation."""

    def test_bounce_from_string(self, three_clusters: AngularSupport) -> None:
        """Test the mechanism accepts its CLI spelling."""
        config = ScatterConfig(three_clusters, three_clusters, 0.1, 0.1, 32, "single")
        assert config.bounce is Bounce.SINGLE

    def test_gamma_finer_than_grid(self, three_clusters: AngularSupport) -> None:
        """Test gamma * K < 1 is under-resolved."""
        with pytest.raises(UnderResolvedError):
            ScatterConfig.symmetric(three_clusters, 0.01, 32)

    @pytest.mark.parametrize("gamma", [0.0, -0.1])
    def test_nonpositive_gamma(self, three_clusters: AngularSupport, gamma: float) -> None:
        """Test gamma must be positive."""
        with pytest.raises(InvalidConfigError):
            ScatterConfig.symmetric(three_clusters, gamma, 32)

    def test_nonpositive_grid(self, three_clusters: AngularSupport) -> None:
        """Test K must be positive."""
        with pytest.raises(InvalidConfigError):
            ScatterConfig.symmetric(three_clusters, 0.1, 0)

    def test_empty_support(self, three_clusters: AngularSupport) -> None:
        """Test either side being empty is refused."""
        with pytest.raises(EmptySupportError):
            ScatterConfig(AngularSupport(), three_clusters, 0.1, 0.1, 32)

    def test_single_bounce_needs_matching_clusters(
        self, three_clusters: AngularSupport, single_interval: AngularSupport
    ) -> None:
        """Test single bounce pairs cluster i with cluster i."""
        with pytest.raises(InvalidConfigError) as exc_info:
            ScatterConfig(three_clusters, single_interval, 0.1, 0.1, 32, Bounce.SINGLE)
        assert "equal cluster counts" in str(exc_info.value)


class TestSampleField:
    """Tests for drawing fields."""

    def test_deterministic(self, multi_config: ScatterConfig) -> None:
        """Test the same seed and trial give bit-identical fields."""
        a = sample_field(multi_config, 7, 3)
        b = sample_field(multi_config, 7, 3)
        np.testing.assert_array_equal(a.values, b.values)

    def test_trials_differ(self, multi_config: ScatterConfig) -> None:
        """Test distinct trials draw distinct fields."""
        a = sample_field(multi_config, 7, 0)
        b = sample_field(multi_config, 7, 1)
        assert not np.allclose(a.values, b.values)

    def test_trial_rng_keyed_by_xor(self) -> None:
        """Test the trial stream depends on seed XOR trial."""
        assert trial_rng(5, 3).standard_normal() == trial_rng(6, 0).standard_normal()

    def test_multi_bounce_fills_support(self, multi_config: ScatterConfig) -> None:
        """Test multi bounce covers the whole product support."""
        field = sample_field(multi_config, 1)
        assert field.mask.all()
        assert np.all(field.values != 0)
        np.testing.assert_allclose(field.rx_cosines, field.rx_indices / 32)

    def test_single_bounce_blocks(self, single_config: ScatterConfig) -> None:
        """Test single bounce is zero off the per-cluster blocks."""
        synthesizer = build_synthesizer(single_config)
        assert len(synthesizer.blocks) == 3
        field = sample_field(single_config, 1)
        assert field.bounce is Bounce.SINGLE
        assert np.all(field.values[~field.mask] == 0)
        assert np.all(field.values[field.mask] != 0)
        assert field.mask.sum() == sum(b.rows.size * b.cols.size for b in synthesizer.blocks)


def _draws(config: ScatterConfig, seed: int) -> np.ndarray:
    synthesizer = build_synthesizer(config)
    rng = trial_rng(seed)
    return np.stack([synthesizer.draw(rng).values for _ in range(DRAWS)])


class TestFieldMoments:
    """Tests for the first and second moments of sampled fields, at 5 standard errors."""

    @pytest.fixture(scope="class")
    def multi_draws(self) -> np.ndarray:
        return _draws(ScatterConfig.symmetric(AngularSupport.parse(SUPPORT), 0.1, 32), 11)

    @pytest.fixture(scope="class")
    def single_draws(self) -> np.ndarray:
        config = ScatterConfig.symmetric(AngularSupport.parse(SUPPORT), 0.1, 32, Bounce.SINGLE)
        return _draws(config, 12)

    @staticmethod
    def _covariance(multi_config: ScatterConfig) -> tuple[np.ndarray, np.ndarray]:
        field = sample_field(multi_config, 0)
        return (
            correlation_matrix(field.rx_indices, 0.1, 32),
            correlation_matrix(field.tx_indices, 0.1, 32),
        )

    def test_zero_mean(self, multi_config: ScatterConfig, multi_draws: np.ndarray) -> None:
        """Test every entry averages to zero."""
        r_r, r_t = self._covariance(multi_config)
        power = np.outer(np.diag(r_r), np.diag(r_t))
        standard_error = np.sqrt(power / DRAWS)
        assert np.all(np.abs(multi_draws.mean(axis=0)) < 5 * standard_error)

    def test_entry_power(self, multi_config: ScatterConfig, multi_draws: np.ndarray) -> None:
        """Test E|h|^2 is the product of the covariance diagonals."""
        r_r, r_t = self._covariance(multi_config)
        power = np.outer(np.diag(r_r), np.diag(r_t))
        measured = (np.abs(multi_draws) ** 2).mean(axis=0)
        assert np.all(np.abs(measured - power) < 5 * power / np.sqrt(DRAWS))

    @pytest.mark.parametrize(
        "first,second", [((0, 0), (1, 1)), ((3, 5), (4, 3)), ((0, 2), (28, 27))]
    )
    def test_cross_covariance(
        self,
        multi_config: ScatterConfig,
        multi_draws: np.ndarray,
        first: tuple[int, int],
        second: tuple[int, int],
    ) -> None:
        """Test E{h(k1,l1) h*(k2,l2)} = R_r(k1,k2) R_t(l1,l2) off the diagonal."""
        r_r, r_t = self._covariance(multi_config)
        (k1, l1), (k2, l2) = first, second
        expected = r_r[k1, k2] * r_t[l1, l2]
        measured = (multi_draws[:, k1, l1] * multi_draws[:, k2, l2].conj()).mean()
        variance = r_r[k1, k1] * r_t[l1, l1] * r_r[k2, k2] * r_t[l2, l2] + expected**2
        assert abs(measured - expected) < 5 * np.sqrt(variance / DRAWS)

    def test_proper(self, multi_config: ScatterConfig, multi_draws: np.ndarray) -> None:
        """Test the pseudo-covariance E{h^2} vanishes."""
        r_r, r_t = self._covariance(multi_config)
        power = np.outer(np.diag(r_r), np.diag(r_t))
        pseudo = (multi_draws**2).mean(axis=0)
        assert np.all(np.abs(pseudo) < 5 * np.sqrt(2.0) * power / np.sqrt(DRAWS))

    def test_single_bounce_clusters_uncorrelated(
        self, single_config: ScatterConfig, single_draws: np.ndarray
    ) -> None:
        """Test entries of different cluster blocks are uncorrelated."""
        blocks = build_synthesizer(single_config).blocks
        first, other = blocks[0], blocks[1]
        for row, col in ((0, 0), (1, 2)):
            a = single_draws[:, first.rows[row], first.cols[col]]
            b = single_draws[:, other.rows[row], other.cols[col]]
            power = np.sqrt((np.abs(a) ** 2).mean() * (np.abs(b) ** 2).mean())
            assert abs((a * b.conj()).mean()) < 5 * power / np.sqrt(DRAWS)
        assert np.all(single_draws[:, first.rows[0], other.cols[0]] == 0)

class TestFieldDump:
    """Tests for the binary dump format."""

    def test_round_trip(self, single_config: ScatterConfig, temp_dir: Path) -> None:
        """Test a dump reads back with its grid, mask and single-precision values."""
        field = sample_field(single_config, 4)
        path = temp_dir / "field.bin"
        size = write_field_dump(field, path)
        assert size == path.stat().st_size

        loaded = read_field_dump(path)
        assert loaded.grid_k == 32
        assert loaded.bounce is Bounce.SINGLE
        np.testing.assert_array_equal(loaded.rx_indices, field.rx_indices)
        np.testing.assert_array_equal(loaded.mask, field.mask)
        np.testing.assert_allclose(loaded.values, field.values, rtol=1e-6, atol=1e-7)

    def test_bad_magic(self, multi_config: ScatterConfig, temp_dir: Path) -> None:
        """Test a foreign file is refused."""
        path = temp_dir / "field.bin"
        write_field_dump(sample_field(multi_config, 0), path)
        data = bytearray(path.read_bytes())
        data[:4] = b"XXXX"
        path.write_bytes(bytes(data))
        with pytest.raises(FieldDumpError) as exc_info:
            read_field_dump(path)
        assert "bad magic" in str(exc_info.value)

    def test_truncated(self, multi_config: ScatterConfig, temp_dir: Path) -> None:
        """Test a short payload is refused."""
        path = temp_dir / "field.bin"
        write_field_dump(sample_field(multi_config, 0), path)
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(FieldDumpError) as exc_info:
            read_field_dump(path)
        assert "expected" in str(exc_info.value)

    def test_shorter_than_header(self, temp_dir: Path) -> None:
        """Test a file without a full header is refused."""
        path = temp_dir / "field.bin"
        path.write_bytes(b"CSFD")
        with pytest.raises(FieldDumpError):
            read_field_dump(path)
