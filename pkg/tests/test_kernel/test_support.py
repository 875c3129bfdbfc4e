"""Tests for angular supports."""

import numpy as np
import pytest

from colored_scatter.errors import InvalidSupportError
from colored_scatter.kernel import AngularSupport


class TestParse:
    """Tests for the a:b,c:d interval syntax."""

    def test_three_clusters(self, three_clusters: AngularSupport) -> None:
        """Test the three-cluster support has M=3 and |Omega|=0.9."""
        assert three_clusters.cluster_count() == 3
        assert three_clusters.measure() == pytest.approx(0.9)
        assert three_clusters.intervals[0] == (-1.0, -0.7)

    def test_whitespace_tolerated(self) -> None:
        """Test spaces around chunks are ignored."""
        support = AngularSupport.parse(" -0.5:0.1 , 0.2:0.4 ")
        assert support.intervals == ((-0.5, 0.1), (0.2, 0.4))

    def test_overlap_rejected(self) -> None:
        """Test overlapping intervals are an error."""
        with pytest.raises(InvalidSupportError) as exc_info:
            AngularSupport.parse("0:0.5,0.4:0.9")
        assert "overlap" in str(exc_info.value)

    def test_touching_rejected(self) -> None:
        """Test intervals sharing an endpoint are an error."""
        with pytest.raises(InvalidSupportError):
            AngularSupport.parse("0:0.5,0.5:0.9")

    def test_outside_range_rejected(self) -> None:
        """Test endpoints beyond [-1, 1] are an error."""
        with pytest.raises(InvalidSupportError):
            AngularSupport.parse("-1.2:0")

    def test_reversed_interval_rejected(self) -> None:
        """Test b <= a is an error."""
        with pytest.raises(InvalidSupportError):
            AngularSupport.parse("0.5:0.2")

    def test_malformed_chunks_rejected(self) -> None:
        """Test chunks without a colon or with text endpoints are errors."""
        for text in ["0.5", "a:b", ":0.3", ""]:
            with pytest.raises(InvalidSupportError):
                AngularSupport.parse(text)

    def test_unsorted_input_sorted(self) -> None:
        """Test parse accepts intervals in any order."""
        support = AngularSupport.parse("0.7:1,-1:-0.7")
        assert support.intervals == ((-1.0, -0.7), (0.7, 1.0))

    def test_text_round_trip(self, three_clusters: AngularSupport) -> None:
        """Test to_text produces parseable text for the same support."""
        assert AngularSupport.parse(three_clusters.to_text()) == three_clusters


class TestConstruction:
    """Tests for direct construction and helpers."""

    def test_unsorted_tuple_rejected(self) -> None:
        """Test the constructor requires sorted intervals."""
        with pytest.raises(InvalidSupportError):
            AngularSupport(((0.5, 0.6), (0.1, 0.2)))

    def test_nonfinite_rejected(self) -> None:
        """Test NaN endpoints are an error."""
        with pytest.raises(InvalidSupportError):
            AngularSupport(((float("nan"), 0.2),))

    def test_empty_support(self) -> None:
        """Test the empty support is representable."""
        support = AngularSupport()
        assert support.is_empty
        assert support.measure() == 0.0
        assert support.cluster_count() == 0

    def test_cluster(self, three_clusters: AngularSupport) -> None:
        """Test one cluster can be taken out as its own support."""
        middle = three_clusters.cluster(1)
        assert middle.intervals == ((-0.15, 0.15),)
        assert three_clusters.cluster_measures() == pytest.approx([0.3, 0.3, 0.3])

    def test_contains_is_boundary_inclusive(self, three_clusters: AngularSupport) -> None:
        """Test endpoints belong to the support."""
        assert three_clusters.contains(-1.0)
        assert three_clusters.contains(0.15)
        assert not three_clusters.contains(0.5)

    def test_hashable(self, three_clusters: AngularSupport) -> None:
        """Test supports can key caches."""
        assert hash(three_clusters) == hash(AngularSupport.parse("-1:-0.7,-0.15:0.15,0.7:1"))


class TestGridIndices:
    """Tests for grid node selection."""

    def test_boundary_nodes_included(self) -> None:
        """Test k/K on an endpoint is selected."""
        support = AngularSupport.parse("-1:-0.7,0.7:1")
        indices, labels = support.grid_indices(10)
        np.testing.assert_array_equal(indices, [-10, -9, -8, -7, 7, 8, 9, 10])
        np.testing.assert_array_equal(labels, [0, 0, 0, 0, 1, 1, 1, 1])

    def test_node_count_tracks_measure(self, three_clusters: AngularSupport) -> None:
        """Test about |Omega| K nodes fall inside the support."""
        indices, _ = three_clusters.grid_indices(512)
        assert abs(indices.size - 0.9 * 512) <= 3
        assert np.all(np.diff(indices) > 0)

    def test_empty_support_has_no_nodes(self) -> None:
        """Test the empty support selects nothing."""
        indices, labels = AngularSupport().grid_indices(16)
        assert indices.size == 0
        assert labels.size == 0
