"""
Tests for the semiorthogonal decomposition checks.
"""

import pytest

from src.core.config import Caps
from src.core.utils import ResourceCapError
from src.flagk.model import Composition
from src.flagk.sod import (
    YoungDiagram,
    YoungTuple,
    block_operator,
    highest_weight,
    sod_check,
    sod_tuples,
    young_diagrams,
)


class TestYoungDiagrams:
    """Test diagram enumeration and ordering."""

    def test_two_by_two(self):
        """Test P(2,2) in lexicographic order."""
        assert [d.parts for d in young_diagrams(2, 2)] == [
            (),
            (1,),
            (1, 1),
            (2,),
            (2, 1),
            (2, 2),
        ]

    def test_no_rows(self):
        """Test that P(a, 0) holds only the empty diagram."""
        assert young_diagrams(3, 0) == [YoungDiagram(())]

    def test_lexicographic_order(self):
        """Test (1) < (2)."""
        assert YoungDiagram((1,)) < YoungDiagram((2,))
        first = YoungTuple((YoungDiagram((1,)),), (1,))
        second = YoungTuple((YoungDiagram((2,)),), (1,))
        assert first < second

    def test_tuples_for_three_step_flag(self):
        """Test the labels of Fl_(1,1,0)."""
        labels = sod_tuples(Composition((1, 1, 0)))
        assert [str(label) for label in labels] == ["[(),()]", "[(1),()]"]


class TestBlocks:
    """Test block classes and the decomposition checks."""

    def test_block_lands_in_weight(self):
        """Test that every block class maps the point to Fl_k."""
        k = Composition((2, 2))
        for label in sod_tuples(k):
            op = block_operator(label, k)
            assert op.source == highest_weight(2, 4)
            assert op.target == k

    def test_projective_line(self):
        """Test Fl_(1,1) = P^1."""
        result = sod_check(Composition((1, 1)))
        assert result.report.passed
        assert (result.blocks, result.points, result.rank) == (2, 2, 2)
        assert result.full

    def test_three_step_flag(self):
        """Test n=3, N=2, k=(1,1,0)."""
        result = sod_check(Composition((1, 1, 0)))
        assert result.report.passed
        assert result.blocks == 2
        assert result.full
        assert result.deficit == 0

    def test_grassmannian(self):
        """Test Gr(2,4): six blocks and a full decomposition."""
        result = sod_check(Composition((2, 2)))
        assert result.report.passed
        assert result.blocks == 6
        assert result.points == 6
        assert result.rank == 6
        data = result.to_dict()
        assert data["full"] is True
        assert data["complement_rank"] == 0
        assert len(data["pairings"]) == 36

    def test_complete_flags_are_covered(self):
        """Test Fl_(1,1,1): |P(1,1)| x |P(1,2)| = 6 blocks span all 6 fixed points."""
        result = sod_check(Composition((1, 1, 1)))
        assert result.report.passed
        assert (result.blocks, result.points, result.rank) == (6, 6, 6)
        assert result.full
        assert result.deficit == 0

    def test_caps(self):
        """Test that oversized weights are refused."""
        caps = Caps(
            max_alpha_sum=4, max_m=6, max_flag_n=3, max_flag_points=3, max_orbit_coordinates=10
        )
        with pytest.raises(ResourceCapError, match="exceeds the caps"):
            sod_check(Composition((2, 2)), caps)
