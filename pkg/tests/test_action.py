"""
Tests for the K-theory shadow of the categorical action.
"""

import pytest

from src.algebra.isomap import phi
from src.algebra.uplus import UElement, Word
from src.core.config import Caps
from src.core.utils import ResourceCapError, UsageError
from src.flagk.action import verify_action
from src.flagk.model import Composition, compositions, operator_E


class TestVerifyAction:
    """Test the action conditions on partial flag varieties."""

    def test_grassmannians_of_c2(self):
        """Test n=2, N=2 on the window [-2, 2]."""
        report = verify_action(2, 2, (-2, 2))
        assert report.passed
        counts = report.counts()
        # 5 x 5 degree pairs on each of the three weights
        assert counts["2a"] == {"pass": 75, "fail": 0}
        assert counts["3_right"] == {"pass": 15, "fail": 0}
        assert counts["3_left"] == {"pass": 15, "fail": 0}
        assert report.untested > 0

    def test_three_step_flags(self):
        """Test n=3, N=2, where adjacent conditions appear and distant ones do not."""
        report = verify_action(3, 2, (-2, 2))
        assert report.passed
        assert "2b" in report.counts()
        assert "4b_right" in report.counts()
        assert "2c" not in report.counts()

    def test_triangles_skip_empty_directions(self):
        """Test that (3) is not checked where k_i + k_{i+1} = 0."""
        report = verify_action(3, 2, (-2, 2))
        # 6 weights x 2 vertices, minus (2,0,0) at i=2 and (0,0,2) at i=1, x 5 degrees
        assert report.counts()["3_right"] == {"pass": 50, "fail": 0}
        assert report.counts()["3_left"] == {"pass": 50, "fail": 0}
        checked = {
            (row.weight, row.params["i"])
            for row in report.rows
            if row.condition.startswith("3_")
        }
        assert ((2, 0, 0), 2) not in checked
        assert ((0, 0, 2), 1) not in checked
        assert report.untested > 0

    def test_three_step_flags_in_c3(self):
        """Test n=3, N=3."""
        report = verify_action(3, 3, (-1, 1))
        assert report.passed
        assert report.untested > 0

    @pytest.mark.parametrize("N", [3, 4])
    def test_grassmannians(self, N):
        """Test n=2 on every Grassmannian of C^3 and C^4."""
        report = verify_action(2, N, (-2, 2))
        assert report.passed
        assert report.counts()["3_right"]["pass"] == (N + 1) * 5

    def test_shifted_condition_window(self):
        """Test that (4a) is checked exactly on 1 <= r - s <= k_1 + k_2 - 1."""
        report = verify_action(2, 3, (-2, 2))
        counts = report.counts()
        # per weight: r - s = 1 has 4 pairs, r - s = 2 has 3 pairs; 4 weights
        assert counts["4a_right"] == {"pass": 28, "fail": 0}
        assert counts["4a_left"] == {"pass": 28, "fail": 0}
        for row in report.rows:
            if row.condition == "4a_right":
                assert 1 <= row.params["r"] - row.params["s"] <= 2
            if row.condition == "4a_left":
                assert -2 <= row.params["r"] - row.params["s"] <= -1

    def test_distant_vertices(self):
        """Test n=4 on a single weight, which exercises the distant conditions."""
        caps = Caps(
            max_alpha_sum=4, max_m=6, max_flag_n=4, max_flag_points=4, max_orbit_coordinates=10
        )
        report = verify_action(
            4, 2, (0, 1), weights=[Composition((0, 1, 0, 1))], caps=caps
        )
        assert report.passed
        counts = report.counts()
        assert counts["2c"] == {"pass": 4, "fail": 0}
        # (1,3) and (3,1), four degree pairs each
        assert counts["4c_right"] == {"pass": 8, "fail": 0}
        assert counts["4c_left"] == {"pass": 8, "fail": 0}

    def test_flipped_sign_fails(self):
        """Test that negating the same-vertex relation is caught."""
        report = verify_action(2, 2, (-1, 1), flip_sign_2a=True)
        assert not report.passed
        failed = {row.condition for row in report.failures}
        assert failed == {"2a"}

    def test_weight_subset(self):
        """Test restricting the check to one weight."""
        report = verify_action(2, 2, (0, 0), weights=[Composition((1, 1))])
        assert {row.weight for row in report.rows} == {(1, 1)}

    def test_rows_are_canonically_ordered(self):
        """Test that report output does not depend on evaluation order."""
        forward = verify_action(2, 1, (-1, 1))
        backward = verify_action(
            2, 1, (-1, 1), weights=[Composition((0, 1)), Composition((1, 0))]
        )
        assert forward.to_dict()["checks"] == backward.to_dict()["checks"]

    def test_invalid_sizes(self):
        """Test that n < 2 or N < 1 is a usage error."""
        with pytest.raises(UsageError, match="n >= 2 and N >= 1"):
            verify_action(1, 2, (0, 0))
        with pytest.raises(UsageError, match="n >= 2 and N >= 1"):
            verify_action(2, 0, (0, 0))

    def test_caps(self):
        """Test that oversized flag varieties are refused."""
        caps = Caps(
            max_alpha_sum=4, max_m=6, max_flag_n=2, max_flag_points=3, max_orbit_coordinates=10
        )
        with pytest.raises(ResourceCapError, match="n=3 exceeds the cap 2"):
            verify_action(3, 2, (0, 0), caps=caps)
        with pytest.raises(ResourceCapError, match="N=4 exceeds the cap 3"):
            verify_action(2, 4, (0, 0), caps=caps)


class TestAgreementWithPhi:
    """Test that flag operators and phi vanish on the same words."""

    @pytest.mark.parametrize("N", [2, 3, 4])
    def test_consecutive_degrees_vanish_on_both_sides(self, N):
        """Test E[1,0] E[1,1] = 0 on every weight and phi(e[1,0] e[1,1]) = 0."""
        assert phi(UElement.from_word(Word(((1, 0), (1, 1)))), 1).is_zero()
        for mu in compositions(2, N):
            first = operator_E(1, 1, mu)
            assert (operator_E(1, 0, first.target) @ first).is_zero()

    def test_nonvanishing_word_is_nonzero_on_both_sides(self):
        """Test that e[1,1] e[1,0] survives under phi and as an operator on 1_(0,2)."""
        assert not phi(UElement.from_word(Word(((1, 1), (1, 0)))), 1).is_zero()
        mu = Composition((0, 2))
        first = operator_E(1, 0, mu)
        assert not (operator_E(1, 1, first.target) @ first).is_zero()
