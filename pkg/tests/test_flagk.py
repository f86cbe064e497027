"""
Tests for the fixed-point model of flag-variety K-theory.
"""

from unittest.mock import patch

import pytest

from src.core.utils import InvalidCompositionError
from src.flagk.model import (
    Composition,
    FixedPoint,
    KOperator,
    _gens,
    adjoint,
    adjoint_E,
    apply,
    compositions,
    conjugate,
    euler_gram,
    fixed_points,
    is_symmetric_laurent,
    operator_E,
    pairing,
    structure_sheaf,
    torus_field,
    validate_composition,
)

P1 = Composition((1, 1))
POINT = Composition((0, 2))


class TestWeights:
    """Test compositions and fixed points."""

    def test_compositions_order(self):
        """Test C(2, 2) in reverse-lexicographic order."""
        assert compositions(2, 2) == [
            Composition((2, 0)),
            Composition((1, 1)),
            Composition((0, 2)),
        ]

    def test_validate_composition(self):
        """Test accepted and rejected weights."""
        assert validate_composition([1, 1, 0], 3, 2) == Composition((1, 1, 0))
        with pytest.raises(InvalidCompositionError, match="not a weak composition"):
            validate_composition([1, 2], 2, 2)
        with pytest.raises(InvalidCompositionError, match="not a weak composition"):
            validate_composition([3, -1], 2, 2)

    def test_shifted(self):
        """Test the weight shift by alpha_i."""
        assert Composition((2, 1, 1)).shifted(2) == Composition((2, 2, 0))
        assert Composition((2, 1, 1)).shifted(1, -1) == Composition((1, 2, 1))

    def test_fixed_points_of_p1(self):
        """Test the two coordinate flags of P^1."""
        assert fixed_points(P1) == (
            FixedPoint(((1,), (2,))),
            FixedPoint(((2,), (1,))),
        )

    def test_fixed_point_counts(self):
        """Test Gr(2,4) and the point."""
        assert len(fixed_points(Composition((2, 2)))) == 6
        assert len(fixed_points(Composition((0, 3)))) == 1
        assert fixed_points(Composition((3, -1))) == ()


class TestLocalization:
    """Test classes, pairings and the involution."""

    def test_structure_sheaf_self_pairing(self):
        """Test <O, O> = 1 on P^1."""
        O = structure_sheaf(P1)
        assert pairing(O, O, P1) == torus_field(2).one

    def test_twisted_pairing(self):
        """Test <E[1,1] 1_eta, O> = t1^-1 + t2^-1 on P^1."""
        t1, t2 = _gens(2)
        image = apply(operator_E(1, 1, POINT), structure_sheaf(POINT))
        assert image == (t1, t2)
        assert pairing(image, structure_sheaf(P1), P1) == 1 / t1 + 1 / t2

    def test_gram_of_p1(self):
        """Test the localization weights of P^1."""
        t1, t2 = _gens(2)
        one = torus_field(2).one
        assert euler_gram(P1) == (one / (one - t1 / t2), one / (one - t2 / t1))

    def test_conjugate(self):
        """Test the involution t -> 1/t."""
        t1, t2 = _gens(2)
        one = torus_field(2).one
        value = t1 / (one - t1 / t2)
        assert conjugate(value) == (one / t1) / (one - t2 / t1)
        assert conjugate(conjugate(value)) == value

    def test_symmetric_laurent(self):
        """Test the symmetric Laurent polynomial predicate."""
        t1, t2 = _gens(2)
        assert is_symmetric_laurent(t1 + t2, 2)
        assert is_symmetric_laurent(1 / t1 + 1 / t2, 2)
        assert not is_symmetric_laurent(t1, 2)
        assert not is_symmetric_laurent(1 / (t1 - t2), 2)


class TestOperators:
    """Test E operators and their adjoints."""

    def test_operator_shape(self):
        """Test that E[1,r] 1_(0,2) maps one point to two."""
        op = operator_E(1, 0, POINT)
        assert op.source == POINT
        assert op.target == P1
        assert op.shape == (2, 1)

    def test_empty_target(self):
        """Test that leaving C(n, N) gives the zero operator."""
        op = operator_E(1, 0, Composition((2, 0)))
        assert op.target == Composition((3, -1))
        assert op.is_zero()

    def test_vertex_out_of_range(self):
        """Test that the vertex must lie in [1, n-1]."""
        with pytest.raises(InvalidCompositionError, match="outside"):
            operator_E(2, 0, P1)

    def test_composition_mismatch(self):
        """Test that operators compose only through a common weight."""
        with pytest.raises(ValueError, match="cannot compose"):
            operator_E(1, 0, POINT) @ operator_E(1, 0, POINT)

    def test_identity_adjoint(self):
        """Test that the identity is self-adjoint on both sides."""
        identity = KOperator.identity(P1, 2)
        assert (adjoint(identity, "right") - identity).is_zero()
        assert (adjoint(identity, "left") - identity).is_zero()

    def test_zero_adjoint(self):
        """Test that the adjoint of an out-of-range operator is zero."""
        op = operator_E(1, 2, Composition((2, 0)))
        result = adjoint(op)
        assert result.source == op.target
        assert result.target == op.source
        assert result.is_zero()

    def test_right_adjunction(self):
        """Test <E a, b> = <a, E^R b>."""
        op = operator_E(1, 1, Composition((1, 2)))
        right = adjoint(op, "right")
        a = structure_sheaf(op.source)
        b = apply(operator_E(1, -1, Composition((1, 2))), structure_sheaf(op.source))
        assert pairing(apply(op, a), b, op.target) == pairing(a, apply(right, b), op.source)

    def test_left_adjunction(self):
        """Test <E^L a, b> = <a, E b>."""
        op = operator_E(1, 0, Composition((1, 2)))
        left = adjoint(op, "left")
        a = apply(operator_E(1, 2, Composition((1, 2))), structure_sheaf(op.source))
        b = structure_sheaf(op.source)
        assert pairing(apply(left, a), b, op.source) == pairing(a, apply(op, b), op.target)

    def test_adjoint_E_direction(self):
        """Test that E^R[i,r] 1_k starts at k and lowers the weight."""
        right = adjoint_E(1, 0, P1)
        assert right.source == P1
        assert right.target == POINT

    def test_adjunction_check_can_be_disabled(self):
        """Test that adjoints are built without verification when switched off."""
        op = operator_E(1, 3, Composition((1, 2)))
        with patch("src.flagk.model._verify_adjunction") as mock_verify:
            with patch("src.flagk.model.settings") as mock_settings:
                mock_settings.verify_adjunctions = False
                adjoint(op)
            mock_verify.assert_not_called()
