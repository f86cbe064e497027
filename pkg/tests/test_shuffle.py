"""
Tests for the shuffle algebra.
"""

import random
from fractions import Fraction

import pytest

from src.algebra.ring import LaurentPoly, RationalFunction
from src.algebra.shuffle import (
    DimVector,
    KHAElement,
    SymLaurent,
    degree_one_product,
    degree_one_symmetrized,
    eta_shift,
    in_negative_sector,
    mu_product,
    pbw_decompose,
    pbw_reconstruct,
    shuffle_mul,
    shuffle_mul_full,
    symmetrize,
)
from src.core.utils import (
    AsymmetricPolynomialError,
    GradeMismatchError,
    NonPolynomialSymmetrizationError,
    ParseError,
)


def gen(n, vertex, exponent):
    return KHAElement.generator(n, vertex, exponent)


def x(vertex, slot, exponent=1):
    return LaurentPoly.variable(vertex, slot, exponent)


def random_grade(rng, n, total):
    entries = [0] * n
    for _ in range(total):
        entries[rng.randrange(n)] += 1
    return DimVector(tuple(entries))


def random_piece(rng, n, total, exponents=(-2, 2)):
    """KHA element with one or two random orbit sums in a random grade of the given size."""
    grade = random_grade(rng, n, total)
    terms = {}
    for _ in range(rng.randint(1, 2)):
        key = tuple(tuple(rng.randint(*exponents) for _ in range(a)) for a in grade.entries)
        terms[key] = Fraction(rng.randint(1, 3)) * rng.choice([1, -1])
    return KHAElement.from_piece(SymLaurent(grade, terms))


def orbit_keys(size, exponents):
    """Every sorted exponent tuple of the given length."""
    if size == 0:
        return [()]
    return [
        (e,) + rest
        for e in exponents
        for rest in orbit_keys(size - 1, [f for f in exponents if f <= e])
    ]


def piece(grade, *terms):
    """KHA element from (orbit key, coefficient) pairs."""
    dim = DimVector(tuple(grade))
    return KHAElement.from_piece(SymLaurent(dim, {key: coeff for key, coeff in terms}))


class TestDimVector:
    """Test dimension vectors."""

    def test_unit_and_sum(self):
        """Test omega_i and addition."""
        assert DimVector.unit(3, 2) + DimVector.unit(3, 2) == DimVector((0, 2, 0))

    def test_negative_entries_rejected(self):
        """Test that negative entries are rejected."""
        with pytest.raises(GradeMismatchError, match="non-negative"):
            DimVector((1, -1))

    def test_group_order(self):
        """Test |S_alpha|."""
        assert DimVector((2, 3)).group_order() == 12


class TestSymLaurent:
    """Test orbit-sum storage."""

    def test_keys_are_canonicalized(self):
        """Test that orbit keys are sorted per vertex."""
        grade = DimVector((2,))
        assert SymLaurent.orbit(grade, [(-1, 3)]) == SymLaurent.orbit(grade, [(3, -1)])

    def test_expand(self):
        """Test expansion of an orbit sum."""
        grade = DimVector((2,))
        expanded = SymLaurent.orbit(grade, [(1, 0)]).expand()
        assert expanded == LaurentPoly.variable(1, 1) + LaurentPoly.variable(1, 2)

    def test_from_laurent_round_trip(self):
        """Test conversion of a symmetric polynomial."""
        grade = DimVector((2, 1))
        sym = SymLaurent(grade, {((2, -1), (0,)): 3, ((0, 0), (4,)): Fraction(1, 2)})
        assert SymLaurent.from_laurent(sym.expand(), grade) == sym

    def test_from_laurent_asymmetric(self):
        """Test that a non-symmetric polynomial is rejected."""
        with pytest.raises(AsymmetricPolynomialError, match="not symmetric"):
            SymLaurent.from_laurent(LaurentPoly.variable(1, 1), DimVector((2,)))

    def test_wrong_key_length(self):
        """Test that an orbit key must fit the grade."""
        with pytest.raises(GradeMismatchError, match="exponents at vertex 1"):
            SymLaurent.orbit(DimVector((2,)), [(1,)])


class TestShuffleProduct:
    """Test the shuffle product."""

    def test_degree_one_vanishing(self):
        """Test x^0 * x^-1 = 0 in the one-vertex algebra."""
        assert shuffle_mul(gen(1, 1, 0), gen(1, 1, -1)).is_zero()

    def test_degree_one_nonvanishing(self):
        """Test x^-1 * x^0 = x_1^-1 + x_2^-1."""
        product = shuffle_mul(gen(1, 1, -1), gen(1, 1, 0))
        assert product == piece((2,), (((0, -1),), 1))

    def test_adjacent_vertices(self):
        """Test x_2^{-s} * x_1^{-r} = x_2^{-s} x_1^{-r} - x_2^{-s+1} x_1^{-r-1} at r=0, s=1."""
        product = shuffle_mul(gen(2, 2, -1), gen(2, 1, 0))
        expected = piece((1, 1), (((0,), (-1,)), 1), (((-1,), (0,)), -1))
        assert product == expected

    def test_adjacent_vertices_other_order(self):
        """Test that the lower vertex on the left gives the plain product."""
        product = shuffle_mul(gen(2, 1, 0), gen(2, 2, -1))
        assert product == piece((1, 1), (((0,), (-1,)), 1))

    def test_distant_vertices_commute(self):
        """Test x_1^a * x_3^b = x_3^b * x_1^a = plain product."""
        lhs = shuffle_mul(gen(3, 1, 2), gen(3, 3, 5))
        rhs = shuffle_mul(gen(3, 3, 5), gen(3, 1, 2))
        assert lhs == rhs == piece((1, 0, 1), (((2,), (), (5,)), 1))

    def test_unit(self):
        """Test that the grade-zero unit is neutral on both sides."""
        f = gen(2, 1, 3) + gen(2, 2, -2)
        assert shuffle_mul(KHAElement.unit(2), f) == f
        assert shuffle_mul(f, KHAElement.unit(2)) == f

    def test_associativity(self):
        """Test (a * b) * c = a * (b * c) on degree-one elements."""
        a, b, c = gen(1, 1, 0), gen(1, 1, 1), gen(1, 1, -1)
        assert shuffle_mul(shuffle_mul(a, b), c) == shuffle_mul(a, shuffle_mul(b, c))

    def test_mixed_associativity(self):
        """Test associativity across two vertices."""
        a, b, c = gen(2, 1, 1), gen(2, 2, 0), gen(2, 1, -1)
        assert shuffle_mul(shuffle_mul(a, b), c) == shuffle_mul(a, shuffle_mul(b, c))

    def test_bilinearity(self):
        """Test that the product distributes over sums and scalars."""
        a, b, c = gen(1, 1, 0), gen(1, 1, 2), gen(1, 1, -1)
        lhs = shuffle_mul(a.scale(2) + b, c)
        assert lhs == shuffle_mul(a, c).scale(2) + shuffle_mul(b, c)

    def test_coset_sum_matches_full_group_sum(self):
        """Test the fast product against the full symmetrization."""
        pairs = [
            (gen(1, 1, -1), gen(1, 1, 2)),
            (gen(2, 1, 1), gen(2, 2, -1)),
            (gen(2, 2, 0), gen(2, 1, 1)),
            (piece((2, 0), (((1, 0), ()), 1)), gen(2, 2, -1)),
        ]
        for f, g in pairs:
            assert shuffle_mul(f, g) == shuffle_mul_full(f, g)

    def test_mismatched_quivers(self):
        """Test that elements over different quivers cannot be multiplied."""
        with pytest.raises(GradeMismatchError, match="vertices"):
            shuffle_mul(gen(1, 1, 0), gen(2, 1, 0))


class TestDegreeOne:
    """Test the degree-one closed form and its consequences."""

    def test_degree_one_closed_form(self):
        """Test iterated product against the closed symmetrization."""
        for exponents in ([0, 1], [1, -1, 0], [2, 0, -1]):
            assert degree_one_product(exponents) == degree_one_symmetrized(exponents)

    def test_power_of_unit(self):
        """Test that the r-fold power of 1 at omega_1 is 1."""
        for r in range(1, 5):
            grade = DimVector((r,))
            assert degree_one_product([0] * r) == KHAElement.from_piece(SymLaurent.one(grade))


class TestSymmetrize:
    """Test the full group sum directly."""

    def test_two_slot_vandermonde_quotient(self):
        """Test Sym over S_2 of x2/(x2 - x1) = 1."""
        f = RationalFunction(x(1, 2), x(1, 2) - x(1, 1))
        assert symmetrize(f, DimVector((2,))) == SymLaurent.one(DimVector((2,)))

    def test_symmetric_input_is_doubled(self):
        """Test Sym over S_2 of x1 x2 = 2 x1 x2."""
        grade = DimVector((2,))
        f = RationalFunction(x(1, 1) * x(1, 2))
        assert symmetrize(f, grade) == SymLaurent.orbit(grade, [(1, 1)], 2)

    def test_three_slot_quotient(self):
        """Test Sym over S_3 of x3^2/((x3 - x1)(x3 - x2)) = 2."""
        grade = DimVector((3,))
        f = RationalFunction(x(1, 3, 2), (x(1, 3) - x(1, 1)) * (x(1, 3) - x(1, 2)))
        assert symmetrize(f, grade) == SymLaurent.one(grade).scale(2)

    def test_two_vertex_group(self):
        """Test that S_(1,2) only permutes slots within a vertex."""
        grade = DimVector((1, 2))
        f = RationalFunction(x(1, 1) * x(2, 2), x(2, 2) - x(2, 1))
        assert symmetrize(f, grade) == SymLaurent.orbit(grade, [(1,), (0, 0)])

    def test_denominator_that_does_not_clear(self):
        """Test that 2/(x1 + x2) is rejected."""
        f = RationalFunction(LaurentPoly.one(), x(1, 1) + x(1, 2))
        with pytest.raises(NonPolynomialSymmetrizationError, match="does not clear"):
            symmetrize(f, DimVector((2,)))

    def test_variables_outside_grade(self):
        """Test that a variable beyond the grade is rejected."""
        with pytest.raises(GradeMismatchError, match="outside grade"):
            symmetrize(RationalFunction(x(1, 3)), DimVector((2,)))


class TestRandomizedShuffle:
    """Seeded property checks on random low-grade elements."""

    def test_coset_sum_matches_full_group_sum_on_random_pairs(self):
        """Test the fast product against the full symmetrization on 200 random pairs."""
        rng = random.Random(1234)
        for _ in range(200):
            n = rng.randint(1, 2)
            left = rng.randint(1, 2)
            f = random_piece(rng, n, left)
            g = random_piece(rng, n, rng.randint(1, 3 - left))
            assert shuffle_mul(f, g) == shuffle_mul_full(f, g)

    def test_associativity_on_random_triples(self):
        """Test (f * g) * h = f * (g * h) with |alpha| <= 4 and n <= 3."""
        rng = random.Random(99)
        for _ in range(30):
            n = rng.randint(1, 3)
            f = random_piece(rng, n, rng.randint(1, 2))
            g = random_piece(rng, n, 1)
            h = random_piece(rng, n, 1)
            assert shuffle_mul(shuffle_mul(f, g), h) == shuffle_mul(f, shuffle_mul(g, h))

    def test_degree_one_closed_form_on_random_exponents(self):
        """Test the degree-one closed form with exponents in [-3, 3] and r <= 4."""
        rng = random.Random(5)
        for r in range(1, 5):
            for _ in range(3):
                exponents = [rng.randint(-3, 3) for _ in range(r)]
                assert degree_one_product(exponents) == degree_one_symmetrized(exponents)

    def test_eta_shift_on_random_pairs(self):
        """Test eta_k(f * g) = eta_k(f) * eta_k(g) for random pairs and shifts."""
        rng = random.Random(17)
        for _ in range(20):
            n = rng.randint(1, 2)
            f, g = random_piece(rng, n, 1), random_piece(rng, n, rng.randint(1, 2))
            k = rng.randint(-2, 2)
            assert eta_shift(k, shuffle_mul(f, g)) == shuffle_mul(eta_shift(k, f), eta_shift(k, g))


class TestPBW:
    """Test the per-vertex factorization."""

    def test_reconstruct_inverts_decompose(self):
        """Test reconstruct(decompose(f)) = f."""
        grade = DimVector((2, 1))
        f = SymLaurent(grade, {((1, 0), (-1,)): 3, ((0, 0), (2,)): -1})
        assert pbw_reconstruct(pbw_decompose(f), 2) == KHAElement.from_piece(f)

    def test_every_orbit_sum_factors(self):
        """Test that each orbit sum with |alpha| <= 4 over two vertices is a product of its parts."""
        exponents = [1, 0, -1]
        for total in range(1, 5):
            for a in range(total + 1):
                grade = DimVector((a, total - a))
                for first in orbit_keys(a, exponents):
                    for second in orbit_keys(total - a, exponents):
                        f = SymLaurent.orbit(grade, [first, second])
                        decomposition = pbw_decompose(f)
                        assert len(decomposition) == 1
                        assert pbw_reconstruct(decomposition, 2) == KHAElement.from_piece(f)

    def test_random_sums_factor_over_three_vertices(self):
        """Test decompose and reconstruct on random combinations over A_3."""
        rng = random.Random(8)
        for _ in range(15):
            grade = random_grade(rng, 3, rng.randint(1, 4))
            terms = {
                tuple(tuple(rng.randint(-1, 1) for _ in range(a)) for a in grade.entries): (
                    rng.randint(-3, 3)
                )
                for _ in range(3)
            }
            f = SymLaurent(grade, terms)
            assert pbw_reconstruct(pbw_decompose(f), 3) == KHAElement.from_piece(f)

    def test_mu_product_rejects_misplaced_part(self):
        """Test that each part must sit at its own vertex."""
        misplaced = SymLaurent.one(DimVector((0, 1)))
        with pytest.raises(GradeMismatchError, match="expected a multiple"):
            mu_product([misplaced, misplaced])


class TestShiftsAndCodecs:
    """Test degree shifts, sectors and serialization."""

    def test_eta_shift(self):
        """Test that eta_k lowers every exponent by k."""
        assert eta_shift(2, gen(1, 1, 1)) == gen(1, 1, -1)

    def test_eta_shift_is_multiplicative(self):
        """Test eta_k(f * g) = eta_k(f) * eta_k(g)."""
        f, g = gen(2, 1, 0), gen(2, 2, 1)
        assert eta_shift(1, shuffle_mul(f, g)) == shuffle_mul(eta_shift(1, f), eta_shift(1, g))

    def test_negative_sector(self):
        """Test the negative-sector predicate."""
        assert in_negative_sector(gen(1, 1, -1))
        assert not in_negative_sector(gen(1, 1, 1))
        assert in_negative_sector(shuffle_mul(gen(1, 1, -2), gen(1, 1, -1)))

    def test_json_round_trip(self):
        """Test that the JSON schema re-parses to an equal element."""
        element = shuffle_mul(gen(2, 2, -1), gen(2, 1, 0)) + gen(2, 1, 3).scale(Fraction(2, 3))
        assert KHAElement.from_json(element.to_json()) == element

    def test_json_coefficients_are_rational_strings(self):
        """Test the coefficient encoding."""
        data = gen(1, 1, 2).scale(Fraction(-1, 2)).to_json()
        assert data == {
            "n": 1,
            "components": [{"grade": [1], "terms": [{"coeff": "-1/2", "orbit": [[2]]}]}],
        }

    def test_malformed_json(self):
        """Test that missing fields raise a parse error."""
        with pytest.raises(ParseError, match="Malformed KHAElement JSON"):
            KHAElement.from_json({"components": []})

    def test_text_rendering(self):
        """Test the text form of zero and of a generator."""
        assert KHAElement.zero(1).to_text() == "0"
        assert gen(1, 1, -1).to_text() == "[(1)] 1/1 * x[1,1]^-1"
