"""
The K-theoretic Hall algebra of the linear quiver, realized as a shuffle algebra.

A graded piece K(Rep_alpha) is the ring of Laurent polynomials in the variables
x[i, 1..alpha_i] that are symmetric under permutations of slots at each vertex.
Elements are stored as orbit sums (monomial symmetric functions): an orbit key
holds, per vertex, the weakly decreasing exponent list of one representative
monomial.

The product of a piece of grade alpha with a piece of grade beta is the
symmetrization, over S_{alpha+beta}, of f(x_S) g(x_{S^c}) times the kernel
between f-variables x (vertex i) and g-variables y (vertex j):

    1 / (1 - x/y)              if i == j
    (1 - x/y)^{#arrows i->j}   otherwise

Since f and g are already symmetric, only the shuffles (minimal coset
representatives) are summed, over a common Vandermonde denominator that is
divided out exactly at the end.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import combinations, permutations, product
from math import factorial, prod
from types import MappingProxyType
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy.utilities.iterables import multiset_permutations

from src.algebra.ring import (
    LaurentPoly,
    RationalFunction,
    Scalar,
    VarId,
    exact_div,
    format_rational,
    laurent_lcm,
    parse_rational,
)
from src.core.utils import (
    AsymmetricPolynomialError,
    GradeMismatchError,
    InexactDivisionError,
    NonPolynomialSymmetrizationError,
    ParseError,
)

logger = logging.getLogger(__name__)

OrbitKey = Tuple[Tuple[int, ...], ...]


@dataclass(frozen=True, order=True)
class DimVector:
    """A dimension vector (alpha_1, ..., alpha_n)."""

    entries: Tuple[int, ...]

    def __post_init__(self) -> None:
        entries = tuple(int(e) for e in self.entries)
        if any(e < 0 for e in entries):
            raise GradeMismatchError(
                f"dimension vector entries must be non-negative, got {entries}",
                operation="DimVector",
            )
        object.__setattr__(self, "entries", entries)

    @classmethod
    def zero(cls, n: int) -> "DimVector":
        return cls((0,) * n)

    @classmethod
    def unit(cls, n: int, vertex: int) -> "DimVector":
        """The unit vector omega_vertex."""
        if not 1 <= vertex <= n:
            raise GradeMismatchError(f"vertex {vertex} outside [1, {n}]", operation="DimVector")
        return cls(tuple(1 if i == vertex else 0 for i in range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def total(self) -> int:
        return sum(self.entries)

    def at(self, vertex: int) -> int:
        return self.entries[vertex - 1]

    def __add__(self, other: "DimVector") -> "DimVector":
        if other.n != self.n:
            raise GradeMismatchError(
                f"cannot add dimension vectors of lengths {self.n} and {other.n}",
                operation="DimVector",
            )
        return DimVector(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def scaled(self, factor: int) -> "DimVector":
        return DimVector(tuple(factor * e for e in self.entries))

    def group_order(self) -> int:
        """|S_alpha| = prod alpha_i!."""
        return prod(factorial(e) for e in self.entries)

    def variables(self) -> Tuple[VarId, ...]:
        return tuple(
            VarId(vertex, slot)
            for vertex, size in enumerate(self.entries, start=1)
            for slot in range(1, size + 1)
        )

    def __str__(self) -> str:
        return "(" + ",".join(str(e) for e in self.entries) + ")"


def _canonical_key(grade: DimVector, key: Sequence[Sequence[int]]) -> OrbitKey:
    if len(key) != grade.n:
        raise GradeMismatchError(
            f"orbit key {key} does not have {grade.n} vertex entries", operation="SymLaurent"
        )
    canonical = []
    for vertex, part in enumerate(key, start=1):
        if len(part) != grade.at(vertex):
            raise GradeMismatchError(
                f"orbit key {key} has {len(part)} exponents at vertex {vertex}, "
                f"grade {grade} needs {grade.at(vertex)}",
                operation="SymLaurent",
            )
        canonical.append(tuple(sorted((int(e) for e in part), reverse=True)))
    return tuple(canonical)


class SymLaurent:
    """A symmetric Laurent polynomial of a fixed grade, stored as orbit sums."""

    __slots__ = ("grade", "_terms", "_expanded", "_hash")

    def __init__(self, grade: DimVector, terms: Optional[Mapping[OrbitKey, Scalar]] = None):
        self.grade = grade
        canonical: Dict[OrbitKey, Fraction] = {}
        for key, coeff in (terms or {}).items():
            k = _canonical_key(grade, key)
            canonical[k] = canonical.get(k, Fraction(0)) + Fraction(coeff)
        self._terms = {k: c for k, c in canonical.items() if c != 0}
        self._expanded: Optional[LaurentPoly] = None
        self._hash: Optional[int] = None

    @classmethod
    def zero(cls, grade: DimVector) -> "SymLaurent":
        return cls(grade)

    @classmethod
    def one(cls, grade: DimVector) -> "SymLaurent":
        return cls(grade, {tuple((0,) * a for a in grade.entries): 1})

    @classmethod
    def orbit(cls, grade: DimVector, key: Sequence[Sequence[int]], coeff: Scalar = 1) -> "SymLaurent":
        """The orbit sum of one monomial."""
        return cls(grade, {tuple(tuple(part) for part in key): coeff})

    @property
    def terms(self) -> Mapping[OrbitKey, Fraction]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def constant(self) -> Fraction:
        """Coefficient of the all-zero orbit."""
        return self._terms.get(tuple((0,) * a for a in self.grade.entries), Fraction(0))

    def sorted_terms(self) -> List[Tuple[OrbitKey, Fraction]]:
        return sorted(self._terms.items(), reverse=True)

    def expand(self) -> LaurentPoly:
        """The full monomial expansion (sum over distinct permutations of each key)."""
        if self._expanded is None:
            expanded: Dict[Any, Fraction] = {}
            for key, coeff in self._terms.items():
                per_vertex = [
                    [tuple(p) for p in multiset_permutations(list(part))] for part in key
                ]
                for choice in product(*per_vertex):
                    mono = tuple(
                        (VarId(vertex, slot), e)
                        for vertex, exps in enumerate(choice, start=1)
                        for slot, e in enumerate(exps, start=1)
                        if e != 0
                    )
                    expanded[mono] = expanded.get(mono, Fraction(0)) + coeff
            self._expanded = LaurentPoly._from_canonical(expanded)
        return self._expanded

    @classmethod
    def from_laurent(cls, p: LaurentPoly, grade: DimVector) -> "SymLaurent":
        """
        Convert a symmetric Laurent polynomial into orbit-sum form.

        Raises:
            GradeMismatchError: If p uses variables outside the grade
            AsymmetricPolynomialError: If p is not S_alpha-invariant
        """
        for var in p.variables():
            if var.vertex > grade.n or var.slot > grade.at(var.vertex):
                raise GradeMismatchError(
                    f"variable {var} lies outside grade {grade}", operation="from_laurent"
                )
        terms: Dict[OrbitKey, Fraction] = {}
        for mono, coeff in p.terms.items():
            present = dict(mono)
            key = tuple(
                tuple(present.get(VarId(vertex, slot), 0) for slot in range(1, size + 1))
                for vertex, size in enumerate(grade.entries, start=1)
            )
            if all(list(part) == sorted(part, reverse=True) for part in key):
                terms[key] = coeff
        result = cls(grade, terms)
        if result.expand() != p:
            raise AsymmetricPolynomialError(
                f"polynomial is not symmetric in grade {grade}",
                operation="from_laurent",
                details=p.to_text(),
            )
        return result

    def __add__(self, other: "SymLaurent") -> "SymLaurent":
        self._require_same_grade(other)
        result = dict(self._terms)
        for key, coeff in other._terms.items():
            result[key] = result.get(key, Fraction(0)) + coeff
        return SymLaurent(self.grade, result)

    def __neg__(self) -> "SymLaurent":
        return SymLaurent(self.grade, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "SymLaurent") -> "SymLaurent":
        return self + (-other)

    def scale(self, factor: Scalar) -> "SymLaurent":
        return SymLaurent(self.grade, {k: c * factor for k, c in self._terms.items()})

    def shift_exponents(self, k: int) -> "SymLaurent":
        """Multiply by (prod of all variables)^(-k)."""
        return SymLaurent(
            self.grade,
            {tuple(tuple(e - k for e in part) for part in key): c for key, c in self._terms.items()},
        )

    def is_nonpositive(self) -> bool:
        return all(e <= 0 for key in self._terms for part in key for e in part)

    def exponent_sums(self) -> Tuple[int, ...]:
        """Distinct total degrees of the stored orbits."""
        return tuple(sorted({sum(sum(part) for part in key) for key in self._terms}))

    def _require_same_grade(self, other: "SymLaurent") -> None:
        if other.grade != self.grade:
            raise GradeMismatchError(
                f"grades {self.grade} and {other.grade} differ", operation="SymLaurent"
            )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymLaurent):
            return NotImplemented
        return self.grade == other.grade and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.grade, frozenset(self._terms.items())))
        return self._hash

    def to_json_terms(self) -> List[Dict[str, Any]]:
        return [
            {"coeff": format_rational(coeff), "orbit": [list(part) for part in key]}
            for key, coeff in self.sorted_terms()
        ]

    def __repr__(self) -> str:
        return f"SymLaurent(grade={self.grade}, terms={dict(self.sorted_terms())})"


class KHAElement:
    """A finite sum of graded pieces of KHA over the quiver with n vertices."""

    __slots__ = ("n", "_components")

    def __init__(self, n: int, components: Optional[Mapping[DimVector, SymLaurent]] = None):
        self.n = n
        cleaned: Dict[DimVector, SymLaurent] = {}
        for grade, piece in (components or {}).items():
            if grade.n != n or piece.grade != grade:
                raise GradeMismatchError(
                    f"component of grade {piece.grade} stored under {grade} for n={n}",
                    operation="KHAElement",
                )
            if not piece.is_zero():
                cleaned[grade] = piece
        self._components = dict(sorted(cleaned.items()))

    @classmethod
    def zero(cls, n: int) -> "KHAElement":
        return cls(n)

    @classmethod
    def unit(cls, n: int) -> "KHAElement":
        grade = DimVector.zero(n)
        return cls(n, {grade: SymLaurent.one(grade)})

    @classmethod
    def generator(cls, n: int, vertex: int, exponent: int) -> "KHAElement":
        """The degree-one element x[vertex,1]^exponent."""
        grade = DimVector.unit(n, vertex)
        key = tuple((exponent,) if i == vertex else () for i in range(1, n + 1))
        return cls(n, {grade: SymLaurent.orbit(grade, key)})

    @classmethod
    def from_piece(cls, piece: SymLaurent) -> "KHAElement":
        return cls(piece.grade.n, {piece.grade: piece})

    @property
    def components(self) -> Mapping[DimVector, SymLaurent]:
        return MappingProxyType(self._components)

    def component(self, grade: DimVector) -> SymLaurent:
        return self._components.get(grade, SymLaurent.zero(grade))

    def is_zero(self) -> bool:
        return not self._components

    def _require_same_n(self, other: "KHAElement") -> None:
        if other.n != self.n:
            raise GradeMismatchError(
                f"elements over {self.n} and {other.n} vertices", operation="KHAElement"
            )

    def __add__(self, other: "KHAElement") -> "KHAElement":
        self._require_same_n(other)
        result = dict(self._components)
        for grade, piece in other._components.items():
            result[grade] = result[grade] + piece if grade in result else piece
        return KHAElement(self.n, result)

    def __neg__(self) -> "KHAElement":
        return KHAElement(self.n, {g: -p for g, p in self._components.items()})

    def __sub__(self, other: "KHAElement") -> "KHAElement":
        return self + (-other)

    def scale(self, factor: Scalar) -> "KHAElement":
        return KHAElement(self.n, {g: p.scale(factor) for g, p in self._components.items()})

    def __mul__(self, other: "KHAElement") -> "KHAElement":
        return shuffle_mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KHAElement):
            return NotImplemented
        return self.n == other.n and self._components == other._components

    def __hash__(self) -> int:
        return hash((self.n, tuple(self._components.items())))

    def to_json(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "components": [
                {"grade": list(grade.entries), "terms": piece.to_json_terms()}
                for grade, piece in self._components.items()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "KHAElement":
        """
        Parse the KHAElement JSON schema.

        Raises:
            ParseError: If required fields are missing or malformed
        """
        try:
            n = int(data["n"])
            components: Dict[DimVector, SymLaurent] = {}
            for entry in data["components"]:
                grade = DimVector(tuple(entry["grade"]))
                terms = {
                    tuple(tuple(part) for part in term["orbit"]): parse_rational(str(term["coeff"]))
                    for term in entry["terms"]
                }
                piece = SymLaurent(grade, terms)
                components[grade] = components[grade] + piece if grade in components else piece
        except (KeyError, TypeError, ValueError) as e:
            raise ParseError(f"Malformed KHAElement JSON: {e}", operation="KHAElement.from_json")
        return cls(n, components)

    def to_text(self) -> str:
        if self.is_zero():
            return "0"
        return "\n".join(
            f"[{grade}] {piece.expand().to_text()}" for grade, piece in self._components.items()
        )

    def __repr__(self) -> str:
        return f"KHAElement(n={self.n}, {self.to_text()!r})"


@dataclass(frozen=True)
class Orientation:
    """The arrow multiset of the quiver as (source, target) pairs."""

    arrows: Tuple[Tuple[int, int], ...]

    @classmethod
    def linear(cls, n: int) -> "Orientation":
        """Type A_n with arrows j+1 -> j."""
        return cls(tuple((j + 1, j) for j in range(1, n)))

    def count(self, source: int, target: int) -> int:
        return self.arrows.count((source, target))


@lru_cache(maxsize=64)
def default_orientation(n: int) -> Orientation:
    return Orientation.linear(n)


def _vandermonde(vertex: int, slots: Sequence[int]) -> LaurentPoly:
    """prod over p < q of (x[vertex,q] - x[vertex,p])."""
    result = LaurentPoly.one()
    for p, q in combinations(sorted(slots), 2):
        result = result * (LaurentPoly.variable(vertex, q) - LaurentPoly.variable(vertex, p))
    return result


def _ratio_factor(x: VarId, y: VarId, power: int) -> LaurentPoly:
    """(1 - x/y)^power."""
    return (LaurentPoly.one() - LaurentPoly.monomial({x: 1, y: -1})) ** power


@lru_cache(maxsize=8192)
def _shuffle_pieces(a: SymLaurent, b: SymLaurent, orientation: Orientation) -> SymLaurent:
    alpha, beta = a.grade, b.grade
    if alpha.n != beta.n:
        raise GradeMismatchError(f"grades {alpha} and {beta} differ in length", operation="shuffle")
    if alpha.total == 0:
        return b.scale(a.constant())
    if beta.total == 0:
        return a.scale(b.constant())

    gamma = alpha + beta
    n = gamma.n
    f, g = a.expand(), b.expand()
    choices = [
        list(combinations(range(1, gamma.at(vertex) + 1), alpha.at(vertex)))
        for vertex in range(1, n + 1)
    ]
    numerator = LaurentPoly.zero()
    for choice in product(*choices):
        f_map: Dict[VarId, VarId] = {}
        g_map: Dict[VarId, VarId] = {}
        rests: List[Tuple[int, ...]] = []
        negative = False
        factor = LaurentPoly.one()
        for vertex, chosen in enumerate(choice, start=1):
            rest = tuple(s for s in range(1, gamma.at(vertex) + 1) if s not in chosen)
            rests.append(rest)
            f_map.update({VarId(vertex, j): VarId(vertex, s) for j, s in enumerate(chosen, 1)})
            g_map.update({VarId(vertex, j): VarId(vertex, t) for j, t in enumerate(rest, 1)})
            if sum(1 for s in chosen for t in rest if s > t) % 2:
                negative = not negative
            factor = factor * _vandermonde(vertex, chosen) * _vandermonde(vertex, rest)
            if chosen and rest:
                factor = factor.shift({VarId(vertex, t): len(chosen) for t in rest})
        for i, chosen in enumerate(choice, start=1):
            for j, rest in enumerate(rests, start=1):
                power = orientation.count(i, j) if i != j else 0
                if not power:
                    continue
                for s in chosen:
                    for t in rest:
                        factor = factor * _ratio_factor(VarId(i, s), VarId(j, t), power)
        term = f.rename(f_map) * g.rename(g_map) * factor
        numerator = numerator - term if negative else numerator + term

    denominator = LaurentPoly.one()
    for vertex in range(1, n + 1):
        denominator = denominator * _vandermonde(vertex, range(1, gamma.at(vertex) + 1))
    try:
        result = exact_div(numerator, denominator)
        return SymLaurent.from_laurent(result, gamma)
    except (InexactDivisionError, AsymmetricPolynomialError) as e:
        logger.error(f"Shuffle of grades {alpha} and {beta} did not clear its denominator")
        raise NonPolynomialSymmetrizationError(
            f"shuffle of grades {alpha} and {beta} is not a symmetric Laurent polynomial",
            operation="shuffle_mul",
            details=str(e),
        )


def shuffle_mul(
    f: KHAElement, g: KHAElement, orientation: Optional[Orientation] = None
) -> KHAElement:
    """
    Shuffle product of two KHA elements (bilinear in the graded pieces).

    Args:
        f: Left factor
        g: Right factor
        orientation: Kernel table; the linear A_n orientation by default

    Returns:
        f * g

    Raises:
        GradeMismatchError: If f and g live over different quivers
        NonPolynomialSymmetrizationError: If a product fails to clear (invariant violation)
    """
    if f.n != g.n:
        raise GradeMismatchError(f"elements over {f.n} and {g.n} vertices", operation="shuffle_mul")
    orientation = orientation or default_orientation(f.n)
    result = KHAElement.zero(f.n)
    for a in f.components.values():
        for b in g.components.values():
            result = result + KHAElement.from_piece(_shuffle_pieces(a, b, orientation))
    return result


def _group_elements(alpha: DimVector) -> Iterable[Dict[VarId, VarId]]:
    per_vertex = [
        list(permutations(range(1, size + 1))) for size in alpha.entries
    ]
    for choice in product(*per_vertex):
        yield {
            VarId(vertex, slot): VarId(vertex, image)
            for vertex, images in enumerate(choice, start=1)
            for slot, image in enumerate(images, start=1)
        }


def symmetrize(f: RationalFunction, alpha: DimVector) -> SymLaurent:
    """
    Full group sum of f over S_alpha.

    Args:
        f: Rational function in the variables of grade alpha
        alpha: Grade

    Returns:
        Sum over sigma in S_alpha of f(x_sigma), as a symmetric Laurent polynomial

    Raises:
        GradeMismatchError: If f uses variables outside alpha
        NonPolynomialSymmetrizationError: If the sum is not a Laurent polynomial
    """
    allowed = set(alpha.variables())
    stray = [v for v in set(f.num.variables()) | set(f.den.variables()) if v not in allowed]
    if stray:
        raise GradeMismatchError(
            f"variables {sorted(stray)} lie outside grade {alpha}", operation="symmetrize"
        )
    images = [(f.num.rename(sigma), f.den.rename(sigma)) for sigma in _group_elements(alpha)]
    common = laurent_lcm(den for _, den in images)
    total = LaurentPoly.zero()
    for num, den in images:
        total = total + num * exact_div(common, den)
    try:
        result = exact_div(total, common)
        return SymLaurent.from_laurent(result, alpha)
    except (InexactDivisionError, AsymmetricPolynomialError) as e:
        raise NonPolynomialSymmetrizationError(
            f"symmetrization over grade {alpha} does not clear its denominator",
            operation="symmetrize",
            details=str(e),
        )


def shuffle_integrand(a: SymLaurent, b: SymLaurent, orientation: Orientation) -> RationalFunction:
    """f(x_1..x_alpha) g(x_alpha+1..) times the kernel, as a single rational function."""
    alpha, beta = a.grade, b.grade
    gamma = alpha + beta
    g_map = {
        VarId(vertex, j): VarId(vertex, alpha.at(vertex) + j)
        for vertex in range(1, gamma.n + 1)
        for j in range(1, beta.at(vertex) + 1)
    }
    num = a.expand() * b.expand().rename(g_map)
    den = LaurentPoly.one()
    for i in range(1, gamma.n + 1):
        for j in range(1, gamma.n + 1):
            for s in range(1, alpha.at(i) + 1):
                for t in range(alpha.at(j) + 1, gamma.at(j) + 1):
                    x, y = VarId(i, s), VarId(j, t)
                    if i == j:
                        num = num * LaurentPoly.monomial({y: 1})
                        den = den * (LaurentPoly.monomial({y: 1}) - LaurentPoly.monomial({x: 1}))
                    elif orientation.count(i, j):
                        num = num * _ratio_factor(x, y, orientation.count(i, j))
    return RationalFunction(num, den)


def shuffle_mul_full(
    f: KHAElement, g: KHAElement, orientation: Optional[Orientation] = None
) -> KHAElement:
    """
    Shuffle product through the naive full-group sum with the 1/(|S_alpha||S_beta|) prefactor.

    Slow; used to cross-check the coset enumeration in ``shuffle_mul``.
    """
    if f.n != g.n:
        raise GradeMismatchError(f"elements over {f.n} and {g.n} vertices", operation="shuffle_mul")
    orientation = orientation or default_orientation(f.n)
    result = KHAElement.zero(f.n)
    for a in f.components.values():
        for b in g.components.values():
            gamma = a.grade + b.grade
            piece = symmetrize(shuffle_integrand(a, b, orientation), gamma)
            prefactor = Fraction(1, a.grade.group_order() * b.grade.group_order())
            result = result + KHAElement.from_piece(piece.scale(prefactor))
    return result


def mu_product(parts: Sequence[SymLaurent], orientation: Optional[Orientation] = None) -> KHAElement:
    """
    Left-to-right shuffle product of per-vertex pieces.

    Args:
        parts: Piece i (1-based) of grade alpha_i * omega_i

    Returns:
        The product in grade sum_i alpha_i * omega_i

    Raises:
        GradeMismatchError: If a part is not concentrated at its own vertex
    """
    if not parts:
        raise GradeMismatchError("mu_product needs at least one part", operation="mu_product")
    n = len(parts)
    for vertex, part in enumerate(parts, start=1):
        if part.grade.n != n or any(
            e != 0 for i, e in enumerate(part.grade.entries, start=1) if i != vertex
        ):
            raise GradeMismatchError(
                f"part {vertex} has grade {part.grade}, expected a multiple of omega_{vertex}",
                operation="mu_product",
            )
    return reduce(
        lambda acc, part: shuffle_mul(acc, KHAElement.from_piece(part), orientation),
        parts[1:],
        KHAElement.from_piece(parts[0]),
    )


def pbw_decompose(f: SymLaurent) -> List[Tuple[Fraction, Tuple[SymLaurent, ...]]]:
    """
    Split a symmetric Laurent polynomial into per-vertex orbit factors.

    Each orbit key is a concatenation of per-vertex keys, so every orbit sum is a
    product of per-vertex orbit sums.
    """
    n = f.grade.n
    decomposition = []
    for key, coeff in f.sorted_terms():
        parts = []
        for vertex in range(1, n + 1):
            grade = DimVector.unit(n, vertex).scaled(f.grade.at(vertex))
            parts.append(
                SymLaurent.orbit(
                    grade, tuple(key[vertex - 1] if i == vertex else () for i in range(1, n + 1))
                )
            )
        decomposition.append((coeff, tuple(parts)))
    return decomposition


def pbw_reconstruct(
    decomposition: Iterable[Tuple[Fraction, Sequence[SymLaurent]]],
    n: int,
    orientation: Optional[Orientation] = None,
) -> KHAElement:
    """Sum of coefficient * mu(parts) over a decomposition."""
    result = KHAElement.zero(n)
    for coeff, parts in decomposition:
        result = result + mu_product(parts, orientation).scale(coeff)
    return result


def eta_shift(k: int, e: KHAElement) -> KHAElement:
    """Degree-shift automorphism: grade alpha pieces times (prod of all variables)^(-k)."""
    return KHAElement(e.n, {g: p.shift_exponents(k) for g, p in e.components.items()})


def in_negative_sector(e: KHAElement) -> bool:
    """True iff every stored exponent is non-positive."""
    return all(piece.is_nonpositive() for piece in e.components.values())


def degree_one_product(exponents: Sequence[int]) -> KHAElement:
    """x^{a_1} * ... * x^{a_r} in KHA of the one-vertex quiver."""
    return reduce(
        lambda acc, a: shuffle_mul(acc, KHAElement.generator(1, 1, a)),
        exponents,
        KHAElement.unit(1),
    )


def degree_one_symmetrized(exponents: Sequence[int]) -> KHAElement:
    """Sym(x_1^{a_1} ... x_r^{a_r} prod_{i<j} 1/(1 - x_i/x_j)) for the one-vertex quiver."""
    r = len(exponents)
    num = LaurentPoly.monomial({VarId(1, slot): a for slot, a in enumerate(exponents, start=1)})
    den = LaurentPoly.one()
    for i, j in combinations(range(1, r + 1), 2):
        num = num * LaurentPoly.variable(1, j)
        den = den * (LaurentPoly.variable(1, j) - LaurentPoly.variable(1, i))
    grade = DimVector((r,))
    return KHAElement.from_piece(symmetrize(RationalFunction(num, den), grade))
