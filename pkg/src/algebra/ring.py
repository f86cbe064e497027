"""
Exact Laurent polynomials and rational functions over the rationals.

Variables are indexed by (vertex, slot). Coefficients are exact ``Fraction``
values. Division, gcd and lcm are delegated to sympy's sparse polynomial rings
after shifting Laurent exponents into the polynomial range; the ring uses the
graded-lexicographic monomial order so remainders are deterministic.
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from src.core.utils import InexactDivisionError, InvalidPermutationError, ParseError

logger = logging.getLogger(__name__)

Rational = Fraction
Scalar = Union[int, Fraction]


@dataclass(frozen=True, order=True)
class VarId:
    """The variable x[vertex, slot]."""

    vertex: int
    slot: int

    def __post_init__(self) -> None:
        if self.vertex < 1 or self.slot < 1:
            raise ValueError(f"vertex and slot must be positive, got ({self.vertex}, {self.slot})")

    def __str__(self) -> str:
        return f"x[{self.vertex},{self.slot}]"

    @property
    def symbol_name(self) -> str:
        return f"x_{self.vertex}_{self.slot}"


# A monomial is a tuple of (variable, nonzero exponent) pairs sorted by variable.
Monomial = Tuple[Tuple[VarId, int], ...]
ONE_MONOMIAL: Monomial = ()


def _monomial_from_map(exponents: Mapping[VarId, int]) -> Monomial:
    return tuple(sorted((v, e) for v, e in exponents.items() if e != 0))


def _monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    merged = dict(a)
    for v, e in b:
        merged[v] = merged.get(v, 0) + e
    return _monomial_from_map(merged)


def _to_fraction(value: Scalar) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


def format_rational(value: Fraction) -> str:
    """Render a rational as ``p/q``."""
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` or an integer."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"Invalid rational coefficient: {text!r}", operation="parse_rational")


class LaurentPoly:
    """
    A multivariate Laurent polynomial with rational coefficients.

    Instances are immutable and canonical: no zero coefficients are stored and
    monomials omit zero exponents, so equal polynomials compare and hash equal.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, Scalar]] = None):
        cleaned: Dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            key = _monomial_from_map(dict(mono)) if mono else ONE_MONOMIAL
            cleaned[key] = cleaned.get(key, Fraction(0)) + _to_fraction(coeff)
        self._terms: Dict[Monomial, Fraction] = {m: c for m, c in cleaned.items() if c != 0}
        self._hash: Optional[int] = None

    @classmethod
    def _from_canonical(cls, terms: Dict[Monomial, Fraction]) -> "LaurentPoly":
        poly = cls.__new__(cls)
        poly._terms = {m: c for m, c in terms.items() if c != 0}
        poly._hash = None
        return poly

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls._from_canonical({})

    @classmethod
    def constant(cls, value: Scalar) -> "LaurentPoly":
        return cls._from_canonical({ONE_MONOMIAL: _to_fraction(value)})

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls.constant(1)

    @classmethod
    def variable(cls, vertex: int, slot: int, exponent: int = 1) -> "LaurentPoly":
        return cls.monomial({VarId(vertex, slot): exponent})

    @classmethod
    def monomial(cls, exponents: Mapping[VarId, int], coeff: Scalar = 1) -> "LaurentPoly":
        return cls._from_canonical({_monomial_from_map(exponents): _to_fraction(coeff)})

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ONE_MONOMIAL in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get(ONE_MONOMIAL, Fraction(0))

    def variables(self) -> Tuple[VarId, ...]:
        return tuple(sorted({v for mono in self._terms for v, _ in mono}))

    def min_exponents(self) -> Dict[VarId, int]:
        """Per-variable minimal exponent over all terms (absent variables count as 0)."""
        variables = self.variables()
        result = {v: 0 for v in variables}
        for mono in self._terms:
            present = dict(mono)
            for v in variables:
                result[v] = min(result[v], present.get(v, 0))
        return {v: e for v, e in result.items() if e != 0}

    def max_exponents(self) -> Dict[VarId, int]:
        variables = self.variables()
        result = {v: 0 for v in variables}
        for mono in self._terms:
            present = dict(mono)
            for v in variables:
                result[v] = max(result[v], present.get(v, 0))
        return {v: e for v, e in result.items() if e != 0}

    def shift(self, exponents: Mapping[VarId, int]) -> "LaurentPoly":
        """Multiply by the monomial with the given exponents."""
        mono = _monomial_from_map(exponents)
        if not mono:
            return self
        return LaurentPoly._from_canonical(
            {_monomial_mul(m, mono): c for m, c in self._terms.items()}
        )

    def monomial_inverse(self) -> "LaurentPoly":
        if not self.is_monomial():
            raise InexactDivisionError(
                "only monomials are invertible", operation="monomial_inverse"
            )
        ((mono, coeff),) = self._terms.items()
        return LaurentPoly._from_canonical({tuple((v, -e) for v, e in mono): 1 / coeff})

    def rename(self, mapping: Mapping[VarId, VarId]) -> "LaurentPoly":
        """Substitute variables by variables (no validation)."""
        result: Dict[Monomial, Fraction] = {}
        for mono, coeff in self._terms.items():
            renamed: Dict[VarId, int] = {}
            for v, e in mono:
                target = mapping.get(v, v)
                renamed[target] = renamed.get(target, 0) + e
            key = _monomial_from_map(renamed)
            result[key] = result.get(key, Fraction(0)) + coeff
        return LaurentPoly._from_canonical(result)

    def __add__(self, other: Union["LaurentPoly", Scalar]) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            if isinstance(other, (int, Fraction)):
                other = LaurentPoly.constant(other)
            else:
                return NotImplemented
        result = dict(self._terms)
        for mono, coeff in other._terms.items():
            result[mono] = result.get(mono, Fraction(0)) + coeff
        return LaurentPoly._from_canonical(result)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._from_canonical({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: Union["LaurentPoly", Scalar]) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "LaurentPoly":
        return LaurentPoly.constant(other) - self

    def __mul__(self, other: Union["LaurentPoly", Scalar]) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            factor = _to_fraction(other)
            return LaurentPoly._from_canonical({m: c * factor for m, c in self._terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        result: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                key = _monomial_mul(m1, m2)
                result[key] = result.get(key, Fraction(0)) + c1 * c2
        return LaurentPoly._from_canonical(result)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "LaurentPoly":
        if exponent < 0:
            return self.monomial_inverse() ** (-exponent)
        result = LaurentPoly.one()
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def sorted_terms(self) -> List[Tuple[Monomial, Fraction]]:
        """Terms sorted by dense exponent vector, largest first."""
        variables = self.variables()

        def dense(mono: Monomial) -> Tuple[int, ...]:
            present = dict(mono)
            return tuple(present.get(v, 0) for v in variables)

        return sorted(self._terms.items(), key=lambda item: dense(item[0]), reverse=True)

    def to_text(self) -> str:
        """Canonical text form, e.g. ``1/1 * x[1,1]^2 + -1/1``."""
        if not self._terms:
            return "0"
        rendered = []
        for mono, coeff in self.sorted_terms():
            factors = [format_rational(coeff)]
            factors.extend(f"{v}^{e}" for v, e in mono)
            rendered.append(" * ".join(factors))
        return " + ".join(rendered)

    @classmethod
    def from_text(cls, text: str) -> "LaurentPoly":
        return parse_laurent(text)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_text()!r})"


_VAR_FACTOR = re.compile(r"^x\[\s*(\d+)\s*,\s*(\d+)\s*\](?:\^\(?(-?\d+)\)?)?$")
_COEFF_FACTOR = re.compile(r"^-?\d+(?:/\d+)?$")


def parse_laurent(text: str) -> LaurentPoly:
    """
    Parse the text grammar ``c * x[i,j]^e * ... + ...``.

    Coefficients may be written ``p/q`` or as integers; a missing coefficient
    means 1 and a missing exponent means 1.

    Raises:
        ParseError: If a factor does not match the grammar
    """
    stripped = text.strip()
    if not stripped:
        raise ParseError("Empty polynomial text", operation="parse_laurent")
    terms: Dict[Monomial, Fraction] = {}
    for raw_term in stripped.replace(" - ", " + -").split("+"):
        term = raw_term.strip()
        if not term:
            raise ParseError(f"Empty term in {text!r}", operation="parse_laurent")
        coeff = Fraction(1)
        exponents: Dict[VarId, int] = {}
        for raw_factor in term.split("*"):
            factor = raw_factor.strip()
            if factor.startswith("-x"):
                coeff = -coeff
                factor = factor[1:]
            if _COEFF_FACTOR.match(factor):
                coeff *= parse_rational(factor)
                continue
            match = _VAR_FACTOR.match(factor)
            if not match:
                raise ParseError(f"Invalid factor {factor!r} in {text!r}", operation="parse_laurent")
            var = VarId(int(match.group(1)), int(match.group(2)))
            exponents[var] = exponents.get(var, 0) + int(match.group(3) or 1)
        mono = _monomial_from_map(exponents)
        terms[mono] = terms.get(mono, Fraction(0)) + coeff
    return LaurentPoly._from_canonical(terms)


# ---------------------------------------------------------------------------
# sympy bridge
# ---------------------------------------------------------------------------


@lru_cache(maxsize=512)
def _poly_ring(variables: Tuple[VarId, ...]) -> PolyRing:
    logger.debug(f"Building polynomial ring over {len(variables)} variables")
    return PolyRing([v.symbol_name for v in variables], QQ, grlex)


def _to_ring(
    p: LaurentPoly, ring: PolyRing, variables: Tuple[VarId, ...], shift: Mapping[VarId, int]
) -> PolyElement:
    index = {v: k for k, v in enumerate(variables)}
    base = [shift.get(v, 0) for v in variables]
    data = {}
    for mono, coeff in p.terms.items():
        exps = list(base)
        for v, e in mono:
            exps[index[v]] += e
        data[tuple(exps)] = QQ(coeff.numerator, coeff.denominator)
    return ring.from_dict(data)


def _from_ring(
    poly: PolyElement, variables: Tuple[VarId, ...], shift: Mapping[VarId, int]
) -> LaurentPoly:
    base = [shift.get(v, 0) for v in variables]
    terms: Dict[Monomial, Fraction] = {}
    for exps, coeff in poly.terms():
        mono = tuple(
            (v, e - s) for v, e, s in zip(variables, exps, base) if e - s != 0
        )
        terms[mono] = Fraction(int(coeff.numerator), int(coeff.denominator))
    return LaurentPoly._from_canonical(terms)


def _negated(exponents: Mapping[VarId, int]) -> Dict[VarId, int]:
    return {v: -e for v, e in exponents.items()}


def exact_div(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """
    Divide Laurent polynomials exactly.

    Both operands are shifted so that every variable has minimal exponent 0;
    the shifted quotient is then an ordinary polynomial and is found by
    polynomial long division.

    Args:
        p: Dividend
        q: Nonzero divisor

    Returns:
        r with p = q * r

    Raises:
        InexactDivisionError: If q is zero or the remainder is nonzero
    """
    if q.is_zero():
        raise InexactDivisionError("division by the zero polynomial", operation="exact_div")
    if p.is_zero():
        return LaurentPoly.zero()
    if q.is_monomial():
        return p * q.monomial_inverse()

    variables = tuple(sorted(set(p.variables()) | set(q.variables())))
    ring = _poly_ring(variables)
    p_min = p.min_exponents()
    q_min = q.min_exponents()
    dividend = _to_ring(p, ring, variables, _negated(p_min))
    divisor = _to_ring(q, ring, variables, _negated(q_min))
    quotient, remainder = dividend.div(divisor)
    if remainder:
        raise InexactDivisionError(
            "nonzero remainder in exact division",
            operation="exact_div",
            details=f"({p.to_text()}) / ({q.to_text()})",
        )
    offset = {v: p_min.get(v, 0) - q_min.get(v, 0) for v in variables}
    return _from_ring(quotient, variables, _negated(offset))


def laurent_lcm(polys: Iterable[LaurentPoly]) -> LaurentPoly:
    """
    Least common multiple up to units (monomials times rationals).

    Each input is shifted to minimal exponent 0 first, so the result is an
    ordinary polynomial with no monomial factor.
    """
    items = [p for p in polys]
    if not items or any(p.is_zero() for p in items):
        raise InexactDivisionError("lcm of an empty or zero family", operation="laurent_lcm")
    variables = tuple(sorted({v for p in items for v in p.variables()}))
    if not variables:
        return LaurentPoly.one()
    ring = _poly_ring(variables)
    lifted = [_to_ring(p, ring, variables, _negated(p.min_exponents())) for p in items]
    result = reduce(lambda a, b: a.lcm(b), lifted)
    return _from_ring(result.monic(), variables, {})


def arith(
    a: Union[LaurentPoly, "RationalFunction"],
    b: Optional[Union[LaurentPoly, "RationalFunction"]] = None,
    op: str = "add",
) -> Union[LaurentPoly, "RationalFunction"]:
    """
    Apply ``add``, ``mul`` or ``neg`` to Laurent polynomials or rational functions.

    Raises:
        ValueError: If the operation is unknown or a binary operand is missing
    """
    if op == "neg":
        return -a
    if b is None:
        raise ValueError(f"operation {op!r} needs two operands")
    if op == "add":
        return a + b  # type: ignore[operator]
    if op == "mul":
        return a * b  # type: ignore[operator]
    raise ValueError(f"op must be one of ['add', 'mul', 'neg'], got {op!r}")


# ---------------------------------------------------------------------------
# Permutations of slots
# ---------------------------------------------------------------------------

SlotPermutation = Mapping[int, Sequence[int]]


def _validate_slot_images(vertex: int, images: Sequence[int]) -> None:
    if sorted(images) != list(range(1, len(images) + 1)):
        raise InvalidPermutationError(
            f"images {list(images)} at vertex {vertex} are not a permutation",
            operation="permute_vars",
        )


def permutation_mapping(
    sigma: Union[SlotPermutation, Mapping[VarId, VarId]]
) -> Dict[VarId, VarId]:
    """
    Normalize a per-vertex slot permutation into a variable substitution.

    ``sigma`` is either ``{vertex: (sigma(1), ..., sigma(k))}`` or an explicit
    ``{VarId: VarId}`` map; the latter must keep every variable at its vertex.

    Raises:
        InvalidPermutationError: If sigma mixes vertices or is not bijective
    """
    mapping: Dict[VarId, VarId] = {}
    for key, value in sigma.items():
        if isinstance(key, VarId):
            if not isinstance(value, VarId) or value.vertex != key.vertex:
                raise InvalidPermutationError(
                    f"{key} -> {value} moves a variable across vertices",
                    operation="permute_vars",
                )
            mapping[key] = value
        else:
            images = list(value)  # type: ignore[arg-type]
            _validate_slot_images(int(key), images)
            for slot, image in enumerate(images, start=1):
                mapping[VarId(int(key), slot)] = VarId(int(key), image)
    if len(set(mapping.values())) != len(mapping) or set(mapping.values()) != set(mapping):
        raise InvalidPermutationError("substitution is not a bijection", operation="permute_vars")
    return mapping


def permute_vars(
    p: LaurentPoly, sigma: Union[SlotPermutation, Mapping[VarId, VarId]]
) -> LaurentPoly:
    """
    Act on a polynomial by a per-vertex permutation of slots: x[i,j] -> x[i,sigma(j)].

    Args:
        p: Polynomial
        sigma: Slot permutation per vertex

    Returns:
        The permuted polynomial

    Raises:
        InvalidPermutationError: If sigma mixes vertices or is not bijective
    """
    return p.rename(permutation_mapping(sigma))


def compose_permutations(tau: SlotPermutation, sigma: SlotPermutation) -> Dict[int, Tuple[int, ...]]:
    """Per-vertex composition tau o sigma (sigma applied first)."""
    result: Dict[int, Tuple[int, ...]] = {}
    for vertex in sorted(set(tau) | set(sigma)):
        s = list(sigma.get(vertex, ()))
        t = list(tau.get(vertex, ()))
        size = max(len(s), len(t))
        s += list(range(len(s) + 1, size + 1))
        t += list(range(len(t) + 1, size + 1))
        result[vertex] = tuple(t[s[j] - 1] for j in range(size))
    return result


# ---------------------------------------------------------------------------
# Rational functions
# ---------------------------------------------------------------------------


class RationalFunction:
    """
    A quotient of Laurent polynomials in canonical form.

    The denominator is an ordinary polynomial with no monomial factor and with
    graded-lexicographic leading coefficient 1; numerator and denominator are
    coprime.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: Optional[LaurentPoly] = None):
        self.num, self.den = _normalize_fraction(num, den if den is not None else LaurentPoly.one())

    @classmethod
    def from_laurent(cls, p: LaurentPoly) -> "RationalFunction":
        return cls(p)

    def is_polynomial(self) -> bool:
        return self.den == LaurentPoly.one()

    def to_laurent(self) -> LaurentPoly:
        if not self.is_polynomial():
            raise InexactDivisionError(
                "rational function is not a Laurent polynomial", operation="to_laurent"
            )
        return self.num

    def rename(self, mapping: Mapping[VarId, VarId]) -> "RationalFunction":
        return RationalFunction(self.num.rename(mapping), self.den.rename(mapping))

    def __add__(self, other: Union["RationalFunction", LaurentPoly, Scalar]) -> "RationalFunction":
        other = _as_rational_function(other)
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other: Union["RationalFunction", LaurentPoly, Scalar]) -> "RationalFunction":
        return self + (-_as_rational_function(other))

    def __mul__(self, other: Union["RationalFunction", LaurentPoly, Scalar]) -> "RationalFunction":
        other = _as_rational_function(other)
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other: Union["RationalFunction", LaurentPoly, Scalar]) -> "RationalFunction":
        other = _as_rational_function(other)
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (LaurentPoly, int, Fraction)):
            other = _as_rational_function(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def to_text(self) -> str:
        if self.is_polynomial():
            return self.num.to_text()
        return f"({self.num.to_text()}) / ({self.den.to_text()})"

    def __repr__(self) -> str:
        return f"RationalFunction({self.to_text()!r})"


def _as_rational_function(value: Union[RationalFunction, LaurentPoly, Scalar]) -> RationalFunction:
    if isinstance(value, RationalFunction):
        return value
    if isinstance(value, LaurentPoly):
        return RationalFunction(value)
    return RationalFunction(LaurentPoly.constant(value))


def _normalize_fraction(num: LaurentPoly, den: LaurentPoly) -> Tuple[LaurentPoly, LaurentPoly]:
    if den.is_zero():
        raise ZeroDivisionError("rational function with zero denominator")
    if num.is_zero():
        return LaurentPoly.zero(), LaurentPoly.one()
    if den.is_monomial():
        return num * den.monomial_inverse(), LaurentPoly.one()

    variables = tuple(sorted(set(num.variables()) | set(den.variables())))
    ring = _poly_ring(variables)
    num_min = num.min_exponents()
    den_min = den.min_exponents()
    top = _to_ring(num, ring, variables, _negated(num_min))
    bottom = _to_ring(den, ring, variables, _negated(den_min))
    _, top, bottom = top.cofactors(bottom)
    lead = bottom.LC
    top = top.quo_ground(lead)
    bottom = bottom.quo_ground(lead)
    offset = {v: num_min.get(v, 0) - den_min.get(v, 0) for v in variables}
    new_num = _from_ring(top, variables, _negated(offset))
    new_den = _from_ring(bottom, variables, {})
    if new_den.is_monomial():
        return new_num * new_den.monomial_inverse(), LaurentPoly.one()
    return new_num, new_den


def exact_rank(rows: Sequence[Mapping[int, Fraction]], ncols: int) -> int:
    """
    Rank over QQ of a sparse matrix given as column -> value rows.

    Denominators are cleared first and the rank is read off a fraction-free
    row echelon form.
    """
    if not rows or ncols == 0:
        return 0
    sparse = {
        i: {j: QQ(value.numerator, value.denominator) for j, value in row.items() if value}
        for i, row in enumerate(rows)
    }
    sparse = {i: row for i, row in sparse.items() if row}
    if not sparse:
        return 0
    matrix = DomainMatrix(sparse, (len(rows), ncols), QQ)
    _, integral = matrix.clear_denoms(convert=True)
    _, _, pivots = integral.rref_den(method="FF")
    return len(pivots)
