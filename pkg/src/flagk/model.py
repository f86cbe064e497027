"""
Torus-equivariant K-theory of partial flag varieties by fixed-point localization.

A class on Fl_k(C^N) is stored as its vector of restrictions to the torus
fixed points, with entries in the field QQ(t1, ..., tN). Fixed points are
ordered set partitions (B_1, ..., B_n) of {1..N} with |B_i| = k_i.

E[i,r] 1_k moves one index a from block i+1 to block i. Its matrix entry from
source point p to the resulting target point is

    t_a^r / prod_{x in B_i(p)} (1 - t_x / t_a)

The Euler pairing is <a, b> = sum_p conj(a_p) b_p g_p with conj the
involution t -> 1/t and g_p = 1 / prod_{j<l} prod_{a in B_j, b in B_l} (1 - t_a/t_b).
Adjoints are pairing transposes.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Literal, Sequence, Tuple

from sympy import QQ, symbols
from sympy.polys.domains import Domain
from sympy.polys.fields import FracElement
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyElement

from src.algebra.combinatorics import weak_compositions
from src.core.config import settings
from src.core.utils import AdjunctionError, InvalidCompositionError, SingularGramError

logger = logging.getLogger(__name__)

Side = Literal["left", "right"]


@dataclass(frozen=True, order=True)
class Composition:
    """A weight (k_1, ..., k_n); entries may go negative for empty weight spaces."""

    parts: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "parts", tuple(int(p) for p in self.parts))

    @property
    def n(self) -> int:
        return len(self.parts)

    @property
    def N(self) -> int:
        return sum(self.parts)

    @property
    def is_valid(self) -> bool:
        return all(p >= 0 for p in self.parts)

    def shifted(self, vertex: int, delta: int = 1) -> "Composition":
        """(.., k_i + delta, k_{i+1} - delta, ..)."""
        parts = list(self.parts)
        parts[vertex - 1] += delta
        parts[vertex] -= delta
        return Composition(tuple(parts))

    def __str__(self) -> str:
        return "(" + ",".join(str(p) for p in self.parts) + ")"


def validate_composition(parts: Sequence[int], n: int, N: int) -> Composition:
    """
    Check user input is a member of C(n, N).

    Raises:
        InvalidCompositionError: If the length, sum or sign is wrong
    """
    k = Composition(tuple(parts))
    if k.n != n or k.N != N or not k.is_valid:
        raise InvalidCompositionError(
            f"k={k} is not a weak composition of N={N} into n={n} parts",
            operation="validate_composition",
        )
    return k


def compositions(n: int, N: int) -> List[Composition]:
    """All of C(n, N), reverse-lexicographic."""
    return [Composition(c) for c in weak_compositions(N, n)]


@dataclass(frozen=True, order=True)
class FixedPoint:
    """A coordinate flag given by its ordered blocks."""

    blocks: Tuple[Tuple[int, ...], ...]

    def block(self, vertex: int) -> Tuple[int, ...]:
        return self.blocks[vertex - 1]

    def __str__(self) -> str:
        return "(" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + ")"


def _split(remaining: Tuple[int, ...], sizes: Tuple[int, ...]) -> List[Tuple[Tuple[int, ...], ...]]:
    if not sizes:
        return [()]
    found = []
    for chosen in combinations(remaining, sizes[0]):
        rest = tuple(x for x in remaining if x not in chosen)
        found.extend((chosen,) + tail for tail in _split(rest, sizes[1:]))
    return found


@lru_cache(maxsize=256)
def fixed_points(k: Composition) -> Tuple[FixedPoint, ...]:
    """Torus fixed points of Fl_k; empty when k has a negative entry."""
    if not k.is_valid:
        return ()
    return tuple(FixedPoint(blocks) for blocks in _split(tuple(range(1, k.N + 1)), k.parts))


@lru_cache(maxsize=256)
def _point_index(k: Composition) -> Dict[FixedPoint, int]:
    return {p: index for index, p in enumerate(fixed_points(k))}


@lru_cache(maxsize=16)
def torus_field(N: int) -> Domain:
    """QQ(t1, ..., tN)."""
    return QQ.frac_field(*symbols(f"t1:{N + 1}"))


def _gens(N: int) -> Tuple[FracElement, ...]:
    return tuple(torus_field(N).field.gens)


def _reversed_poly(poly: PolyElement, top: Tuple[int, ...]) -> PolyElement:
    ring = poly.ring
    return ring.from_dict({tuple(m - e for m, e in zip(top, exps)): c for exps, c in poly.terms()})


def _top_exponents(poly: PolyElement, nvars: int) -> Tuple[int, ...]:
    return tuple(max((exps[v] for exps in poly.monoms()), default=0) for v in range(nvars))


def conjugate(value: FracElement) -> FracElement:
    """The involution t_j -> 1/t_j."""
    if not value:
        return value
    field = value.field
    ring = field.ring
    nvars = ring.ngens
    num_top = _top_exponents(value.numer, nvars)
    den_top = _top_exponents(value.denom, nvars)
    numer = _reversed_poly(value.numer, num_top) * ring.from_dict({den_top: QQ.one})
    denom = _reversed_poly(value.denom, den_top) * ring.from_dict({num_top: QQ.one})
    return field.new(numer, denom)


class KOperator:
    """A K-theory map between weight spaces, as a sparse matrix over QQ(t)."""

    __slots__ = ("source", "target", "N", "matrix")

    def __init__(self, source: Composition, target: Composition, N: int, matrix: DomainMatrix):
        rows, cols = len(fixed_points(target)), len(fixed_points(source))
        if matrix.shape != (rows, cols):
            raise ValueError(f"matrix shape {matrix.shape} does not match ({rows}, {cols})")
        self.source = source
        self.target = target
        self.N = N
        self.matrix = matrix

    @classmethod
    def from_entries(
        cls,
        source: Composition,
        target: Composition,
        N: int,
        entries: Dict[int, Dict[int, FracElement]],
    ) -> "KOperator":
        shape = (len(fixed_points(target)), len(fixed_points(source)))
        cleaned = {i: {j: v for j, v in row.items() if v} for i, row in entries.items()}
        cleaned = {i: row for i, row in cleaned.items() if row}
        return cls(source, target, N, DomainMatrix(cleaned, shape, torus_field(N)))

    @classmethod
    def zero(cls, source: Composition, target: Composition, N: int) -> "KOperator":
        return cls.from_entries(source, target, N, {})

    @classmethod
    def identity(cls, k: Composition, N: int) -> "KOperator":
        one = torus_field(N).one
        return cls.from_entries(k, k, N, {i: {i: one} for i in range(len(fixed_points(k)))})

    @property
    def shape(self) -> Tuple[int, int]:
        return self.matrix.shape

    def entries(self) -> Dict[Tuple[int, int], FracElement]:
        return {key: v for key, v in self.matrix.to_dok().items() if v}

    def nonzero_entries(self) -> int:
        return len(self.entries())

    def is_zero(self) -> bool:
        return self.nonzero_entries() == 0

    def _require_parallel(self, other: "KOperator") -> None:
        if (self.source, self.target) != (other.source, other.target):
            raise ValueError(
                f"operators {self.source}->{self.target} and {other.source}->{other.target} differ"
            )

    def __matmul__(self, other: "KOperator") -> "KOperator":
        """self after other."""
        if other.target != self.source:
            raise ValueError(f"cannot compose through {other.target} != {self.source}")
        if 0 in self.shape or 0 in other.shape:
            return KOperator.zero(other.source, self.target, self.N)
        return KOperator(other.source, self.target, self.N, self.matrix.matmul(other.matrix))

    def __add__(self, other: "KOperator") -> "KOperator":
        self._require_parallel(other)
        if 0 in self.shape:
            return self
        return KOperator(self.source, self.target, self.N, self.matrix.add(other.matrix))

    def __sub__(self, other: "KOperator") -> "KOperator":
        self._require_parallel(other)
        if 0 in self.shape:
            return self
        return KOperator(self.source, self.target, self.N, self.matrix.sub(other.matrix))

    def __neg__(self) -> "KOperator":
        if 0 in self.shape:
            return self
        return KOperator(self.source, self.target, self.N, self.matrix.neg())

    def __repr__(self) -> str:
        return f"KOperator({self.source}->{self.target}, shape={self.shape})"


def _require_vertex(vertex: int, k: Composition) -> None:
    if not 1 <= vertex < k.n:
        raise InvalidCompositionError(
            f"vertex {vertex} outside [1, {k.n - 1}] for weight {k}", operation="operator_E"
        )


@lru_cache(maxsize=4096)
def operator_E(vertex: int, r: int, k: Composition) -> KOperator:
    """
    K-theory class of E[vertex,r] 1_k.

    Args:
        vertex: Quiver vertex i in [1, n-1]
        r: Loop degree
        k: Source weight (entries may be negative)

    Returns:
        Operator from k to k + alpha_i; zero when either space is empty
    """
    _require_vertex(vertex, k)
    N = k.N
    target = k.shifted(vertex)
    if not fixed_points(k) or not fixed_points(target):
        return KOperator.zero(k, target, N)
    t = _gens(N)
    one = torus_field(N).one
    index = _point_index(target)
    entries: Dict[int, Dict[int, FracElement]] = {}
    for col, point in enumerate(fixed_points(k)):
        lower = point.block(vertex)
        for a in point.block(vertex + 1):
            blocks = list(point.blocks)
            blocks[vertex - 1] = tuple(sorted(lower + (a,)))
            blocks[vertex] = tuple(x for x in point.block(vertex + 1) if x != a)
            row = index[FixedPoint(tuple(blocks))]
            value = t[a - 1] ** r
            for x in lower:
                value = value / (one - t[x - 1] / t[a - 1])
            entries.setdefault(row, {})[col] = value
    return KOperator.from_entries(k, target, N, entries)


@lru_cache(maxsize=256)
def euler_gram(k: Composition) -> Tuple[FracElement, ...]:
    """Diagonal of the Euler pairing in the fixed-point basis."""
    N = k.N
    t = _gens(N)
    one = torus_field(N).one
    weights = []
    for point in fixed_points(k):
        value = one
        for j, l in combinations(range(len(point.blocks)), 2):
            for a in point.blocks[j]:
                for b in point.blocks[l]:
                    value = value / (one - t[a - 1] / t[b - 1])
        weights.append(value)
    return tuple(weights)


def structure_sheaf(k: Composition) -> Tuple[FracElement, ...]:
    """Class of O: every fixed-point restriction is 1."""
    one = torus_field(k.N).one
    return tuple(one for _ in fixed_points(k))


def apply(operator: KOperator, vector: Sequence[FracElement]) -> Tuple[FracElement, ...]:
    """Image of a localized class under an operator."""
    zero = torus_field(operator.N).zero
    result = [zero] * operator.shape[0]
    for (row, col), value in operator.entries().items():
        result[row] = result[row] + value * vector[col]
    return tuple(result)


def pairing(a: Sequence[FracElement], b: Sequence[FracElement], k: Composition) -> FracElement:
    """Equivariant Euler pairing <a, b> on Fl_k."""
    total = torus_field(k.N).zero
    for x, y, g in zip(a, b, euler_gram(k)):
        total = total + conjugate(x) * y * g
    return total


def adjoint(operator: KOperator, side: Side = "right") -> KOperator:
    """
    Right or left adjoint for the Euler pairing.

    E^R = G_s^{-1} conj(M)^T G_t and E^L = conj(G_s)^{-1} conj(M)^T conj(G_t),
    where s and t are the source and target of E.

    Raises:
        SingularGramError: If a Gram entry vanishes
        AdjunctionError: If the adjunction identity fails after construction
    """
    source, target, N = operator.source, operator.target, operator.N
    if 0 in operator.shape:
        return KOperator.zero(target, source, N)
    g_s, g_t = euler_gram(source), euler_gram(target)
    if not all(g_s) or not all(g_t):
        raise SingularGramError(
            f"Euler Gram matrix of {source} or {target} is singular", operation="adjoint"
        )
    if side == "left":
        g_s = tuple(conjugate(g) for g in g_s)
        g_t = tuple(conjugate(g) for g in g_t)
    entries: Dict[int, Dict[int, FracElement]] = {}
    for (row, col), value in operator.entries().items():
        entries.setdefault(col, {})[row] = conjugate(value) * g_t[row] / g_s[col]
    result = KOperator.from_entries(target, source, N, entries)
    if settings.verify_adjunctions:
        _verify_adjunction(operator, result, side)
    return result


def _diagonal(k: Composition, N: int, values: Sequence[FracElement]) -> KOperator:
    return KOperator.from_entries(k, k, N, {i: {i: v} for i, v in enumerate(values)})


def _conjugate_transpose(operator: KOperator) -> KOperator:
    entries: Dict[int, Dict[int, FracElement]] = {}
    for (row, col), value in operator.entries().items():
        entries.setdefault(col, {})[row] = conjugate(value)
    return KOperator.from_entries(operator.target, operator.source, operator.N, entries)


def _verify_adjunction(operator: KOperator, adj: KOperator, side: Side) -> None:
    source, target, N = operator.source, operator.target, operator.N
    g_s = _diagonal(source, N, euler_gram(source))
    g_t = _diagonal(target, N, euler_gram(target))
    if side == "right":
        lhs = _conjugate_transpose(operator) @ g_t
        rhs = g_s @ adj
    else:
        lhs = _conjugate_transpose(adj) @ g_s
        rhs = g_t @ operator
    if not (lhs - rhs).is_zero():
        logger.error(f"{side} adjoint of {operator} fails the adjunction identity")
        raise AdjunctionError(
            f"{side} adjoint of {source}->{target} fails the adjunction identity",
            operation="adjoint",
        )


@lru_cache(maxsize=4096)
def adjoint_E(vertex: int, r: int, k: Composition, side: Side = "right") -> KOperator:
    """E^R[vertex,r] 1_k (or E^L): the adjoint of E[vertex,r] 1_{k - alpha_i}, from k."""
    _require_vertex(vertex, k)
    return adjoint(operator_E(vertex, r, k.shifted(vertex, -1)), side)


def is_symmetric_laurent(value: FracElement, N: int) -> bool:
    """True iff value is a Laurent polynomial in t invariant under every permutation of t."""
    if len(value.denom.terms()) != 1:
        return False
    field = value.field
    ring = field.ring
    # adjacent transpositions generate S_N
    for j in range(N - 1):
        perm = list(range(N))
        perm[j], perm[j + 1] = perm[j + 1], perm[j]
        moved = field.new(
            ring.from_dict(
                {tuple(exps[p] for p in perm): c for exps, c in value.numer.terms()}
            ),
            ring.from_dict(
                {tuple(exps[p] for p in perm): c for exps, c in value.denom.terms()}
            ),
        )
        if moved != value:
            return False
    return True


def render(value: FracElement) -> str:
    """Human-readable rational function."""
    return str(value.as_expr())
