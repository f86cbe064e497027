"""
The map phi from the positive 0-affine quantum group to the shuffle algebra.

phi(e[i,r]) = x[i,1]^(-r), extended multiplicatively through the shuffle
product. A word of bigrade (alpha, m) lands in grade alpha with total exponent
-m. The positive sector (loop degrees >= 0) therefore maps to the negative
sector of the shuffle algebra, and graded ranks are compared against
partition-counting dimensions.
"""

import logging
import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import prod
from typing import Any, Dict, List, Optional, Tuple

from src.algebra.combinatorics import weak_compositions
from src.algebra.ring import exact_rank
from src.algebra.shuffle import (
    DimVector,
    KHAElement,
    SymLaurent,
    degree_one_product,
    degree_one_symmetrized,
    eta_shift,
    in_negative_sector,
    shuffle_mul,
)
from src.algebra.uplus import (
    BiGrade,
    UElement,
    Word,
    canonical_basis,
    normal_form,
    random_element,
    random_word,
    tau_shift,
)
from src.core.config import Caps, default_caps
from src.core.reports import CheckReport, CheckRow
from src.core.utils import GradeMismatchError, NegativeDegreeError, ResourceCapError

logger = logging.getLogger(__name__)


@lru_cache(maxsize=16384)
def phi_word(word: Word, n: int) -> KHAElement:
    """phi of a single word; prefixes are cached."""
    if word.max_vertex() > n:
        raise GradeMismatchError(f"word {word} uses a vertex above {n}", operation="phi")
    if not word.letters:
        return KHAElement.unit(n)
    vertex, degree = word.letters[-1]
    prefix = phi_word(Word(word.letters[:-1]), n)
    return shuffle_mul(prefix, KHAElement.generator(n, vertex, -degree))


def phi(u: UElement, n: Optional[int] = None) -> KHAElement:
    """
    Apply phi to a linear combination of words.

    Args:
        u: Element of the positive quantum group
        n: Number of quiver vertices (defaults to the largest vertex used, at least 1)

    Returns:
        The image in the shuffle algebra over n vertices
    """
    n = n or max(u.max_vertex(), 1)
    result = KHAElement.zero(n)
    for word, coeff in u.terms.items():
        result = result + phi_word(word, n).scale(coeff)
    return result


def _gen(n: int, vertex: int, degree: int) -> KHAElement:
    return phi_word(Word(((vertex, degree),)), n)


def _difference_row(
    condition: str, lhs: KHAElement, rhs: KHAElement, params: Dict[str, Any]
) -> CheckRow:
    difference = lhs - rhs
    entries = sum(len(piece.terms) for piece in difference.components.values())
    if entries:
        logger.warning(f"Relation {condition} fails at {params}")
    return CheckRow(
        condition=condition, params=params, passed=entries == 0, nonzero_entries=entries
    )


def verify_relations(n: int, window: Tuple[int, int]) -> CheckReport:
    """
    Check the three relation families under phi for every r, s in the window.

    Args:
        n: Number of vertices
        window: Inclusive loop-degree range (lo, hi)

    Returns:
        Report with one row per identity instance
    """
    low, high = window
    degrees = range(low, high + 1)
    report = CheckReport(title="phi relations", metadata={"n": n, "window": f"{low}:{high}"})

    for i in range(1, n + 1):
        for r in degrees:
            for s in degrees:
                lhs = _gen(n, i, r) * _gen(n, i, s) + _gen(n, i, s - 1) * _gen(n, i, r + 1)
                report.add(
                    _difference_row(
                        "same_vertex", lhs, KHAElement.zero(n), {"i": i, "r": r, "s": s}
                    )
                )

    for i in range(1, n):
        for r in degrees:
            for s in degrees:
                lhs = _gen(n, i + 1, s) * _gen(n, i, r)
                rhs = _gen(n, i, r) * _gen(n, i + 1, s) - _gen(n, i, r + 1) * _gen(
                    n, i + 1, s - 1
                )
                report.add(_difference_row("adjacent", lhs, rhs, {"i": i, "r": r, "s": s}))

    for i, j in combinations(range(1, n + 1), 2):
        if j - i < 2:
            continue
        for r in degrees:
            for s in degrees:
                report.add(
                    _difference_row(
                        "distant",
                        _gen(n, i, r) * _gen(n, j, s),
                        _gen(n, j, s) * _gen(n, i, r),
                        {"i": i, "j": j, "r": r, "s": s},
                    )
                )
    logger.info(f"verify_relations n={n}: {len(report.rows)} identities checked")
    return report


@lru_cache(maxsize=4096)
def partition_count(d: int, m: int) -> int:
    """Number of partitions of m into at most d parts."""
    if m < 0:
        return 0
    if m == 0:
        return 1
    if d <= 0:
        return 0
    return partition_count(d - 1, m) + partition_count(d, m - d)


def sector_dimension(grade: BiGrade) -> int:
    """
    Sum over compositions m = m_1 + ... + m_n of prod_i p_{alpha_i}(m_i).

    Raises:
        NegativeDegreeError: If grade.m < 0
    """
    if grade.m < 0:
        raise NegativeDegreeError(
            f"sector dimension needs m >= 0, got {grade.m}", operation="sector_dimension"
        )
    return sum(
        prod(partition_count(a, part) for a, part in zip(grade.alpha.entries, split))
        for split in weak_compositions(grade.m, grade.n)
    )


@dataclass(frozen=True)
class DimReport:
    """Graded-rank certificate for one bigrade."""

    grade: BiGrade
    basis_size: int
    formula_dim: int
    phi_rank: int

    @property
    def passed(self) -> bool:
        return self.basis_size == self.formula_dim == self.phi_rank

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha": list(self.grade.alpha.entries),
            "m": self.grade.m,
            "basis_size": self.basis_size,
            "formula_dim": self.formula_dim,
            "phi_rank": self.phi_rank,
            "pass": self.passed,
        }


def _check_caps(grade: BiGrade, caps: Caps) -> None:
    if grade.alpha.total > caps.max_alpha_sum:
        raise ResourceCapError(
            f"|alpha| = {grade.alpha.total} exceeds the cap {caps.max_alpha_sum}",
            operation="graded_rank",
        )
    if grade.m > caps.max_m:
        raise ResourceCapError(
            f"m = {grade.m} exceeds the cap {caps.max_m}", operation="graded_rank"
        )


def graded_rank(grade: BiGrade, caps: Optional[Caps] = None) -> DimReport:
    """
    Exact rank of phi on the canonical basis of a positive-sector bigrade.

    Images are expanded in orbit-sum coordinates and the rank is taken over QQ.

    Raises:
        NegativeDegreeError: If grade.m < 0
        ResourceCapError: If the grade or its coordinate space exceeds the caps
    """
    caps = caps or default_caps()
    _check_caps(grade, caps)
    formula_dim = sector_dimension(grade)
    basis = canonical_basis(grade)

    images = [phi_word(word, grade.n).component(grade.alpha) for word in basis]
    keys = sorted({key for image in images for key in image.terms}, reverse=True)
    if len(keys) > caps.max_orbit_coordinates:
        raise ResourceCapError(
            f"{len(keys)} orbit coordinates exceed the cap {caps.max_orbit_coordinates}",
            operation="graded_rank",
        )
    column = {key: index for index, key in enumerate(keys)}
    rows = [{column[key]: coeff for key, coeff in image.terms.items()} for image in images]
    rank = exact_rank(rows, len(keys))
    report = DimReport(grade, len(basis), formula_dim, rank)
    logger.debug(f"graded_rank {grade}: basis={len(basis)} formula={formula_dim} rank={rank}")
    return report


def dimension_table(
    n: int, alpha: Tuple[int, ...], m_max: int, caps: Optional[Caps] = None
) -> List[DimReport]:
    """Graded-rank reports for m = 0..m_max."""
    grade_alpha = DimVector(tuple(alpha))
    if grade_alpha.n != n:
        raise GradeMismatchError(
            f"alpha {grade_alpha} does not have {n} entries", operation="dimension_table"
        )
    return [graded_rank(BiGrade(grade_alpha, m), caps) for m in range(m_max + 1)]


def intertwine_check(
    k: int,
    samples: int,
    n: int = 2,
    seed: int = 0,
    max_length: int = 3,
    window: Tuple[int, int] = (-3, 3),
) -> CheckReport:
    """phi(tau_k(w)) == eta_k(phi(w)) on random words."""
    rng = random.Random(seed)
    report = CheckReport(title="phi intertwines degree shifts", metadata={"k": k, "n": n})
    for _ in range(samples):
        word = UElement.from_word(random_word(rng, n, max_length, window))
        report.add(
            _difference_row(
                "intertwine",
                phi(tau_shift(k, word), n),
                eta_shift(k, phi(word, n)),
                {"k": k, "word": word.to_text()},
            )
        )
    return report


def soundness_check(
    n: int,
    samples: int,
    seed: int = 0,
    max_length: int = 4,
    window: Tuple[int, int] = (-3, 3),
) -> CheckReport:
    """phi(normal_form(u)) == phi(u) on random elements."""
    rng = random.Random(seed)
    report = CheckReport(title="normal forms are sound under phi", metadata={"n": n})
    for _ in range(samples):
        u = random_element(rng, n, max_length, window)
        report.add(
            _difference_row(
                "soundness", phi(normal_form(u), n), phi(u, n), {"element": u.to_text()}
            )
        )
    return report


def negative_closure_check(
    n: int, samples: int, seed: int = 0, max_length: int = 3, max_degree: int = 3
) -> CheckReport:
    """Products of non-positive degree-one elements stay in the negative sector."""
    rng = random.Random(seed)
    report = CheckReport(title="negative sector is closed", metadata={"n": n})
    for _ in range(samples):
        word = random_word(rng, n, max_length, (0, max_degree))
        report.add(
            CheckRow(
                condition="negative_closure",
                params={"word": word.to_text()},
                passed=in_negative_sector(phi_word(word, n)),
            )
        )
    return report


def power_of_unit_check(
    r_max: int,
    formula_max: Optional[int] = None,
    seed: int = 0,
    exponent_range: Tuple[int, int] = (-3, 3),
) -> CheckReport:
    """
    The r-fold shuffle power of 1 at one vertex is 1 for r <= r_max; both
    sides of the degree-one closed form agree on random exponents for
    r <= formula_max (defaults to r_max).
    """
    formula_max = r_max if formula_max is None else formula_max
    rng = random.Random(seed)
    low, high = exponent_range
    report = CheckReport(
        title="degree-one products",
        metadata={"r_max": r_max, "formula_max": formula_max, "seed": seed},
    )
    for r in range(1, r_max + 1):
        power = degree_one_product([0] * r)
        grade = DimVector((r,))
        expected = KHAElement.from_piece(SymLaurent.one(grade))
        report.add(_difference_row("unit_power", power, expected, {"r": r}))
    for r in range(1, formula_max + 1):
        exponents = [rng.randint(low, high) for _ in range(r)]
        report.add(
            _difference_row(
                "degree_one_formula",
                degree_one_product(exponents),
                degree_one_symmetrized(exponents),
                {"exponents": exponents},
            )
        )
    return report
