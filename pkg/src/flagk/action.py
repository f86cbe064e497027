"""
K-theory shadow of the categorical action on partial flag varieties.

Shift [1] is rendered as multiplication by -1 and an exact triangle A -> B -> C
as [B] = [A] + [C]. Every identity below is an exact matrix equality over
QQ(t1, ..., tN), checked on each weight space 1_mu.
"""

import logging
from functools import partial
from typing import Callable, Iterable, List, Optional, Tuple

from src.core.config import Caps, default_caps
from src.core.reports import CheckReport, CheckRow
from src.core.utils import ResourceCapError, UsageError
from src.flagk.model import (
    Composition,
    KOperator,
    adjoint_E,
    compositions,
    operator_E,
)

logger = logging.getLogger(__name__)


Factor = Callable[[int, int, Composition], KOperator]

_functor: Factor = operator_E
_right_adjoint: Factor = partial(adjoint_E, side="right")
_left_adjoint: Factor = partial(adjoint_E, side="left")


def _product(mu: Composition, *factors: Tuple[Factor, int, int]) -> KOperator:
    """Compose factors written left to right, applied right to left on 1_mu."""
    current = KOperator.identity(mu, mu.N)
    for make, i, r in reversed(factors):
        step = make(i, r, current.target)
        current = step @ current
    return current


class _Checker:
    def __init__(self, report: CheckReport):
        self.report = report

    def compare(
        self, condition: str, mu: Composition, params: dict, lhs: KOperator, rhs: KOperator
    ) -> None:
        difference = lhs - rhs
        entries = difference.nonzero_entries()
        if entries:
            logger.warning(f"Condition {condition} fails at weight {mu} with {params}")
        else:
            logger.debug(f"Condition {condition} holds at weight {mu} with {params}")
        self.report.add(
            CheckRow(
                condition=condition,
                params=params,
                passed=entries == 0,
                weight=mu.parts,
                nonzero_entries=entries,
            )
        )


def _check_weight(
    checker: _Checker,
    mu: Composition,
    degrees: List[int],
    flip_sign_2a: bool,
) -> int:
    """Run every condition on 1_mu; returns the number of unchecked instances."""
    n, N = mu.n, mu.N
    untested = 0
    identity = KOperator.identity(mu, N)

    for i in range(1, n):
        # (2a) same vertex
        for r in degrees:
            for s in degrees:
                lhs = _product(mu, (_functor, i, r), (_functor, i, s))
                if r - s == -1:
                    rhs = KOperator.zero(mu, lhs.target, N)
                else:
                    rhs = _product(mu, (_functor, i, s - 1), (_functor, i, r + 1))
                    if not flip_sign_2a:
                        rhs = -rhs
                checker.compare("2a", mu, {"i": i, "r": r, "s": s}, lhs, rhs)

        # (3) exact triangles with the adjoints. When k_i + k_{i+1} = 0, E[i,*]
        # and its adjoints vanish on 1_mu and the triangle is not checked.
        triangle_degrees = degrees if mu.parts[i - 1] + mu.parts[i] > 0 else []
        untested += 2 * (len(degrees) - len(triangle_degrees))
        for r in triangle_degrees:
            for name, adj in (("3_right", _right_adjoint), ("3_left", _left_adjoint)):
                lhs = _product(mu, (_functor, i, r), (adj, i, r)) + _product(
                    mu, (adj, i, r - 1), (_functor, i, r - 1)
                )
                checker.compare(name, mu, {"i": i, "r": r}, lhs, identity)

        # (4a) shifted condition inside its window
        bound = mu.parts[i - 1] + mu.parts[i] - 1
        for r in degrees:
            for s in degrees:
                params = {"i": i, "r": r, "s": s}
                if 1 <= r - s <= bound:
                    checker.compare(
                        "4a_right",
                        mu,
                        params,
                        _product(mu, (_functor, i, r), (_right_adjoint, i, s)),
                        -_product(mu, (_right_adjoint, i, s - 1), (_functor, i, r - 1)),
                    )
                else:
                    untested += 1
                if -bound <= r - s <= -1:
                    checker.compare(
                        "4a_left",
                        mu,
                        params,
                        _product(mu, (_functor, i, r), (_left_adjoint, i, s)),
                        -_product(mu, (_left_adjoint, i, s - 1), (_functor, i, r - 1)),
                    )
                else:
                    untested += 1

    for i in range(1, n - 1):
        # (2b) adjacent vertices
        for r in degrees:
            for s in degrees:
                checker.compare(
                    "2b",
                    mu,
                    {"i": i, "r": r, "s": s},
                    _product(mu, (_functor, i, r), (_functor, i + 1, s)),
                    _product(mu, (_functor, i, r + 1), (_functor, i + 1, s - 1))
                    + _product(mu, (_functor, i + 1, s), (_functor, i, r)),
                )

    for i in range(1, n):
        for j in range(1, n):
            for r in degrees:
                for s in degrees:
                    params = {"i": i, "j": j, "r": r, "s": s}
                    if j == i + 1:
                        # (4b) adjacent vertices with adjoints
                        checker.compare(
                            "4b_right",
                            mu,
                            params,
                            _product(mu, (_functor, i, r), (_right_adjoint, j, s)),
                            -_product(mu, (_right_adjoint, j, s + 1), (_functor, i, r + 1)),
                        )
                        checker.compare(
                            "4b_left",
                            mu,
                            params,
                            _product(mu, (_functor, i, r), (_left_adjoint, j, s)),
                            _product(mu, (_left_adjoint, j, s), (_functor, i, r)),
                        )
                    elif j == i - 1:
                        checker.compare(
                            "4b_right",
                            mu,
                            params,
                            _product(mu, (_functor, i, r), (_right_adjoint, j, s)),
                            _product(mu, (_right_adjoint, j, s), (_functor, i, r)),
                        )
                        checker.compare(
                            "4b_left",
                            mu,
                            params,
                            _product(mu, (_functor, i, r), (_left_adjoint, j, s)),
                            -_product(mu, (_left_adjoint, j, s + 1), (_functor, i, r + 1)),
                        )
                    elif abs(i - j) >= 2:
                        # (2c) and (4c) distant vertices
                        if i < j:
                            checker.compare(
                                "2c",
                                mu,
                                params,
                                _product(mu, (_functor, i, r), (_functor, j, s)),
                                _product(mu, (_functor, j, s), (_functor, i, r)),
                            )
                        sides = (("4c_right", _right_adjoint), ("4c_left", _left_adjoint))
                        for name, adj in sides:
                            checker.compare(
                                name,
                                mu,
                                params,
                                _product(mu, (_functor, i, r), (adj, j, s)),
                                _product(mu, (adj, j, s), (_functor, i, r)),
                            )
    return untested


def _check_caps(n: int, N: int, caps: Caps) -> None:
    if n > caps.max_flag_n:
        raise ResourceCapError(
            f"n={n} exceeds the cap {caps.max_flag_n}", operation="verify_action"
        )
    if N > caps.max_flag_points:
        raise ResourceCapError(
            f"N={N} exceeds the cap {caps.max_flag_points}", operation="verify_action"
        )


def verify_action(
    n: int,
    N: int,
    window: Tuple[int, int],
    weights: Optional[Iterable[Composition]] = None,
    flip_sign_2a: bool = False,
    caps: Optional[Caps] = None,
) -> CheckReport:
    """
    Check the K-shadow of every action condition on the given weights.

    Args:
        n: Number of blocks (n >= 2)
        N: Dimension of the ambient space (N >= 1)
        window: Inclusive loop-degree range for r and s
        weights: Subset of C(n, N) to check (all by default)
        flip_sign_2a: Negate the same-vertex relation (negative control)
        caps: Size limits

    Returns:
        Report with one row per identity; shifted-condition pairs outside their
        window and triangles at vertices with k_i + k_{i+1} = 0 are counted as untested

    Raises:
        UsageError: If n < 2 or N < 1
        ResourceCapError: If n or N exceeds the caps
    """
    if n < 2 or N < 1:
        raise UsageError(f"verify_action needs n >= 2 and N >= 1, got n={n}, N={N}")
    _check_caps(n, N, caps or default_caps())
    low, high = window
    degrees = list(range(low, high + 1))
    selected = list(weights) if weights is not None else compositions(n, N)

    report = CheckReport(
        title="categorical action K-shadow",
        metadata={"n": n, "N": N, "window": f"{low}:{high}", "flip_sign_2a": flip_sign_2a},
    )
    checker = _Checker(report)
    for mu in selected:
        logger.debug(f"Checking action conditions on weight {mu}")
        report.untested += _check_weight(checker, mu, degrees, flip_sign_2a)
    logger.info(
        f"verify_action n={n} N={N}: {len(report.rows)} identities, "
        f"{len(report.failures)} failures, {report.untested} untested"
    )
    return report
