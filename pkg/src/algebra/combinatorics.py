"""
Partition and composition enumerators shared by the algebra and flag modules.
"""

from functools import lru_cache
from typing import Iterator, Optional, Tuple

from sympy.utilities.iterables import partitions


def bounded_partitions(
    total: int, max_parts: int, max_part: Optional[int] = None
) -> Tuple[Tuple[int, ...], ...]:
    """
    Partitions of ``total`` into at most ``max_parts`` parts, each at most ``max_part``.

    Args:
        total: Integer being partitioned
        max_parts: Maximal number of (positive) parts
        max_part: Optional bound on the largest part

    Returns:
        Weakly decreasing tuples in reverse-lexicographic order (largest first)
    """
    return _bounded_partitions(total, max_parts, max_part)


@lru_cache(maxsize=4096)
def _bounded_partitions(
    total: int, max_parts: int, max_part: Optional[int]
) -> Tuple[Tuple[int, ...], ...]:
    if total < 0 or max_parts < 0:
        return ()
    if total == 0:
        return ((),)
    if max_parts == 0 or max_part == 0:
        return ()
    found = []
    # sympy yields {} for impossible bounds; the sum filter drops it
    for multiplicities in partitions(total, m=max_parts, k=max_part):
        parts = tuple(
            sorted(
                (part for part, count in multiplicities.items() for _ in range(count)),
                reverse=True,
            )
        )
        if sum(parts) == total:
            found.append(parts)
    return tuple(sorted(found, reverse=True))


def padded(parts: Tuple[int, ...], length: int) -> Tuple[int, ...]:
    """Pad a partition with zeros to exactly ``length`` entries."""
    if len(parts) > length:
        raise ValueError(f"partition {parts} has more than {length} parts")
    return parts + (0,) * (length - len(parts))


def weak_compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """
    Weak compositions of ``total`` into ``parts`` non-negative entries.

    Yields:
        Tuples in reverse-lexicographic order (largest first entry first)
    """
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total, -1, -1):
        for rest in weak_compositions(total - first, parts - 1):
            yield (first,) + rest
