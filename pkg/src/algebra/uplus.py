"""
The positive 0-affine quantum group as words in e[i,r] modulo its quadratic relations.

Normal forms are computed by a terminating rewriting system. A word is in
normal form when its vertices weakly increase from left to right and, inside
each run of one vertex, the loop degrees weakly decrease. Reducible adjacent
pairs are rewritten by

    e[i,r] e[i,s], r < s         ->  0 if s == r + 1, else -e[i,s-1] e[i,r+1]
    e[i+1,s] e[i,r]              ->  e[i,r] e[i+1,s] - e[i,r+1] e[i+1,s-1]
    e[j,s] e[i,r], j >= i + 2    ->  e[i,r] e[j,s]

Every step strictly decreases the potential (inversions, sum of r^2) in the
lexicographic order.
"""

import logging
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from types import MappingProxyType
from typing import Any, Dict, List, Mapping, Optional, Tuple

from src.algebra.combinatorics import bounded_partitions, padded, weak_compositions
from src.algebra.ring import Scalar, format_rational, parse_rational
from src.algebra.shuffle import DimVector
from src.core.config import settings
from src.core.reports import CheckReport, CheckRow
from src.core.utils import GradeMismatchError, NegativeDegreeError, ParseError, RewritingError

logger = logging.getLogger(__name__)

Letter = Tuple[int, int]
STRATEGIES = ("leftmost", "rightmost")

_LETTER = re.compile(r"e\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\]")


@dataclass(frozen=True, order=True)
class BiGrade:
    """Dimension vector together with total loop degree."""

    alpha: DimVector
    m: int

    @property
    def n(self) -> int:
        return self.alpha.n

    def __str__(self) -> str:
        return f"{self.alpha},m={self.m}"


@dataclass(frozen=True, order=True)
class Word:
    """A word e[i1,r1] e[i2,r2] ...; the empty word is the unit."""

    letters: Tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "letters", tuple((int(i), int(r)) for i, r in self.letters)
        )

    @classmethod
    def of(cls, *letters: Letter) -> "Word":
        return cls(tuple(letters))

    @classmethod
    def parse(cls, text: str) -> "Word":
        """
        Parse ``e[i,r] e[i,r] ...``; ``1`` or blank text is the empty word.

        Raises:
            ParseError: On anything else
        """
        stripped = text.strip()
        if stripped in ("", "1"):
            return cls()
        letters = [(int(m.group(1)), int(m.group(2))) for m in _LETTER.finditer(stripped)]
        leftover = _LETTER.sub("", stripped).strip()
        if leftover or not letters:
            raise ParseError(f"Cannot parse word {text!r}", operation="Word.parse")
        if any(i < 1 for i, _ in letters):
            raise ParseError(f"Vertices must be positive in {text!r}", operation="Word.parse")
        return cls(tuple(letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def max_vertex(self) -> int:
        return max((i for i, _ in self.letters), default=0)

    def bigrade(self, n: int) -> BiGrade:
        if self.max_vertex() > n:
            raise GradeMismatchError(
                f"word {self.to_text()} uses a vertex above {n}", operation="bigrade"
            )
        counts = [0] * n
        for i, _ in self.letters:
            counts[i - 1] += 1
        return BiGrade(DimVector(tuple(counts)), sum(r for _, r in self.letters))

    def to_text(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"e[{i},{r}]" for i, r in self.letters)

    def __str__(self) -> str:
        return self.to_text()


class UElement:
    """A finite rational combination of words."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Optional[Mapping[Word, Scalar]] = None):
        merged: Dict[Word, Fraction] = {}
        for word, coeff in (terms or {}).items():
            merged[word] = merged.get(word, Fraction(0)) + Fraction(coeff)
        self._terms = {w: c for w, c in sorted(merged.items()) if c != 0}

    @classmethod
    def zero(cls) -> "UElement":
        return cls()

    @classmethod
    def one(cls) -> "UElement":
        return cls({Word(): 1})

    @classmethod
    def from_word(cls, word: Word, coeff: Scalar = 1) -> "UElement":
        return cls({word: coeff})

    @property
    def terms(self) -> Mapping[Word, Fraction]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def max_vertex(self) -> int:
        return max((w.max_vertex() for w in self._terms), default=0)

    def __add__(self, other: "UElement") -> "UElement":
        merged = dict(self._terms)
        for word, coeff in other._terms.items():
            merged[word] = merged.get(word, Fraction(0)) + coeff
        return UElement(merged)

    def __neg__(self) -> "UElement":
        return UElement({w: -c for w, c in self._terms.items()})

    def __sub__(self, other: "UElement") -> "UElement":
        return self + (-other)

    def scale(self, factor: Scalar) -> "UElement":
        return UElement({w: c * factor for w, c in self._terms.items()})

    def __mul__(self, other: "UElement") -> "UElement":
        result: Dict[Word, Fraction] = {}
        for (a, ca), (b, cb) in product(self._terms.items(), other._terms.items()):
            word = a * b
            result[word] = result.get(word, Fraction(0)) + ca * cb
        return UElement(result)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UElement):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(
            f"{format_rational(coeff)} * {word.to_text()}" for word, coeff in self._terms.items()
        )

    @classmethod
    def from_text(cls, text: str) -> "UElement":
        """Parse either a bare word or the ``c * word + c * word`` form of ``to_text``."""
        stripped = text.strip()
        if stripped == "0":
            return cls()
        terms: Dict[Word, Fraction] = {}
        for chunk in stripped.split(" + "):
            if "*" in chunk:
                coeff_text, word_text = chunk.split("*", 1)
                coeff = parse_rational(coeff_text)
            else:
                coeff, word_text = Fraction(1), chunk
            word = Word.parse(word_text)
            terms[word] = terms.get(word, Fraction(0)) + coeff
        return cls(terms)

    def to_json(self) -> Dict[str, Any]:
        return {
            "terms": [
                {"coeff": format_rational(coeff), "word": [list(letter) for letter in word.letters]}
                for word, coeff in self._terms.items()
            ]
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "UElement":
        """
        Parse ``{"terms": [{"coeff": "p/q", "word": [[i, r], ...]}]}``.

        Raises:
            ParseError: If fields are missing or malformed
        """
        try:
            terms: Dict[Word, Fraction] = {}
            for term in data["terms"]:
                word = Word(tuple((int(i), int(r)) for i, r in term["word"]))
                if any(i < 1 for i, _ in word.letters):
                    raise ValueError("vertices must be positive")
                terms[word] = terms.get(word, Fraction(0)) + parse_rational(str(term["coeff"]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
            raise ParseError(f"Malformed UElement JSON: {e}", operation="UElement.from_json")
        return cls(terms)

    def __repr__(self) -> str:
        return f"UElement({self.to_text()!r})"


def inversions(word: Word) -> int:
    """Number of positions a < b with vertex_a > vertex_b."""
    vertices = [i for i, _ in word.letters]
    return sum(
        1
        for a in range(len(vertices))
        for b in range(a + 1, len(vertices))
        if vertices[a] > vertices[b]
    )


def potential(word: Word) -> Tuple[int, int]:
    """Termination measure (inversions, sum of squared loop degrees)."""
    return inversions(word), sum(r * r for _, r in word.letters)


def filtration_degree(u: UElement) -> int:
    """Largest inversion count among the terms of u (0 for u = 0)."""
    return max((inversions(w) for w in u.terms), default=0)


def _reduce_pair(left: Letter, right: Letter) -> Optional[List[Tuple[int, Tuple[Letter, ...]]]]:
    (i, r), (j, s) = left, right
    if i == j:
        if r >= s:
            return None
        if s == r + 1:
            return []
        return [(-1, ((i, s - 1), (i, r + 1)))]
    if i == j + 1:
        return [(1, ((j, s), (i, r))), (-1, ((j, s + 1), (i, r - 1)))]
    if i >= j + 2:
        return [(1, ((j, s), (i, r)))]
    return None


def rewrite_step(
    word: Word, strategy: str = "leftmost"
) -> Optional[List[Tuple[int, Word]]]:
    """
    Apply one rewrite at the first reducible position in the chosen direction.

    Args:
        word: Word to rewrite
        strategy: "leftmost" or "rightmost"

    Returns:
        The replacing (coefficient, word) list, empty when the word vanishes,
        or None if the word is already in normal form
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"strategy must be one of {STRATEGIES}")
    letters = word.letters
    positions = range(len(letters) - 1)
    if strategy == "rightmost":
        positions = reversed(positions)
    for pos in positions:
        replacement = _reduce_pair(letters[pos], letters[pos + 1])
        if replacement is not None:
            return [
                (coeff, Word(letters[:pos] + pair + letters[pos + 2:]))
                for coeff, pair in replacement
            ]
    return None


def is_normal(word: Word) -> bool:
    return rewrite_step(word) is None


def normal_form(
    u: UElement, strategy: str = "leftmost", check_potential: Optional[bool] = None
) -> UElement:
    """
    Rewrite every term of u until it is in normal form.

    Args:
        u: Element to normalize
        strategy: Position choice for each step
        check_potential: Assert the potential drops at each step
            (defaults to settings.check_rewrite_potential)

    Returns:
        The normal form of u

    Raises:
        RewritingError: If checking is on and a step fails to decrease the potential
    """
    if check_potential is None:
        check_potential = settings.check_rewrite_potential
    pending: Dict[Word, Fraction] = dict(u.terms)
    done: Dict[Word, Fraction] = {}
    steps = 0
    while pending:
        word = max(pending, key=lambda w: (potential(w), w))
        coeff = pending.pop(word)
        if coeff == 0:
            continue
        replacement = rewrite_step(word, strategy)
        if replacement is None:
            done[word] = done.get(word, Fraction(0)) + coeff
            continue
        steps += 1
        for sign, child in replacement:
            if check_potential and not potential(child) < potential(word):
                raise RewritingError(
                    f"rewrite of {word} to {child} does not decrease the potential",
                    operation="normal_form",
                )
            pending[child] = pending.get(child, Fraction(0)) + sign * coeff
    logger.debug(f"normal_form: {steps} rewrite steps with strategy {strategy}")
    return UElement(done)


def tau_shift(k: int, u: UElement) -> UElement:
    """Loop-degree shift e[i,r] -> e[i,r+k]."""
    return UElement(
        {Word(tuple((i, r + k) for i, r in w.letters)): c for w, c in u.terms.items()}
    )


def canonical_basis(grade: BiGrade) -> List[Word]:
    """
    Normal-form words of a positive-sector bigrade.

    Per vertex the loop degrees form a partition padded with zeros to alpha_i
    entries. Words are listed by their concatenated degree vector, largest first.

    Raises:
        NegativeDegreeError: If grade.m < 0
    """
    if grade.m < 0:
        raise NegativeDegreeError(
            f"canonical basis needs m >= 0, got {grade.m}", operation="canonical_basis"
        )
    alpha = grade.alpha
    found = []
    for split in weak_compositions(grade.m, alpha.n):
        per_vertex = [
            [padded(p, alpha.at(v)) for p in bounded_partitions(split[v - 1], alpha.at(v))]
            for v in range(1, alpha.n + 1)
        ]
        for choice in product(*per_vertex):
            found.append(sum(choice, ()))
    found.sort(reverse=True)
    words = []
    for degrees in found:
        letters = []
        cursor = 0
        for v in range(1, alpha.n + 1):
            for r in degrees[cursor:cursor + alpha.at(v)]:
                letters.append((v, r))
            cursor += alpha.at(v)
        words.append(Word(tuple(letters)))
    return words


def random_word(
    rng: random.Random, n: int, max_length: int, window: Tuple[int, int]
) -> Word:
    """Uniform random word of length 1..max_length with degrees in the window."""
    length = rng.randint(1, max_length)
    low, high = window
    return Word(tuple((rng.randint(1, n), rng.randint(low, high)) for _ in range(length)))


def random_element(
    rng: random.Random, n: int, max_length: int, window: Tuple[int, int], max_terms: int = 3
) -> UElement:
    terms: Dict[Word, Fraction] = {}
    for _ in range(rng.randint(1, max_terms)):
        word = random_word(rng, n, max_length, window)
        terms[word] = terms.get(word, Fraction(0)) + rng.choice((-2, -1, 1, 2, 3))
    return UElement(terms)


def confluence_check(
    n: int,
    samples: int,
    seed: int,
    max_length: int = 4,
    window: Tuple[int, int] = (-3, 3),
) -> CheckReport:
    """Compare leftmost and rightmost normal forms of random words."""
    rng = random.Random(seed)
    report = CheckReport(title="rewriting confluence", metadata={"n": n, "seed": seed})
    for _ in range(samples):
        word = random_word(rng, n, max_length, window)
        left = normal_form(UElement.from_word(word), "leftmost")
        right = normal_form(UElement.from_word(word), "rightmost")
        difference = left - right
        if not difference.is_zero():
            logger.warning(f"Rewrite orders disagree on {word}")
        report.add(
            CheckRow(
                condition="confluence",
                params={"word": word.to_text()},
                passed=difference.is_zero(),
                nonzero_entries=len(difference.terms),
            )
        )
    return report