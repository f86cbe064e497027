"""
Shuffle-algebra and quantum-group commands.

This module provides the shuffle-mul, nf, phi, dims and verify-iso commands.
"""

import logging
from typing import Any, Dict, List, Optional, Tuple

from src.algebra.isomap import (
    DimReport,
    dimension_table,
    intertwine_check,
    negative_closure_check,
    phi,
    power_of_unit_check,
    soundness_check,
    verify_relations,
)
from src.algebra.shuffle import KHAElement, shuffle_mul
from src.algebra.uplus import UElement, confluence_check, normal_form
from src.cli.base import EngineCommand
from src.core.config import Caps
from src.core.reports import CheckReport, CommandOutcome
from src.core.utils import GradeMismatchError, parse_json_input

logger = logging.getLogger(__name__)


def parse_element_text(text: str) -> UElement:
    """
    Read a quantum-group element from word text or its JSON form.

    Args:
        text: ``e[i,r] ...``, ``c * word + ...`` or ``{"terms": [...]}``

    Returns:
        Parsed element
    """
    if text.lstrip().startswith("{"):
        return UElement.from_json(parse_json_input(text, "word"))
    return UElement.from_text(text)


def render_dimension_table(alpha: Tuple[int, ...], rows: List[DimReport]) -> str:
    """Text table: one column per m, basis/formula/rank per cell."""
    header = "alpha \\ m | " + " | ".join(f"{row.grade.m:^9}" for row in rows)
    cells = " | ".join(
        f"{row.basis_size}/{row.formula_dim}/{row.phi_rank}{'' if row.passed else '!'}".center(9)
        for row in rows
    )
    label = "(" + ",".join(map(str, alpha)) + ")"
    status = "PASS" if all(row.passed for row in rows) else "FAIL"
    return "\n".join([header, f"{label:>9} | {cells}", f"basis/formula/rank: {status}"])


class AlgebraCommands(EngineCommand):
    """Commands on the shuffle algebra and the positive quantum group."""

    async def shuffle_mul(self, n: int, lhs_text: str, rhs_text: str) -> CommandOutcome:
        """
        Multiply two KHA elements given as JSON.

        Args:
            n: Number of quiver vertices
            lhs_text: JSON of the left factor
            rhs_text: JSON of the right factor

        Returns:
            Outcome carrying the product's JSON
        """
        logger.info(f"Computing a shuffle product over {n} vertices")
        lhs = KHAElement.from_json(parse_json_input(lhs_text, "lhs"))
        rhs = KHAElement.from_json(parse_json_input(rhs_text, "rhs"))
        for name, element in (("lhs", lhs), ("rhs", rhs)):
            if element.n != n:
                raise GradeMismatchError(
                    f"{name} lives over {element.n} vertices, expected {n}",
                    operation="shuffle-mul",
                )
        product = await self.execute(shuffle_mul, lhs, rhs)
        return CommandOutcome(data=product.to_json(), text=product.to_text())

    async def normal_form(self, word_text: str) -> CommandOutcome:
        """
        Rewrite an element to normal form.

        Args:
            word_text: Word grammar or element JSON

        Returns:
            Outcome carrying the normal form
        """
        element = parse_element_text(word_text)
        logger.info(f"Normalizing {element.to_text()}")
        result = await self.execute(normal_form, element)
        return CommandOutcome(data=result.to_json(), text=result.to_text())

    async def phi(self, word_text: str, n: Optional[int] = None) -> CommandOutcome:
        """
        Map an element into the shuffle algebra.

        Args:
            word_text: Word grammar or element JSON
            n: Number of vertices (defaults to the largest vertex in the input)

        Returns:
            Outcome carrying the image's JSON
        """
        element = parse_element_text(word_text)
        if n is not None and element.max_vertex() > n:
            raise GradeMismatchError(
                f"{element.to_text()} uses a vertex above n={n}", operation="phi"
            )
        image = await self.execute(phi, element, n)
        return CommandOutcome(data=image.to_json(), text=image.to_text())

    async def dims(
        self, n: int, alpha: Tuple[int, ...], m_max: int, caps: Optional[Caps] = None
    ) -> CommandOutcome:
        """
        Dimension and rank table for m = 0..m_max.

        Args:
            n: Number of vertices
            alpha: Dimension vector
            m_max: Largest loop degree
            caps: Resource caps

        Returns:
            Outcome that passes iff every row passes
        """
        self.validate_dimension_vector(alpha, n, operation="dims")
        logger.info(f"Building the dimension table for alpha={alpha}, m <= {m_max}")
        rows = await self.execute(dimension_table, n, alpha, m_max, caps)
        data = [row.to_dict() for row in rows]
        return CommandOutcome(
            data=data,
            text=render_dimension_table(alpha, rows),
            passed=all(row.passed for row in rows),
        )

    async def verify_iso(
        self, n: int, window: Tuple[int, int], samples: int, seed: int
    ) -> CommandOutcome:
        """
        Run the relation, intertwining, soundness, confluence and degree-one suites.

        Args:
            n: Number of vertices
            window: Loop-degree window
            samples: Random samples per randomized suite
            seed: Base seed

        Returns:
            Outcome carrying the merged report
        """
        logger.info(f"Verifying phi for n={n} on window {window} with {samples} samples")
        low, high = window
        jobs: Dict[Any, Any] = {
            "relations": lambda: verify_relations(n, window),
            "soundness": lambda: soundness_check(n, samples, seed, window=window),
            "confluence": lambda: confluence_check(n, samples, seed, window=window),
            "negative_closure": lambda: negative_closure_check(n, samples, seed),
            "unit_power": lambda: power_of_unit_check(6, formula_max=4, seed=seed),
        }
        for k in range(low, high + 1):
            jobs[f"intertwine{k:+d}"] = (
                lambda k=k: intertwine_check(k, samples, n=n, seed=seed + k, window=window)
            )
        results = await self.execute_all(jobs)

        report = CheckReport(
            title="isomorphism certificate",
            metadata={"n": n, "window": f"{low}:{high}", "samples": samples, "seed": seed},
        )
        for part in results.values():
            report.merge(part)
        return CommandOutcome(
            data=report.to_dict(), text=report.render_text(), passed=report.passed
        )


# Global instance
algebra_commands = AlgebraCommands()
