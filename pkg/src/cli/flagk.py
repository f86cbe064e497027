"""
Flag-variety commands.

This module provides the ``flagk verify`` and ``flagk sod`` commands.
"""

import logging
from typing import Optional, Sequence, Tuple

from src.cli.base import EngineCommand
from src.core.config import Caps, default_caps
from src.core.reports import CheckReport, CommandOutcome
from src.flagk.action import verify_action
from src.flagk.model import compositions, validate_composition
from src.flagk.sod import sod_check

logger = logging.getLogger(__name__)


class FlagCommands(EngineCommand):
    """Commands on the K-theory of partial flag varieties."""

    async def verify(
        self,
        n: int,
        N: int,
        window: Tuple[int, int],
        flip_sign_2a: bool = False,
        caps: Optional[Caps] = None,
    ) -> CommandOutcome:
        """
        Check every action condition, one weight per job.

        Args:
            n: Number of blocks
            N: Ambient dimension
            window: Loop-degree window for r and s
            flip_sign_2a: Run the negative control
            caps: Resource caps

        Returns:
            Outcome carrying the merged report
        """
        caps = caps or default_caps()
        logger.info(f"Verifying the action on Fl(n={n}, N={N}) over window {window}")
        # validates n, N and caps before fanning out
        verify_action(n, N, window, weights=[], caps=caps)
        jobs = {
            mu.parts: (
                lambda mu=mu: verify_action(
                    n, N, window, weights=[mu], flip_sign_2a=flip_sign_2a, caps=caps
                )
            )
            for mu in compositions(n, N)
        }
        results = await self.execute_all(jobs)

        low, high = window
        report = CheckReport(
            title="categorical action K-shadow",
            metadata={"n": n, "N": N, "window": f"{low}:{high}", "flip_sign_2a": flip_sign_2a},
        )
        for part in results.values():
            report.merge(part)
        if not report.passed:
            logger.warning(f"{len(report.failures)} action identities failed")
        return CommandOutcome(
            data=report.to_dict(), text=report.render_text(), passed=report.passed
        )

    async def sod(
        self, n: int, N: int, k: Sequence[int], caps: Optional[Caps] = None
    ) -> CommandOutcome:
        """
        Check the semiorthogonal decomposition of Fl_k.

        Args:
            n: Number of blocks
            N: Ambient dimension
            k: Weight; a single entry k stands for the Grassmannian weight (k, N - k)
            caps: Resource caps

        Returns:
            Outcome carrying the report and block summary
        """
        parts = tuple(k)
        if n == 2 and len(parts) == 1:
            parts = (parts[0], N - parts[0])
        weight = validate_composition(parts, n, N)
        logger.info(f"Checking the semiorthogonal decomposition of Fl{weight}")
        result = await self.execute(sod_check, weight, caps)
        summary = (
            f"  blocks: {result.blocks}, fixed points: {result.points}, "
            f"block rank: {result.rank}, complement rank: {result.deficit}, "
            f"full: {'yes' if result.full else 'no'}"
        )
        return CommandOutcome(
            data=result.to_dict(),
            text=result.report.render_text() + "\n" + summary,
            passed=result.report.passed,
        )


# Global instance
flag_commands = FlagCommands()
