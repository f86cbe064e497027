"""
Base executor for engine commands.

This module runs pure, CPU-bound computations in worker threads with a
timeout, and fans independent checks out over a bounded pool while keeping
the merged output in canonical key order.
"""

import logging
from functools import partial
from typing import Any, Callable, Dict, Hashable, Mapping, Optional, Sequence, TypeVar

import anyio

from src.core.config import settings
from src.core.utils import CheckTimeoutError, EngineError, GradeMismatchError

logger = logging.getLogger(__name__)

T = TypeVar("T")


def _first_error(group: BaseException) -> BaseException:
    """Pick the most informative exception out of a task-group failure."""
    children = getattr(group, "exceptions", None)
    if not children:
        return group
    flattened = [_first_error(child) for child in children]
    for error in flattened:
        if isinstance(error, EngineError):
            return error
    return flattened[0]


class EngineCommand:
    """Base class for executing engine computations."""

    def __init__(self, timeout: Optional[float] = None, workers: Optional[int] = None):
        """Initialize the executor."""
        self.timeout = timeout if timeout is not None else settings.check_timeout
        self.workers = workers if workers is not None else settings.workers

    async def execute(self, func: Callable[..., T], *args: Any, **kwargs: Any) -> T:
        """
        Run one computation in a worker thread.

        Args:
            func: Pure function to call
            *args: Positional arguments
            **kwargs: Keyword arguments

        Returns:
            The function's result

        Raises:
            CheckTimeoutError: If the computation runs past the timeout
        """
        name = getattr(func, "__name__", repr(func))
        logger.debug(f"Executing {name}")
        try:
            with anyio.fail_after(self.timeout):
                return await anyio.to_thread.run_sync(
                    partial(func, *args, **kwargs), abandon_on_cancel=True
                )
        except TimeoutError:
            logger.error(f"{name} timed out after {self.timeout} seconds")
            raise CheckTimeoutError(
                f"{name} timed out after {self.timeout} seconds", operation=name
            )

    async def execute_all(self, jobs: Mapping[Hashable, Callable[[], T]]) -> Dict[Hashable, T]:
        """
        Run independent computations concurrently.

        Args:
            jobs: Zero-argument callables keyed by a sortable check key

        Returns:
            Results keyed and ordered by job key

        Raises:
            CheckTimeoutError: If the batch runs past the timeout
            EngineError: The first engine error raised by any job
        """
        results: Dict[Hashable, T] = {}
        limiter = anyio.CapacityLimiter(self.workers)

        async def run(key: Hashable, job: Callable[[], T]) -> None:
            results[key] = await anyio.to_thread.run_sync(
                job, limiter=limiter, abandon_on_cancel=True
            )

        logger.debug(f"Executing {len(jobs)} jobs on {self.workers} workers")
        try:
            with anyio.fail_after(self.timeout):
                async with anyio.create_task_group() as tg:
                    for key, job in jobs.items():
                        tg.start_soon(run, key, job)
        except TimeoutError:
            logger.error(f"Batch of {len(jobs)} jobs timed out after {self.timeout} seconds")
            raise CheckTimeoutError(
                f"checks timed out after {self.timeout} seconds", operation="execute_all"
            )
        except Exception as e:
            error = _first_error(e)
            if isinstance(error, TimeoutError):
                raise CheckTimeoutError(
                    f"checks timed out after {self.timeout} seconds", operation="execute_all"
                )
            raise error
        try:
            ordered = sorted(results)
        except TypeError:
            ordered = sorted(results, key=repr)
        return {key: results[key] for key in ordered}

    def validate_dimension_vector(
        self, alpha: Sequence[int], n: int, operation: str = ""
    ) -> None:
        """
        Validate that a dimension vector has one nonnegative entry per vertex.

        Args:
            alpha: Dimension vector
            n: Number of vertices
            operation: Command name for the error

        Raises:
            GradeMismatchError: If alpha has the wrong length or a negative entry
        """
        if len(alpha) != n:
            raise GradeMismatchError(
                f"alpha={tuple(alpha)} has {len(alpha)} entries, expected n={n}",
                operation=operation,
            )
        negative = [a for a in alpha if a < 0]
        if negative:
            raise GradeMismatchError(
                f"alpha={tuple(alpha)} has negative entries", operation=operation
            )
