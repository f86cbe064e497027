"""
Tests for the command base class.

This module tests the EngineCommand executor including worker-thread execution,
concurrent batches, timeout handling, error propagation and argument validation.
"""

import time

import pytest
from unittest.mock import patch

from src.cli.base import EngineCommand
from src.core.utils import (
    CheckTimeoutError,
    GradeMismatchError,
    InexactDivisionError,
    UsageError,
)


class TestEngineCommandBase:
    """Test the EngineCommand base class functionality."""

    def test_initialization_from_settings(self):
        """Test executor defaults come from settings."""
        with patch('src.cli.base.settings') as mock_settings:
            mock_settings.check_timeout = 42
            mock_settings.workers = 3

            command = EngineCommand()

            assert command.timeout == 42
            assert command.workers == 3

    def test_initialization_overrides(self):
        """Test explicit timeout and worker count."""
        command = EngineCommand(timeout=1.5, workers=2)

        assert command.timeout == 1.5
        assert command.workers == 2

    @pytest.mark.asyncio
    async def test_execute_success(self):
        """Test running a computation with arguments."""
        command = EngineCommand()

        result = await command.execute(pow, 3, 4)

        assert result == 81

    @pytest.mark.asyncio
    async def test_execute_keyword_arguments(self):
        """Test that keyword arguments are forwarded."""
        command = EngineCommand()

        result = await command.execute(sorted, [3, 1, 2], reverse=True)

        assert result == [3, 2, 1]

    @pytest.mark.asyncio
    async def test_execute_timeout(self):
        """Test that a slow computation raises a timeout error."""
        command = EngineCommand(timeout=0.05)

        with pytest.raises(CheckTimeoutError, match="timed out after 0.05 seconds") as exc_info:
            await command.execute(time.sleep, 0.5)

        assert exc_info.value.exit_code == 3

    @pytest.mark.asyncio
    async def test_execute_propagates_engine_errors(self):
        """Test that engine errors surface unchanged."""
        command = EngineCommand()

        def failing():
            raise InexactDivisionError("nonzero remainder", operation="exact_div")

        with pytest.raises(InexactDivisionError, match="nonzero remainder"):
            await command.execute(failing)


class TestEngineCommandBatches:
    """Test concurrent execution of independent checks."""

    @pytest.mark.asyncio
    async def test_results_are_sorted_by_key(self):
        """Test that results come back in key order."""
        command = EngineCommand(workers=2)
        jobs = {key: (lambda key=key: key * 10) for key in (3, 1, 2)}

        results = await command.execute_all(jobs)

        assert list(results) == [1, 2, 3]
        assert list(results.values()) == [10, 20, 30]

    @pytest.mark.asyncio
    async def test_tuple_keys(self):
        """Test weight tuples as job keys."""
        command = EngineCommand()
        jobs = {(0, 2): lambda: "b", (2, 0): lambda: "c", (1, 1): lambda: "a"}

        results = await command.execute_all(jobs)

        assert list(results) == [(0, 2), (1, 1), (2, 0)]

    @pytest.mark.asyncio
    async def test_empty_batch(self):
        """Test that an empty batch returns no results."""
        command = EngineCommand()

        assert await command.execute_all({}) == {}

    @pytest.mark.asyncio
    async def test_batch_error_is_unwrapped(self):
        """Test that an engine error from one job is raised directly."""
        command = EngineCommand()

        def failing():
            raise InexactDivisionError("bad job")

        jobs = {"ok": lambda: 1, "bad": failing}

        with pytest.raises(InexactDivisionError, match="bad job"):
            await command.execute_all(jobs)

    @pytest.mark.asyncio
    async def test_batch_timeout(self):
        """Test that a slow batch raises a timeout error."""
        command = EngineCommand(timeout=0.05)
        jobs = {"slow": lambda: time.sleep(0.5)}

        with pytest.raises(CheckTimeoutError, match="checks timed out"):
            await command.execute_all(jobs)


class TestEngineCommandValidation:
    """Test argument validation."""

    def test_validate_dimension_vector_success(self):
        """Test validation with one entry per vertex."""
        command = EngineCommand()

        command.validate_dimension_vector((1, 0, 2), 3, operation="dims")

    def test_validate_dimension_vector_wrong_length(self):
        """Test that a vector of the wrong length is rejected."""
        command = EngineCommand()

        with pytest.raises(GradeMismatchError, match="has 3 entries, expected n=2"):
            command.validate_dimension_vector((1, 1, 1), 2, operation="dims")

    def test_validate_dimension_vector_negative(self):
        """Test that negative entries are rejected as a usage error."""
        command = EngineCommand()

        with pytest.raises(UsageError, match="negative entries"):
            command.validate_dimension_vector((1, -1), 2)
