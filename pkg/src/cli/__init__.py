"""
Engine command package.

This package contains the command classes behind each subcommand.
"""

from src.cli.algebra import AlgebraCommands, algebra_commands
from src.cli.base import EngineCommand
from src.cli.flagk import FlagCommands, flag_commands

__all__ = [
    # Base class
    "EngineCommand",

    # Command classes
    "AlgebraCommands",
    "FlagCommands",

    # Global instances
    "algebra_commands",
    "flag_commands",
]
