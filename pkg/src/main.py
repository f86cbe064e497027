"""
Main entry point for the KHA engine command line.

This module parses arguments, builds the validated run configuration,
dispatches to the command classes and maps outcomes to exit codes.
"""

import argparse
import logging
import sys
from typing import Awaitable, Callable, Dict, Optional, Sequence

import anyio
from pydantic import ValidationError

from src.cli.algebra import algebra_commands
from src.cli.flagk import flag_commands
from src.core.config import (
    VALID_FORMATS,
    VALID_LOG_LEVELS,
    VERSION,
    Config,
    build_config,
    get_engine_info,
    validate_configuration,
)
from src.core.reports import CommandOutcome
from src.core.utils import (
    EngineError,
    UsageError,
    dump_json,
    format_response,
    parse_int_list,
    parse_window,
    setup_logging,
)

logger = logging.getLogger(__name__)

Handler = Callable[[argparse.Namespace, Config], Awaitable[CommandOutcome]]


def build_parser() -> argparse.ArgumentParser:
    """
    Build the argument parser for every subcommand.

    Returns:
        Configured parser
    """
    parser = argparse.ArgumentParser(
        prog="kha-engine",
        description="Exact checks for K-theoretic Hall algebras and flag-variety K-theory.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {VERSION}")
    parser.add_argument("--format", choices=VALID_FORMATS, default=None, help="Output format")
    parser.add_argument("--seed", type=int, default=None, help="Seed for randomized suites")
    parser.add_argument(
        "--log-level",
        choices=VALID_LOG_LEVELS,
        type=str.upper,
        default=None,
        help="Logging level (logs go to stderr)",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    shuffle = commands.add_parser("shuffle-mul", help="Shuffle product of two KHA elements")
    shuffle.add_argument("--n", type=int, required=True)
    shuffle.add_argument("--lhs", required=True, help="JSON file, or - for stdin")
    shuffle.add_argument("--rhs", required=True, help="JSON file, or - for stdin")

    nf = commands.add_parser("nf", help="Normal form of a quantum-group element")
    nf.add_argument("--word", required=True)

    phi = commands.add_parser("phi", help="Image of an element in the shuffle algebra")
    phi.add_argument("--word", required=True)
    phi.add_argument("--n", type=int, default=None)

    dims = commands.add_parser("dims", help="Basis size, dimension formula and rank of phi")
    dims.add_argument("--n", type=int, required=True)
    dims.add_argument("--alpha", required=True, help="Dimension vector such as 1,1")
    dims.add_argument("--m-max", type=int, required=True)

    verify_iso = commands.add_parser("verify-iso", help="Certificate suites for phi")
    verify_iso.add_argument("--n", type=int, required=True)
    verify_iso.add_argument("--window", default=None, help="Loop-degree window lo:hi")
    verify_iso.add_argument("--samples", type=int, default=20)

    flagk = commands.add_parser("flagk", help="Partial flag variety checks")
    flag_commands_parser = flagk.add_subparsers(dest="flag_command", required=True)

    verify = flag_commands_parser.add_parser("verify", help="Action conditions on K-theory")
    verify.add_argument("--n", type=int, required=True)
    verify.add_argument("--N", type=int, required=True)
    verify.add_argument("--window", default=None, help="Loop-degree window lo:hi")
    verify.add_argument(
        "--flip-sign-2a",
        action="store_true",
        help="Negate the same-vertex relation (expected to fail)",
    )

    sod = flag_commands_parser.add_parser("sod", help="Semiorthogonal decomposition check")
    sod.add_argument("--n", type=int, required=True)
    sod.add_argument("--N", type=int, required=True)
    sod.add_argument("--k", required=True, help="Weight such as 1,1,0 (or k for n = 2)")

    return parser


async def _read_source(source: str) -> str:
    """Read a JSON argument from a file path or stdin."""
    if source == "-":
        return await anyio.to_thread.run_sync(sys.stdin.read)
    try:
        return await anyio.Path(source).read_text()
    except OSError as e:
        raise UsageError(f"Cannot read {source}: {e.strerror}", operation="read")


async def _shuffle_mul(args: argparse.Namespace, config: Config) -> CommandOutcome:
    if args.lhs == "-" and args.rhs == "-":
        raise UsageError("--lhs and --rhs cannot both read stdin")
    lhs_text = await _read_source(args.lhs)
    rhs_text = await _read_source(args.rhs)
    return await algebra_commands.shuffle_mul(config.n, lhs_text, rhs_text)


async def _nf(args: argparse.Namespace, config: Config) -> CommandOutcome:
    return await algebra_commands.normal_form(args.word)


async def _phi(args: argparse.Namespace, config: Config) -> CommandOutcome:
    return await algebra_commands.phi(args.word, args.n)


async def _dims(args: argparse.Namespace, config: Config) -> CommandOutcome:
    alpha = parse_int_list(args.alpha, "alpha")
    if args.m_max < 0:
        raise UsageError(f"--m-max must be non-negative, got {args.m_max}")
    return await algebra_commands.dims(config.n, alpha, args.m_max, config.caps)


async def _verify_iso(args: argparse.Namespace, config: Config) -> CommandOutcome:
    if args.samples < 0:
        raise UsageError(f"--samples must be non-negative, got {args.samples}")
    return await algebra_commands.verify_iso(
        config.n, config.degree_window, args.samples, config.seed
    )


async def _flagk(args: argparse.Namespace, config: Config) -> CommandOutcome:
    N = config.N if config.N is not None else 1
    if args.flag_command == "verify":
        return await flag_commands.verify(
            config.n, N, config.degree_window, args.flip_sign_2a, config.caps
        )
    weight = parse_int_list(args.k, "k")
    return await flag_commands.sod(config.n, N, weight, config.caps)


HANDLERS: Dict[str, Handler] = {
    "shuffle-mul": _shuffle_mul,
    "nf": _nf,
    "phi": _phi,
    "dims": _dims,
    "verify-iso": _verify_iso,
    "flagk": _flagk,
}


def _build_run_config(args: argparse.Namespace) -> Config:
    window = getattr(args, "window", None)
    return build_config(
        n=getattr(args, "n", None),
        N=getattr(args, "N", None),
        degree_window=parse_window(window) if window is not None else None,
        format=args.format,
        seed=args.seed,
    )


def _emit(outcome: CommandOutcome, args: argparse.Namespace, config: Config) -> None:
    if config.format == "json":
        command = args.command
        if command == "flagk":
            command = f"flagk {args.flag_command}"
        response = format_response(
            success=outcome.passed,
            data=outcome.data,
            error=None if outcome.passed else "one or more checks failed",
            metadata={"command": command, "seed": config.seed, "version": VERSION},
        )
        print(dump_json(response))
    else:
        print(outcome.text)


async def main(args: argparse.Namespace) -> int:
    """
    Run one parsed command.

    Args:
        args: Parsed command-line arguments

    Returns:
        Exit code (0 all checks pass, 1 failed check, 2 usage error, 3 resource cap)
    """
    # Set up logging first
    setup_logging(args.log_level)
    logger.debug(f"Starting kha-engine v{VERSION}: {get_engine_info()}")

    is_valid, message = validate_configuration()
    if not is_valid:
        logger.error(message)
        print(f"error: {message}", file=sys.stderr)
        return 2

    try:
        config = _build_run_config(args)
        outcome = await HANDLERS[args.command](args, config)
    except EngineError as e:
        logger.debug(f"{type(e).__name__} in {e.operation or args.command}: {e.details}")
        print(f"error: {e.message}", file=sys.stderr)
        return e.exit_code
    except ValidationError as e:
        print(f"error: invalid configuration: {e}", file=sys.stderr)
        return 2

    _emit(outcome, args, config)
    if not outcome.passed:
        logger.warning(f"{args.command} finished with failed checks")
        return 1
    return 0


def cli_run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments and run the command to completion.

    Args:
        argv: Arguments without the program name (defaults to sys.argv[1:])

    Returns:
        Exit code
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 for --help / --version
        return e.code if isinstance(e.code, int) else 2
    return anyio.run(main, args)


def cli_main() -> None:
    """
    CLI entry point that handles exit codes.
    """
    try:
        sys.exit(cli_run(sys.argv[1:]))
    except KeyboardInterrupt:
        print("\nInterrupted by user", file=sys.stderr)
        sys.exit(130)
    except Exception as e:
        print(f"Unexpected error: {e}", file=sys.stderr)
        sys.exit(1)


if __name__ == "__main__":
    cli_main()
