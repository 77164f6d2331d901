"""mdcf_cli
============
Mini-README: Entry point of the ``mdcf`` command line. Parses arguments for the three
subcommands (``expand``, ``verify``, ``jp``), expands parameter ranges such as
``3..12`` into family specs, validates everything into a ``RunConfig`` and dispatches
to the handlers in ``mdcf.commands``. Exit codes: 0 ok/periodic, 1 input error,
2 budget exhausted, 3 left the domain, 4 verification failed.
"""

from __future__ import annotations

import argparse
import itertools
import re
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from mdcf import configure_logging, get_logger, get_settings
from mdcf.commands import cmd_expand, cmd_jp, cmd_verify
from mdcf.models import ExitCode, Strategy
from mdcf.realembed import PrecisionExhaustedError
from mdcf.schemas import RunConfig, parse_family

LOGGER = get_logger(__name__)

FAMILIES = ("pure-power", "trinomial", "shifted-cubic", "jp-example")
FAMILY_PARAMETERS = {
    "pure-power": ("l", "m"),
    "trinomial": ("m",),
    "shifted-cubic": ("a", "b"),
    "jp-example": ("k", "l"),
}
VALUE_FLAGS = ("--l", "--m", "--a", "--b", "--k", "--minpoly", "--window", "--state")
DEFAULT_AUTO_M = "3..6"
_NEGATIVE_VALUE = re.compile(r"^-\d")


def parse_range(text: str) -> list[int]:
    """``"7"``, ``"3..12"`` (inclusive) or ``"1,4,9"``."""

    values: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = (int(v) for v in part.split("..", 1))
            if lo > hi:
                raise ValueError(f"empty range {part!r}")
            values.extend(range(lo, hi + 1))
        else:
            values.append(int(part))
    if not values:
        raise ValueError(f"empty range {text!r}")
    return values


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    """Glue ``--a -2..2`` into ``--a=-2..2`` so argparse does not read a flag."""

    joined: list[str] = []
    skip = False
    for index, token in enumerate(argv):
        if skip:
            skip = False
            continue
        following = argv[index + 1] if index + 1 < len(argv) else None
        if token in VALUE_FLAGS and following is not None and _NEGATIVE_VALUE.match(following):
            joined.append(f"{token}={following}")
            skip = True
        else:
            joined.append(token)
    return joined


def _add_common(parser: argparse.ArgumentParser, *, oracle_default: bool) -> None:
    settings = get_settings()
    parser.add_argument("--format", dest="output_format", choices=("json", "csv", "table"), default="json")
    parser.add_argument("--max-steps", type=int, default=settings.default_max_steps, help="Step budget per expansion")
    parser.add_argument("--fixtures-dir", type=Path, default=None, help="Directory holding <table>.v1.csv fixtures")
    parser.add_argument("--log-level", default=settings.log_level, help="Logging level (DEBUG, INFO, ...)")
    parser.add_argument(
        "--oracle",
        action=argparse.BooleanOptionalAction,
        default=oracle_default,
        help="Cross-check digits with the interval oracle",
    )
    parser.add_argument("--oracle-steps", type=int, default=None, help="Digit rows compared with the oracle")


def _add_family(parser: argparse.ArgumentParser, *, ranges: bool) -> None:
    kind = str if ranges else int
    parser.add_argument("--family", choices=FAMILIES)
    for name in ("l", "m", "a", "b", "k"):
        parser.add_argument(f"--{name}", type=kind, default=None)
    parser.add_argument(
        "--strategy",
        choices=[s.value for s in Strategy if s is not Strategy.CLASSICAL_JP],
        default=None,
        help="Pivot rule (default depends on the family)",
    )


class _Parser(argparse.ArgumentParser):
    """Usage errors exit 1; exit 2 means an exhausted step budget."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(int(ExitCode.INPUT_ERROR), f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mdcf", description="Exact multidimensional continued fractions", allow_abbrev=False)
    commands = parser.add_subparsers(dest="command", required=True)

    expand = commands.add_parser("expand", help="Expand one family instance or a raw state", allow_abbrev=False)
    _add_family(expand, ranges=False)
    expand.add_argument("--minpoly", help="Monic minimal polynomial, highest degree first: 1,0,-3,1")
    expand.add_argument("--window", help="Isolating window lo,hi")
    expand.add_argument("--state", action="append", help="Power-basis coordinates of one component, lowest first")
    _add_common(expand, oracle_default=False)

    verify = commands.add_parser("verify", help="Verify family instances over parameter ranges", allow_abbrev=False)
    _add_family(verify, ranges=True)
    verify.add_argument("--jobs", type=int, default=1, help="Worker processes")
    _add_common(verify, oracle_default=True)

    jp = commands.add_parser("jp", help="Classical Jacobi-Perron digits of (1/alpha, alpha - k)", allow_abbrev=False)
    jp.add_argument("--k", type=int, required=True)
    jp.add_argument("--l", type=int, required=True)
    jp.add_argument("--steps", type=int, default=50)
    jp.add_argument("--format", dest="output_format", choices=("json", "csv", "table"), default="json")
    jp.add_argument("--log-level", default=get_settings().log_level)
    return parser


def _family_grid(args: argparse.Namespace) -> list[dict]:
    if args.family is None:
        raise ValueError("--family is required")
    names = FAMILY_PARAMETERS[args.family]
    if args.family == "shifted-cubic" and args.b == "auto":
        if args.a is None:
            raise ValueError("--b auto needs --a")
        m_values = parse_range(args.m or DEFAULT_AUTO_M)
        return [
            {"kind": "shifted-cubic", "a": a, "b": 3 * a * a - m}
            for a in parse_range(args.a)
            for m in m_values
        ]
    axes = []
    for name in names:
        raw = getattr(args, name)
        if raw is None:
            raise ValueError(f"--{name} is required for {args.family}")
        axes.append(parse_range(raw) if isinstance(raw, str) else [raw])
    return [dict(zip(names, combo), kind=args.family) for combo in itertools.product(*axes)]


def build_config(args: argparse.Namespace) -> RunConfig:
    """Turn parsed arguments into a validated ``RunConfig`` (raises on bad input)."""

    data: dict = {"command": args.command, "output_format": args.output_format}
    if args.command == "jp":
        data["families"] = [parse_family({"kind": "jp-example", "k": args.k, "l": args.l})]
        data["steps"] = args.steps
        data["oracle"] = False
        return RunConfig(**data)

    data.update(
        max_steps=args.max_steps,
        oracle=args.oracle,
        oracle_steps=args.oracle_steps,
        fixtures_dir=args.fixtures_dir,
        strategy=args.strategy,
    )
    if args.command == "expand" and args.minpoly is not None:
        if args.family is not None:
            raise ValueError("give either --family or --minpoly, not both")
        if args.window is None or not args.state:
            raise ValueError("--minpoly needs --window and at least one --state")
        data["raw"] = {
            "minpoly": args.minpoly.split(","),
            "window": tuple(args.window.split(",")),
            "state": [component.split(",") for component in args.state],
        }
    else:
        data["families"] = [parse_family(item) for item in _family_grid(args)]
    if args.command == "verify":
        data["jobs"] = args.jobs
    return RunConfig(**data)


HANDLERS = {"expand": cmd_expand, "verify": cmd_verify, "jp": cmd_jp}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """CLI entrypoint; returns the process exit code."""

    parser = build_parser()
    args = parser.parse_args(_join_negative_values(list(sys.argv[1:] if argv is None else argv)))
    configure_logging(args.log_level)

    try:
        config = build_config(args)
    except (ValidationError, ValueError) as exc:
        LOGGER.error("invalid input: %s", exc)
        print(f"mdcf: invalid input: {exc}", file=sys.stderr)
        return int(ExitCode.INPUT_ERROR)

    try:
        return int(HANDLERS[config.command](config, sys.stdout))
    except (ValueError, LookupError, ZeroDivisionError, PrecisionExhaustedError) as exc:
        LOGGER.error("%s failed: %s", config.command, exc)
        print(f"mdcf: {exc}", file=sys.stderr)
        return int(ExitCode.INPUT_ERROR)


if __name__ == "__main__":
    sys.exit(main())
