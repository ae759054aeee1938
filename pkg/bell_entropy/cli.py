"""Command-line interface: analyze, curves, verify, thresholds.

Exit codes: 0 success, 1 verification violations, 2 usage or malformed
input, 3 invalid state.
"""

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from dotenv import load_dotenv

from bell_entropy import __version__
from bell_entropy.bell import load_settings
from bell_entropy.config import DEFAULT_RESTARTS, MEMBERSHIP_TOL, debug, default_seed, default_threads, log
from bell_entropy.errors import (
    ConfigError,
    DomainError,
    InvalidSettingsError,
    InvalidStateError,
    MalformedInputError,
)
from bell_entropy.regions import RegionId
from bell_entropy.states import load_density
from bell_entropy.tools import analyze_state, boundary_curve_table, gibbs_curve_table, run_verification, thresholds
from bell_entropy.verify import SUITES

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_INVALID_STATE = 3


@dataclass(frozen=True)
class CliConfig:
    command: str
    input_path: Path | None = None
    settings_path: Path | None = None
    output_path: Path | None = None
    seed: int = 0
    samples: int = 1000
    grid_n: int = 50
    threads: int = 1
    restarts: int = DEFAULT_RESTARTS
    membership_tol: float = MEMBERSHIP_TOL
    suite: str = "all"
    region: str | None = None
    points: int = 101
    gibbs_xi1: float | None = None
    lambda_max: float = 10.0

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "CliConfig":
        def path(name: str) -> Path | None:
            value = getattr(args, name, None)
            return Path(value) if value else None

        fields = {
            key: getattr(args, key)
            for key in (
                "seed", "samples", "threads", "restarts", "membership_tol",
                "suite", "region", "points", "gibbs_xi1", "lambda_max",
            )
            if getattr(args, key, None) is not None
        }
        if getattr(args, "grid", None) is not None:
            fields["grid_n"] = args.grid
        return cls(
            command=args.command,
            input_path=path("state"),
            settings_path=path("settings"),
            output_path=path("out"),
            **fields,
        )


def _positive_int(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected an integer >= 1, got {value}")
    return n


def _non_negative_int(value: str) -> int:
    n = int(value)
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected an integer >= 0, got {value}")
    return n


def build_parser() -> argparse.ArgumentParser:
    """Parser with defaults resolved as CLI flag > environment > built-in."""
    parser = argparse.ArgumentParser(
        prog="bell_entropy",
        description="CHSH parameter vs entropy compatibility regions for two-qubit states",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    seed_help = "Master seed (CLI > env:BEA_SEED > 0)"

    analyze = sub.add_parser("analyze", help="Entropies, beta and region verdicts for one state")
    analyze.add_argument("--state", required=True, help="State JSON file")
    analyze.add_argument("--settings", help="Settings JSON file; beta is maximized when omitted")
    analyze.add_argument("--restarts", type=_positive_int, default=DEFAULT_RESTARTS, help="Maximization restarts")
    analyze.add_argument("--seed", type=int, default=default_seed(), help=seed_help)
    analyze.add_argument("--membership-tol", type=float, default=MEMBERSHIP_TOL, help="Region membership slack")
    analyze.add_argument("--out", help="Also write the JSON result here")

    curves = sub.add_parser("curves", help="Emit boundary or Gibbs curves as CSV")
    target = curves.add_mutually_exclusive_group(required=True)
    target.add_argument("--region", choices=[r.value for r in RegionId], help="Region whose upper boundary to emit")
    target.add_argument("--gibbs-xi1", type=float, help="Emit the Gibbs curve of the operator with this xi1")
    curves.add_argument("--points", type=int, default=101, help="Grid points (>= 2)")
    curves.add_argument("--lambda-max", type=float, default=10.0, help="Gibbs curve lambda range [-L, L]")
    curves.add_argument("--out", help="CSV output file (stdout when omitted)")

    verify = sub.add_parser("verify", help="Run verification suites")
    verify.add_argument("--suite", choices=[*SUITES, "all"], default="all", help="Suite to run")
    verify.add_argument("--samples", type=_non_negative_int, default=1000, help="Samples per suite")
    verify.add_argument("--seed", type=int, default=default_seed(), help=seed_help)
    verify.add_argument("--threads", type=_positive_int, default=default_threads(),
                        help="Worker threads (CLI > env:BEA_THREADS > 1)")
    verify.add_argument("--grid", type=_positive_int, default=50, help="Attainability grid size per axis")
    verify.add_argument("--restarts", type=_positive_int, default=DEFAULT_RESTARTS, help="Maximization restarts")
    verify.add_argument("--membership-tol", type=float, default=MEMBERSHIP_TOL, help="Region membership slack")
    verify.add_argument("--out", help="Also write the JSON report here")

    th = sub.add_parser("thresholds", help="Print the threshold constants")
    th.add_argument("--out", help="Also write the JSON result here")
    return parser


def _emit(text: str, out: Path | None) -> None:
    if out is not None:
        out.write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    sys.stdout.flush()


def _emit_json(payload: dict, out: Path | None) -> None:
    _emit(json.dumps(payload, indent=2) + "\n", out)


def format_csv(columns: Sequence[str], rows: Sequence[Sequence[float]]) -> str:
    """CSV with 17 significant digits per number."""
    lines = [",".join(columns)]
    lines += [",".join(format(float(x), ".17g") for x in row) for row in rows]
    return "\n".join(lines) + "\n"


def cmd_analyze(config: CliConfig) -> int:
    state = load_density(config.input_path)
    settings = load_settings(config.settings_path) if config.settings_path else None
    result = analyze_state(
        state,
        settings,
        restarts=config.restarts,
        seed=config.seed,
        membership_tol=config.membership_tol,
    )
    _emit_json(result, config.output_path)
    return EXIT_OK


def cmd_curves(config: CliConfig) -> int:
    if config.points < 2:
        raise DomainError(f"--points must be >= 2, got {config.points}")
    if config.gibbs_xi1 is not None:
        table = gibbs_curve_table(config.gibbs_xi1, config.points, config.lambda_max)
    else:
        table = boundary_curve_table(config.region, config.points)
    _emit(format_csv(table["columns"], table["rows"]), config.output_path)
    return EXIT_OK


def cmd_verify(config: CliConfig) -> int:
    debug("cli", f"verify suite={config.suite} samples={config.samples} seed={config.seed} threads={config.threads}")
    result = run_verification(
        config.suite,
        config.samples,
        seed=config.seed,
        grid=config.grid_n,
        threads=config.threads,
        membership_tol=config.membership_tol,
        restarts=config.restarts,
    )
    _emit_json(result, config.output_path)
    return EXIT_OK if result["passed"] else EXIT_VIOLATIONS


def cmd_thresholds(config: CliConfig) -> int:
    _emit_json(thresholds(), config.output_path)
    return EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "curves": cmd_curves,
    "verify": cmd_verify,
    "thresholds": cmd_thresholds,
}


def main(argv: Sequence[str] | None = None) -> int:
    load_dotenv()
    try:
        parser = build_parser()
    except ConfigError as exc:
        log("cli", f"Error: {exc}")
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    config = CliConfig.from_args(args)
    try:
        return COMMANDS[config.command](config)
    except InvalidStateError as exc:
        log("cli", f"Invalid state: {exc}")
        return EXIT_INVALID_STATE
    except (MalformedInputError, InvalidSettingsError, DomainError) as exc:
        log("cli", f"Error: {exc}")
        return EXIT_USAGE
    except OSError as exc:
        log("cli", f"Cannot write output: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
