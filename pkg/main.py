"""
Main entry point for the monogenic Bloch toolkit
"""

import sys
import logging
import argparse
from typing import List, Optional

from rich.console import Console
from rich.table import Table

from config import CONFIG, TOOL_VERSION, ConfigError
from cli_reports import COMMAND_HANDLERS, RunConfig, RunReport, cmd_basis_emit, write_report
from bloch_analysis import DomainViolationError
from fourier_expansion import FunctionSpecError, NotMonogenicError
from harmonic_basis import InvalidIndexError
from monogenic_basis import PreconditionError

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_INPUT = 0, 1, 2

console = Console(stderr=True)


def print_summary(report: RunReport) -> None:
    """Render one row per check"""
    table = Table(title=f"\n{report.config.command} results", show_header=True, header_style="bold magenta")
    table.add_column("Check", style="cyan")
    table.add_column("Status")
    table.add_column("Worst slack", justify="right")
    for result in report.results:
        if result.informational:
            status = "[yellow]info[/yellow]" if not result.passed else "[green]info ✓[/green]"
        else:
            status = "[green]pass[/green]" if result.passed else "[red]FAIL[/red]"
        slack = "" if result.worst_slack is None else f"{result.worst_slack:.3e}"
        table.add_row(result.check, status, slack)
    console.print(table)
    if report.passed:
        console.print("[green]✓ All assertable checks passed[/green]")
    else:
        console.print(f"[red]✗ Failed: {', '.join(report.failed_checks())}[/red]")


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments"""
    parser = argparse.ArgumentParser(description="Solid spherical monogenics, Fourier expansions and Bloch constants")
    parser.add_argument("--version", action="version", version=TOOL_VERSION)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--degree-max", type=int, default=CONFIG["degree_max"], help="Highest basis degree")
    common.add_argument("--radius", default=str(CONFIG["radius"]), help="Ball radius (decimal or fraction)")
    common.add_argument("--seed", type=int, default=CONFIG["seed"], help="Seed for random sweeps")
    common.add_argument("--out", help="Report file (basis: output directory)")
    common.add_argument("--fn", dest="fn_spec", help="Function-spec JSON file")
    common.add_argument("--sphere-points", type=int, default=CONFIG["sphere_points"])
    common.add_argument("--pointwise-samples", type=int, default=CONFIG["pointwise_samples"])
    common.add_argument("--lemma-functions", type=int, default=CONFIG["lemma_functions"])
    common.add_argument("--lemma-degree", type=int, default=CONFIG["lemma_degree_max"])
    common.add_argument("--lemma-directions", type=int, default=CONFIG["lemma_directions"])
    common.add_argument("--fourier-functions", type=int, default=CONFIG["fourier_functions"])
    common.add_argument("--probe-functions", type=int, default=CONFIG["probe_functions"])
    common.add_argument("--probe-boundary-samples", type=int, default=CONFIG["probe_boundary_samples"])
    common.add_argument("--include-timing", action="store_true", help="Add wall-clock time to the report")
    common.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        default="INFO",
        help="Set the logging level"
    )

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("basis", parents=[common], help="Write basis element dumps")
    sub.add_parser("verify", parents=[common], help="Run every assertable verification suite")
    sub.add_parser("bloch", parents=[common], help="Constants report and image-ball probes")
    sub.add_parser("expand", parents=[common], help="Fourier expansion of a function spec")
    sub.add_parser("probe", parents=[common], help="Image-ball probes only")
    return parser.parse_args(argv)


def build_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        degree_max=args.degree_max,
        radius=args.radius,
        seed=args.seed,
        sphere_points=args.sphere_points,
        pointwise_samples=args.pointwise_samples,
        lemma_functions=args.lemma_functions,
        lemma_degree=args.lemma_degree,
        lemma_directions=args.lemma_directions,
        fourier_functions=args.fourier_functions,
        probe_functions=args.probe_functions,
        probe_boundary_samples=args.probe_boundary_samples,
        out=args.out,
        fn_spec=args.fn_spec,
        include_timing=args.include_timing,
    )


def run(argv: Optional[List[str]] = None) -> int:
    """Run one command and return its exit code"""
    args = parse_arguments(argv)
    logging.getLogger().setLevel(args.log_level)
    try:
        cfg = build_config(args)
        if cfg.command == "basis":
            written = cmd_basis_emit(cfg)
            console.print(f"[green]✓ Wrote {len(written)} basis elements[/green]")
            return EXIT_OK
        report = COMMAND_HANDLERS[cfg.command](cfg)
        if cfg.out:
            write_report(report, cfg.out)
        else:
            sys.stdout.write(report.to_text())
        print_summary(report)
        return report.exit_code
    except (ConfigError, FunctionSpecError, NotMonogenicError, InvalidIndexError, PreconditionError,
            DomainViolationError) as e:
        logger.error(f"Invalid input: {e}")
        console.print(f"[red]✗ {e}[/red]")
        return EXIT_INPUT
    except OSError as e:
        logger.error(f"I/O error: {e}")
        console.print(f"[red]✗ {e}[/red]")
        return EXIT_INPUT


def main() -> None:
    """Main function with command line argument parsing and initialization"""
    try:
        sys.exit(run())
    except KeyboardInterrupt:
        logger.info("Terminated by user")
        sys.exit(EXIT_FAILED)
    except Exception:
        logger.exception("Fatal error in main")
        sys.exit(EXIT_FAILED)


if __name__ == "__main__":
    main()
