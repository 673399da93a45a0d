from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor, as_completed
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Sequence

from rich.console import Console
from rich.logging import RichHandler
from rich.progress import BarColumn, Progress, SpinnerColumn, TaskProgressColumn, TextColumn
from rich.rule import Rule
from rich.table import Table

from kreincalc.config import Config, load_config
from kreincalc.errors import EXIT_USAGE, ConfigError, KreinCalcError
from kreincalc.io.corpus import corpus_names, generate, reference_corpus
from kreincalc.io.problem import load_functions, load_problem, save_problem
from kreincalc.io.report import ProblemReport, analyze, calc, matrix_preview, rollup, verify
from kreincalc.output.base import IndexEntry, ReportWriter
from kreincalc.output.json import JsonReportWriter
from kreincalc.output.markdown import MarkdownReportWriter

WRITER_MAP: dict[str, type[ReportWriter]] = {
    "json": JsonReportWriter,
    "md": MarkdownReportWriter,
}

console = Console()


class _Parser(argparse.ArgumentParser):
    """argparse with the project's usage exit code."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        console.print(f"[red]error:[/red] {message}")
        sys.exit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kreincalc", description="Functional calculus for definitizable normal operators")
    parser.add_argument("--config", type=Path, default=Path("config.toml"), help="config file (default: config.toml)")
    parser.add_argument("--tol", action="append", default=[], metavar="KEY=VALUE", help="override one tolerance")
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="embedding, ideal and spectral data of problem files")
    p.add_argument("problems", type=Path, nargs="+")
    p.add_argument("--report", type=Path, help="report file (single problem) or directory")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("calc", help="evaluate functions of N")
    p.add_argument("problem", type=Path)
    p.add_argument("functions", type=Path, nargs="?", help="JSON list of functions (default: the problem's own)")
    p.add_argument("--report", type=Path)

    p = sub.add_parser("verify", help="run every identity of the calculus")
    p.add_argument("problems", type=Path, nargs="+")
    p.add_argument("--report", type=Path)
    p.add_argument("--seed", type=int)
    p.add_argument("--samples", type=int)

    p = sub.add_parser("generate", help="write a reference problem")
    p.add_argument("name", choices=[*corpus_names(), "all"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dim", type=int, default=6)
    p.add_argument("--output", "-o", type=Path, help="file (or directory for 'all'); default: stdout")
    return parser


def _parse_tolerances(items: Sequence[str]) -> dict[str, Any]:
    overrides: dict[str, Any] = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"--tol expects KEY=VALUE, got {item!r}")
        try:
            overrides[key.strip()] = int(value) if key.strip() == "max_denominator" else float(value)
        except ValueError:
            raise ConfigError(f"--tol {key}: {value!r} is not a number") from None
    return overrides


def _configure_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=console, show_path=False)],
        force=True,
    )


def main(argv: Sequence[str] | None = None) -> None:
    sys.exit(run(argv))


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)

    try:
        config = load_config(args.config, tolerance_overrides=_parse_tolerances(args.tol))
    except KreinCalcError as e:
        console.print(f"[red]✗ configuration:[/red] {e}")
        return e.exit_code

    if args.command == "generate":
        return _cmd_generate(args)

    if args.command == "calc":
        paths = [args.problem]
        label = "calc"
    else:
        paths = list(args.problems)
        label = args.command
    console.print(Rule(f"[bold]kreincalc {label}[/bold] — {len(paths)} problem(s)"))

    reports = _run_batch(
        args.command,
        paths,
        config,
        seed=args.seed if getattr(args, "seed", None) is not None else config.seed,
        samples=args.samples if getattr(args, "samples", None) is not None else config.samples,
        functions_path=getattr(args, "functions", None),
    )
    for report in reports:
        _print_report(report)
    _write_reports(reports, config, getattr(args, "report", None))

    code = rollup(reports)
    console.print(Rule("[green]done[/green]" if code == 0 else f"[red]exit {code}[/red]"))
    return code


def _run_problem(
    command: str,
    path: Path,
    config: Config,
    *,
    seed: int,
    samples: int,
    functions_path: Path | None = None,
) -> ProblemReport:
    """Run one command on one problem file; errors become failed reports."""
    try:
        spec = load_problem(path)
        if command == "analyze":
            return analyze(spec, config.tolerances, seed=seed)
        if command == "verify":
            return verify(spec, config.tolerances, samples=samples, seed=seed)
        functions = load_functions(functions_path) if functions_path else None
        return calc(spec, functions, config.tolerances)
    except KreinCalcError as e:
        return ProblemReport.failed(path.stem, command, e)


def _run_batch(
    command: str,
    paths: list[Path],
    config: Config,
    *,
    seed: int,
    samples: int,
    functions_path: Path | None = None,
) -> list[ProblemReport]:
    """Process problems in parallel and return the reports in input order."""
    indexed: dict[int, ProblemReport] = {}
    with Progress(
        SpinnerColumn(),
        TextColumn("[bold]{task.description}"),
        BarColumn(),
        TaskProgressColumn(),
        TextColumn("[dim]{task.fields[name]}"),
        console=console,
        transient=True,
    ) as progress:
        task = progress.add_task(command, total=len(paths), name="")
        with ThreadPoolExecutor(max_workers=config.max_workers) as pool:
            futures = {
                pool.submit(
                    _run_problem, command, path, config,
                    seed=seed, samples=samples, functions_path=functions_path,
                ): i
                for i, path in enumerate(paths)
            }
            for future in as_completed(futures):
                i = futures[future]
                indexed[i] = future.result()
                progress.update(task, name=paths[i].name)
                progress.advance(task)
    return [indexed[i] for i in range(len(paths))]


# ------------------------------------------------------------------
# Output
# ------------------------------------------------------------------


def _print_report(report: ProblemReport) -> None:
    if report.error is not None:
        console.print(f"  [red]✗ {report.name}:[/red] {report.error_type}: {report.error}")
        return
    mark = "[green]✓[/green]" if report.passed else "[red]✗[/red]"
    console.print(f"  {mark} {report.name}: {report.check_count} checks, {report.failure_count} failed")
    failing = [(suite.title, name, row) for suite in report.checks for name, row in suite.summary().items() if not row["passed"]]
    if failing:
        table = Table(show_header=True, header_style="bold")
        table.add_column("suite")
        table.add_column("check")
        table.add_column("residual", justify="right")
        table.add_column("tolerance", justify="right")
        for title, name, row in failing:
            table.add_row(title, name, f"{row['residual']:.3e}", f"{row['tolerance']:.3e}")
        console.print(table)
    for label, matrix in report.outputs.items():
        console.print(f"    [bold]{label}[/bold]")
        console.print(matrix_preview(matrix), highlight=False)


def _write_reports(reports: list[ProblemReport], config: Config, report_path: Path | None) -> None:
    generated_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
    if report_path is not None and report_path.suffix == ".json" and len(reports) == 1:
        report_path.parent.mkdir(parents=True, exist_ok=True)
        JsonReportWriter(config).write_problem(reports[0], report_path, generated_at)
        console.print(f"  [dim]report[/dim] {report_path}")
        return

    out_dir = report_path or config.report_dir
    writers: list[ReportWriter] = []
    for fmt in config.output_formats:
        writer_cls = WRITER_MAP.get(fmt)
        if writer_cls is None:
            console.print(f"  [yellow]warn[/yellow] unknown format: {fmt}")
            continue
        w = writer_cls(config)
        w.setup()
        writers.append(w)

    for w in writers:
        entries: list[IndexEntry] = [w.write_report(r, out_dir / w.name, generated_at) for r in reports]
        w.write_index(out_dir / w.name, entries, generated_at)
        w.teardown()
    if writers:
        console.print(f"  [dim]reports[/dim] {out_dir}")


def _cmd_generate(args: argparse.Namespace) -> int:
    try:
        if args.name == "all":
            out_dir = args.output or Path("corpus")
            specs = reference_corpus(dim=args.dim)
            for spec in specs:
                save_problem(spec, out_dir / f"{spec.name}.json")
            console.print(f"  [green]✓[/green] {len(specs)} problems in {out_dir}")
            return 0
        spec = generate(args.name, seed=args.seed, dim=args.dim)
    except KreinCalcError as e:
        console.print(f"  [red]✗ generate {args.name}:[/red] {e}")
        return e.exit_code

    if args.output is None:
        sys.stdout.write(spec.dumps())
    else:
        save_problem(spec, args.output)
        console.print(f"  [green]✓[/green] {spec.name} → {args.output}")
    return 0


if __name__ == "__main__":
    main()
