"""Command-line entry point: ``python3 -m rlsuite {run,report,list-sweep}``.

Exit codes: 0 success, 1 usage error, 2 partial sweep failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from rlsuite import analysis, report, results, runner, sweep
from rlsuite.agents import AGENT_NAMES
from rlsuite.optim import KINDS

EXIT_OK, EXIT_USAGE, EXIT_PARTIAL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="rlsuite", description="Behavioural evaluation suite for RL agents.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="train an agent on one id or a sweep")
    run.add_argument("--agent", required=True, choices=AGENT_NAMES)
    run.add_argument("--results-dir", required=True, type=Path)
    which = run.add_mutually_exclusive_group(required=True)
    which.add_argument("--bsuite-id")
    which.add_argument("--sweep", metavar="EXPERIMENT|all")
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--budget-scale", type=float, default=1.0)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--overwrite", action="store_true")
    run.add_argument("--optimizer", choices=KINDS)
    run.add_argument("--ensemble-size", type=int)
    run.add_argument("--mnist-dir", type=Path)

    rep = sub.add_parser("report", help="score results and write the report")
    rep.add_argument("--results-dir", required=True, type=Path)
    rep.add_argument("--compare", nargs="+", type=Path, default=[])
    rep.add_argument("--out", required=True, type=Path)

    ls = sub.add_parser("list-sweep", help="print bsuite ids")
    ls.add_argument("--experiment")
    return parser


def _ids_for(args) -> list[str]:
    if args.bsuite_id is not None:
        try:
            return [sweep.env_config(args.bsuite_id).bsuite_id]
        except (KeyError, ValueError) as exc:
            raise UsageError(str(exc)) from exc
    if args.sweep == "all":
        return sweep.sweep_ids()
    if args.sweep not in sweep.EXPERIMENTS:
        raise UsageError(f"unknown experiment {args.sweep!r}; expected 'all' or one of {sorted(sweep.EXPERIMENTS)}")
    return sweep.sweep_ids(args.sweep)


def cmd_run(args) -> int:
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    if not 0.0 < args.budget_scale <= 1.0:
        raise UsageError("--budget-scale must lie in (0, 1]")
    if args.ensemble_size is not None and args.agent != "boot_dqn":
        raise UsageError("--ensemble-size only applies to boot_dqn")
    if args.optimizer is not None and args.agent == "random":
        raise UsageError("--optimizer does not apply to the random agent")
    ids = _ids_for(args)
    factory = runner.AgentFactory(args.agent, args.seed, args.optimizer, args.ensemble_size)
    try:
        summaries = runner.run_sweep(factory, ids, args.results_dir, workers=args.workers,
                                     budget_scale=args.budget_scale, overwrite=args.overwrite,
                                     mnist_dir=args.mnist_dir)
    except OSError as exc:  # results dir missing or unwritable
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report.write_run_metadata(args.results_dir, {**factory.describe(), "budget_scale": args.budget_scale})
    for s in summaries:
        status = "ok" if s.ok else f"FAILED {s.error}"
        print(f"{s.bsuite_id}\t{s.episodes} episodes\t{s.wall_time:.1f}s\tmean_regret={s.mean_regret:.4g}\t{status}")
    total = runner.summarize(summaries)
    print(f"{total['runs'] - total['failed']}/{total['runs']} ids completed")
    return EXIT_PARTIAL if total["failed"] else EXIT_OK


def _agent_report(results_dir: Path) -> report.AgentReport:
    if not results_dir.is_dir():
        raise UsageError(f"results directory {results_dir} does not exist")
    table = results.load_results(results_dir)
    scores = analysis.experiment_scores(table)
    if not scores:
        raise UsageError(f"no results found in {results_dir}")
    metadata = report.read_run_metadata(results_dir)
    label = metadata.get("agent", results_dir.name)
    return report.AgentReport(str(label), scores, analysis.capability_summary(scores), metadata)


def cmd_report(args) -> int:
    reports = [_agent_report(d) for d in [args.results_dir, *args.compare]]
    seen: dict[str, int] = {}
    for r in reports:  # keep labels distinct for side-by-side tables
        seen[r.label] = seen.get(r.label, 0) + 1
        if seen[r.label] > 1:
            r.label = f"{r.label}#{seen[r.label]}"
    for path in report.write_report(reports, out_dir=args.out):
        print(path)
    return EXIT_OK


def cmd_list_sweep(args) -> int:
    if args.experiment is not None and args.experiment not in sweep.EXPERIMENTS:
        raise UsageError(f"unknown experiment {args.experiment!r}; expected one of {sorted(sweep.EXPERIMENTS)}")
    for bid in sweep.sweep_ids(args.experiment):
        print(bid)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help or a usage error; return rather than exit
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    command = {"run": cmd_run, "report": cmd_report, "list-sweep": cmd_list_sweep}[args.command]
    try:
        return command(args)
    except UsageError as exc:
        print(f"rlsuite: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
