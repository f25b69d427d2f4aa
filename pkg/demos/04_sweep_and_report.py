"""A desk-scale sweep over a few experiments and the side-by-side report.

The same thing from the shell:

    python3 -m rlsuite run --agent random --results-dir out/random --sweep catch --budget-scale 0.01
    python3 -m rlsuite report --results-dir out/random --compare out/dqn --out out/report

Run with: python3 demos/04_sweep_and_report.py [out_dir]
"""

import sys
from pathlib import Path

from rlsuite import analysis, report, sweep
from rlsuite.results import load_results
from rlsuite.runner import AgentFactory, run_sweep, summarize

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
ids = sweep.sweep_ids("bandit") + sweep.sweep_ids("umbrella_length")[:8] + sweep.sweep_ids("discounting_chain")

reports = []
for name in ("random", "dqn"):
    factory = AgentFactory(name, seed=0)
    results_dir = out / name
    summaries = run_sweep(factory, ids, results_dir, budget_scale=0.02, overwrite=True)
    print(name, {k: v for k, v in summarize(summaries).items()
                 if k in ("runs", "failed", "episodes")})
    scores = analysis.experiment_scores(load_results(results_dir))
    reports.append(report.AgentReport(name, scores, analysis.capability_summary(scores),
                                      {**factory.describe(), "budget_scale": 0.02}))

for path in report.write_report(reports, out_dir=out / "report"):
    print("wrote", path)
print((out / "report" / "report.md").read_text())
