"""Report emission: summary.json, report.md and plots/<experiment>.csv.

Output depends only on the inputs (no timestamps, sorted keys, fixed float
formatting), so re-running on the same results is byte-identical.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

from rlsuite import sweep
from rlsuite.analysis import CapabilitySummary, ExperimentScore

RUN_METADATA = "rlsuite_run.json"

PLOT_COLUMNS = {
    "regret": ("agent", "bsuite_id", "parameter", "value", "episodes", "mean_regret", "random_regret", "score"),
    "deep_sea": ("agent", "bsuite_id", "parameter", "value", "episodes", "episodes_to_threshold", "limit", "passed"),
    "memory": ("agent", "bsuite_id", "parameter", "value", "episodes", "mean_regret", "threshold", "passed"),
    "swingup": ("agent", "bsuite_id", "parameter", "value", "episodes", "mean_return", "passed"),
}


@dataclass
class AgentReport:
    """Everything reported about one agent's results directory."""

    label: str
    scores: list[ExperimentScore]
    summary: CapabilitySummary
    metadata: dict[str, Any] = field(default_factory=dict)


def read_run_metadata(results_dir: str | os.PathLike) -> dict[str, Any]:
    path = Path(results_dir) / RUN_METADATA
    if not path.exists():
        return {}
    return json.loads(path.read_text())


def write_run_metadata(results_dir: str | os.PathLike, metadata: dict[str, Any]) -> None:
    path = Path(results_dir) / RUN_METADATA
    path.write_text(json.dumps(metadata, sort_keys=True, indent=2) + "\n")


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def _round(x):
    return round(x, 12) if isinstance(x, float) else x


def _budget_scale(scores: list[ExperimentScore], metadata: dict) -> float | None:
    if "budget_scale" in metadata:
        return float(metadata["budget_scale"])
    ratios = []
    for s in scores:
        for d in s.diagnostics:
            ratios.append(d["episodes"] / sweep.env_config(d["bsuite_id"]).episode_budget)
    return round(max(ratios), 6) if ratios else None


def _summary_json(reports: Sequence[AgentReport]) -> str:
    agents = []
    for r in reports:
        agents.append({
            "label": r.label,
            "metadata": r.metadata,
            "budget_scale": _budget_scale(r.scores, r.metadata),
            "capabilities": {c: _round(v) for c, v in r.summary.values.items()},
            "missing_capabilities": r.summary.missing,
            "experiments": {
                s.experiment: {
                    "score": _round(s.score),
                    "tags": sorted(s.tags),
                    "settings_present": s.settings_present,
                    "settings_total": s.settings_total,
                    "completeness": _round(s.completeness),
                } for s in r.scores
            },
            "completeness": _round(
                sum(s.settings_present for s in r.scores)
                / sum(e.num_settings for e in sweep.EXPERIMENTS.values())),
        })
    return json.dumps({"agents": agents}, sort_keys=True, indent=2) + "\n"


def _markdown(reports: Sequence[AgentReport]) -> str:
    labels = [r.label for r in reports]
    lines = ["# Behaviour report", ""]
    for r in reports:
        scale = _budget_scale(r.scores, r.metadata)
        meta = ", ".join(f"{k}={r.metadata[k]}" for k in sorted(r.metadata) if k != "budget_scale")
        lines.append(f"- **{r.label}**: budget_scale={_fmt(scale)}" + (f"; {meta}" if meta else ""))
    lines += ["", "## Capabilities", ""]
    lines.append("| capability | " + " | ".join(labels) + " |")
    lines.append("|---|" + "---|" * len(labels))
    for c in sweep.CAPABILITIES:
        cells = [_fmt(r.summary.values[c]) if c in r.summary.values else "n/a" for r in reports]
        lines.append(f"| {c} | " + " | ".join(cells) + " |")

    lines += ["", "## Experiments", ""]
    lines.append("| experiment | " + " | ".join(labels) + " | settings |")
    lines.append("|---|" + "---|" * (len(labels) + 1))
    for name, exp in sweep.EXPERIMENTS.items():
        by_label = [{s.experiment: s for s in r.scores}.get(name) for r in reports]
        if all(s is None for s in by_label):
            continue
        cells = [_fmt(s.score) + ("" if s.complete else " *") if s else "n/a" for s in by_label]
        present = "/".join(str(s.settings_present if s else 0) for s in by_label)
        lines.append(f"| {name} | " + " | ".join(cells) + f" | {present} of {exp.num_settings} |")
    lines += ["", "`*` marks an incomplete experiment scored on the settings present.", ""]

    lines += ["## Plot data", "",
              "One file per experiment in `plots/`, one row per agent and setting.", ""]
    for rule, cols in PLOT_COLUMNS.items():
        lines.append(f"- `{rule}` rule: " + ", ".join(f"`{c}`" for c in cols))
    lines += ["",
              "`value` is the swept quantity named in `parameter` (deep sea size, memory length, ...).",
              "`episodes_to_threshold` is the first episode whose trailing 100-episode mean regret is "
              "below 0.9 x random; `limit` is min(budget, 2^size).", ""]
    return "\n".join(lines)


def _plot_rows(reports: Sequence[AgentReport]) -> dict[str, str]:
    files: dict[str, list[str]] = {}
    for r in reports:
        for s in r.scores:
            cols = PLOT_COLUMNS[sweep.EXPERIMENTS[s.experiment].score_rule]
            rows = files.setdefault(s.experiment, [",".join(cols)])
            for d in s.diagnostics:
                rows.append(",".join(_fmt(r.label if c == "agent" else d.get(c)) for c in cols))
    return {name: "\n".join(rows) + "\n" for name, rows in files.items()}


def write_report(scores: list[ExperimentScore] | Sequence[AgentReport], summary: CapabilitySummary | None = None,
                 out_dir: str | os.PathLike = "report", metadata: dict | None = None) -> list[Path]:
    """Write the report for one agent (``scores`` + ``summary``) or for a
    sequence of ``AgentReport`` (side-by-side tables). Returns written paths."""
    if summary is not None:
        reports = [AgentReport((metadata or {}).get("agent", "agent"), list(scores), summary, dict(metadata or {}))]
    else:
        reports = list(scores)
    if not reports:
        raise ValueError("nothing to report")
    out = Path(out_dir)
    plots = out / "plots"
    plots.mkdir(parents=True, exist_ok=True)
    written = []
    for path, text in [(out / "summary.json", _summary_json(reports)), (out / "report.md", _markdown(reports))]:
        path.write_text(text)
        written.append(path)
    for name, text in sorted(_plot_rows(reports).items()):
        path = plots / f"{name}.csv"
        path.write_text(text)
        written.append(path)
    return written
