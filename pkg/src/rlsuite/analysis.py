"""Scoring: logged episodes -> per-experiment scores in [0, 1] -> the seven
capability values."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from rlsuite import sweep
from rlsuite.results import EpisodeRecord, ResultsTable

logger = logging.getLogger(__name__)

DEEP_SEA_RATIO = 0.9
MEMORY_RATIO = 0.75
MOVING_AVERAGE_WINDOW = 100


@dataclass
class ExperimentScore:
    experiment: str
    score: float
    tags: frozenset[str]
    settings_present: int
    settings_total: int
    diagnostics: list[dict] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return self.settings_present == self.settings_total

    @property
    def completeness(self) -> float:
        return self.settings_present / self.settings_total


@dataclass
class CapabilitySummary:
    values: dict[str, float]
    missing: list[str]
    members: dict[str, list[str]]

    def __getitem__(self, capability: str) -> float:
        return self.values[capability]


def _clamp01(x: float) -> float:
    if math.isnan(x):
        return 0.0
    return min(max(x, 0.0), 1.0)


def _regrets(records: Sequence[EpisodeRecord]) -> np.ndarray:
    return np.fromiter((r.regret for r in records), dtype=float, count=len(records))


def _as_settings(records) -> list[Sequence[EpisodeRecord]]:
    """Accept one setting's records or a collection of per-setting records."""
    if isinstance(records, Mapping):
        return list(records.values())
    records = list(records)
    if records and isinstance(records[0], EpisodeRecord):
        return [records]
    return records


def normalized_regret_score(records, random_regret: float, optimal_regret: float = 0.0) -> float:
    """Linear map of mean per-episode regret: random -> 0, optimal -> 1.

    ``records`` is one setting's episode list or several (e.g. seeds); the
    clamped per-setting scores are averaged.
    """
    if not random_regret > optimal_regret:
        raise ValueError(f"random_regret {random_regret} must exceed optimal_regret {optimal_regret}")
    settings = _as_settings(records)
    if not settings or any(len(s) == 0 for s in settings):
        raise ValueError("normalized_regret_score needs nonempty records")
    scores = [
        _clamp01((random_regret - float(np.mean(_regrets(s)))) / (random_regret - optimal_regret))
        for s in settings
    ]
    return float(np.mean(scores))


def moving_average(values: np.ndarray, window: int = MOVING_AVERAGE_WINDOW) -> np.ndarray:
    """Trailing mean; entry i averages values[max(0, i-window+1) .. i]."""
    csum = np.concatenate([[0.0], np.cumsum(values)])
    idx = np.arange(1, len(values) + 1)
    lo = np.maximum(idx - window, 0)
    return (csum[idx] - csum[lo]) / (idx - lo)


def episodes_to_threshold(regrets: np.ndarray, threshold: float,
                          window: int = MOVING_AVERAGE_WINDOW) -> int | None:
    """First (1-based) episode at which the trailing ``window``-episode mean
    regret drops below ``threshold``; the window must be full unless fewer
    episodes were logged in total."""
    if len(regrets) == 0:
        return None
    ma = moving_average(np.asarray(regrets, dtype=float), window)
    start = min(window, len(regrets)) - 1
    below = np.nonzero(ma[start:] < threshold)[0]
    return int(below[0] + start + 1) if below.size else None


def dithering_limit(bsuite_id: str) -> int:
    """Deep sea: success must come within min(budget, 2^N) episodes."""
    config = sweep.env_config(bsuite_id)
    return min(config.episode_budget, 2 ** config.env_kwargs["size"])


def final_average(bsuite_id: str) -> None:
    """Memory: judge the average regret over the whole logged run."""
    return None


def threshold_fraction_score(per_setting_records: Mapping[str, Sequence[EpisodeRecord]], threshold_ratio: float,
                             budget_rule: Callable[[str], int | None] = final_average,
                             diagnostics: list | None = None) -> float:
    """Fraction of settings whose regret beats ``threshold_ratio`` x random.

    ``budget_rule(bsuite_id)`` returns an episode limit within which the
    trailing mean regret must cross the bar, or ``None`` to compare the
    average regret of the whole run against it.
    """
    if not per_setting_records:
        return 0.0
    passed = 0
    for bid, records in per_setting_records.items():
        config = sweep.env_config(bid)
        bar = threshold_ratio * config.random_regret
        regrets = _regrets(records)
        limit = budget_rule(bid)
        if limit is None:
            mean = float(np.mean(regrets)) if len(regrets) else math.inf
            ok = mean < bar
            info = {"mean_regret": mean}
        else:
            crossing = episodes_to_threshold(regrets, bar)
            ok = crossing is not None and crossing <= limit
            info = {"episodes_to_threshold": crossing, "limit": limit}
        passed += ok
        if diagnostics is not None:
            diagnostics.append({"bsuite_id": bid, "threshold": bar, "passed": bool(ok), **info})
    return passed / len(per_setting_records)


def swingup_score(per_setting_records: Mapping[str, Sequence[EpisodeRecord]],
                  diagnostics: list | None = None) -> float:
    """Fraction of settings whose mean episodic return is positive."""
    if not per_setting_records:
        return 0.0
    positive = 0
    for bid, records in per_setting_records.items():
        mean = float(np.mean([r.raw_return for r in records])) if records else -math.inf
        positive += mean > 0
        if diagnostics is not None:
            diagnostics.append({"bsuite_id": bid, "mean_return": mean, "passed": bool(mean > 0)})
    return positive / len(per_setting_records)


def setting_parameter(bsuite_id: str) -> tuple[str, float]:
    """The swept quantity of an id, e.g. ("size", 10) for deep_sea/0."""
    c = sweep.env_config(bsuite_id)
    kw = c.env_kwargs
    if c.experiment.startswith("deep_sea"):
        return "size", kw["size"]
    if c.experiment == "cartpole_swingup":
        return "height_threshold", kw["height_threshold"]
    if c.experiment == "umbrella_length":
        return "chain_length", kw["chain_length"]
    if c.experiment == "umbrella_features":
        return "n_distractors", kw["n_distractors"]
    if c.experiment == "memory_len":
        return "length", kw["length"]
    if c.experiment == "memory_bits":
        return "num_bits", kw["num_bits"]
    if c.noise_sigma is not None:
        return "noise_sigma", c.noise_sigma
    if c.reward_scale is not None:
        return "reward_scale", c.reward_scale
    return "seed", c.seed


def _score_experiment(name: str, per_id: dict[str, list[EpisodeRecord]]) -> ExperimentScore:
    exp = sweep.EXPERIMENTS[name]
    diagnostics: list[dict] = []
    if exp.score_rule == "deep_sea":
        score = threshold_fraction_score(per_id, DEEP_SEA_RATIO, dithering_limit, diagnostics)
    elif exp.score_rule == "memory":
        score = threshold_fraction_score(per_id, MEMORY_RATIO, final_average, diagnostics)
    elif exp.score_rule == "swingup":
        score = swingup_score(per_id, diagnostics)
    else:
        scores = []
        for bid, records in per_id.items():
            config = sweep.env_config(bid)
            s = normalized_regret_score(records, config.random_regret)
            scores.append(s)
            diagnostics.append({"bsuite_id": bid, "mean_regret": float(np.mean(_regrets(records))),
                                "random_regret": config.random_regret, "score": s})
        score = float(np.mean(scores))
    for d in diagnostics:
        key, value = setting_parameter(d["bsuite_id"])
        d["parameter"] = key
        d["value"] = value
        d["episodes"] = len(per_id[d["bsuite_id"]])
    return ExperimentScore(name, _clamp01(score), exp.tags, len(per_id), exp.num_settings, diagnostics)


def experiment_scores(results: ResultsTable | Mapping[str, Sequence[EpisodeRecord]]) -> list[ExperimentScore]:
    """Score every experiment with at least one logged setting, in registry order."""
    records = results.records if isinstance(results, ResultsTable) else results
    by_experiment: dict[str, dict[str, list[EpisodeRecord]]] = {}
    for bid, rows in records.items():
        if not rows:
            continue
        try:
            config = sweep.env_config(bid)
        except (KeyError, ValueError):
            logger.warning("ignoring results for unknown bsuite_id %s", bid)
            continue
        by_experiment.setdefault(config.experiment, {})[config.bsuite_id] = list(rows)

    scores = []
    for name, exp in sweep.EXPERIMENTS.items():
        if name not in by_experiment:
            logger.info("experiment %s has no results; omitted", name)
            continue
        per_id = dict(sorted(by_experiment[name].items(), key=lambda kv: sweep.BsuiteId.parse(kv[0]).index))
        score = _score_experiment(name, per_id)
        if not score.complete:
            logger.warning("experiment %s incomplete: %d of %d settings", name,
                           score.settings_present, score.settings_total)
        scores.append(score)
    return scores


def capability_summary(scores: Iterable[ExperimentScore]) -> CapabilitySummary:
    """Unweighted mean of member experiment scores per capability."""
    scores = list(scores)
    if not scores:
        raise ValueError("capability_summary needs at least one experiment score")
    members: dict[str, list[str]] = {c: [] for c in sweep.CAPABILITIES}
    values: dict[str, list[float]] = {c: [] for c in sweep.CAPABILITIES}
    for s in scores:
        for tag in s.tags:
            tag = sweep.TAG_ALIASES.get(tag, tag)
            if tag in values:
                values[tag].append(s.score)
                members[tag].append(s.experiment)
    missing = [c for c in sweep.CAPABILITIES if not values[c]]
    for c in missing:
        logger.warning("capability %s has no member experiments", c)
    means = {c: float(math.fsum(v) / len(v)) for c, v in values.items() if v}
    return CapabilitySummary(means, missing, {c: sorted(m) for c, m in members.items() if m})
