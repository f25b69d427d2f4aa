import logging

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rlsuite import analysis, sweep
from rlsuite.analysis import ExperimentScore
from rlsuite.report import AgentReport, write_report
from rlsuite.results import EpisodeRecord


def records(bid, regrets, returns=None):
    returns = [0.0] * len(regrets) if returns is None else returns
    return [EpisodeRecord(bid, i + 1, float(r), float(g), 1) for i, (g, r) in enumerate(zip(regrets, returns))]


def oracle_table(experiment, episodes=50):
    table = {}
    for bid in sweep.sweep_ids(experiment):
        c = sweep.env_config(bid)
        table[bid] = records(bid, [0.0] * episodes, [c.optimal_return] * episodes)
    return table


def random_deep_sea_regrets(size, episodes, rng):
    rights = rng.binomial(size, 0.5, episodes)
    returns = (rights == size) - 0.01 * rights / size
    return 0.99 - returns


# --- normalized regret ------------------------------------------------------


def test_normalized_anchors():
    assert analysis.normalized_regret_score(records("bandit/0", [0.5] * 10), 0.5) == 0.0
    assert analysis.normalized_regret_score(records("bandit/0", [0.0] * 10), 0.5) == 1.0


def test_normalized_bandit_example():
    assert analysis.normalized_regret_score(records("bandit/0", [0.25] * 4), 0.5) == pytest.approx(0.5)


def test_normalized_clamps():
    assert analysis.normalized_regret_score(records("bandit/0", [3.0]), 0.5) == 0.0
    assert analysis.normalized_regret_score(records("bandit/0", [-1.0]), 0.5) == 1.0


def test_normalized_averages_seeds():
    seeds = [records("bandit/0", [0.0]), records("bandit/1", [0.5]), records("bandit/2", [0.25])]
    assert analysis.normalized_regret_score(seeds, 0.5) == pytest.approx(0.5)


def test_normalized_errors():
    with pytest.raises(ValueError):
        analysis.normalized_regret_score([], 0.5)
    with pytest.raises(ValueError):
        analysis.normalized_regret_score(records("bandit/0", [0.1]), 0.0)


def test_random_bandit_converges_to_zero():
    rng = np.random.default_rng(0)
    regrets = 1.0 - rng.choice(np.linspace(0, 1, 11), 10_000)
    assert analysis.normalized_regret_score(records("bandit/0", regrets), 0.5) < 0.05


# --- threshold fraction -----------------------------------------------------


def test_moving_average_and_crossing():
    regrets = np.array([1.0] * 150 + [0.0] * 100)
    ma = analysis.moving_average(regrets, 100)
    assert ma[0] == 1.0 and ma[159] == pytest.approx(0.9)
    # mean of the trailing 100 drops below 0.9 once 11 zeros are in the window
    assert analysis.episodes_to_threshold(regrets, 0.9) == 161
    assert analysis.episodes_to_threshold(np.ones(500), 0.9) is None
    # fewer episodes than the window: the whole run is the window
    assert analysis.episodes_to_threshold(np.zeros(10), 0.9) == 10


def test_deep_sea_oracle_scores_one():
    table = oracle_table("deep_sea")
    assert analysis.threshold_fraction_score(table, 0.9, analysis.dithering_limit) == 1.0


def test_deep_sea_random_scores_zero():
    rng = np.random.default_rng(0)
    table = {bid: records(bid, random_deep_sea_regrets(sweep.env_config(bid).env_kwargs["size"], 10_000, rng))
             for bid in sweep.sweep_ids("deep_sea")}
    assert analysis.threshold_fraction_score(table, 0.9, analysis.dithering_limit) == 0.0


def test_deep_sea_crossing_after_limit_fails():
    bid = "deep_sea/0"  # limit 1024
    late = records(bid, [0.99] * 1100 + [0.0] * 200)
    early = records(bid, [0.99] * 900 + [0.0] * 200)
    assert analysis.threshold_fraction_score({bid: late}, 0.9, analysis.dithering_limit) == 0.0
    assert analysis.threshold_fraction_score({bid: early}, 0.9, analysis.dithering_limit) == 1.0


def test_memory_half_pass():
    table = {}
    for i, bid in enumerate(sweep.sweep_ids("memory_len")):
        table[bid] = records(bid, [0.5 if i % 2 else 1.0] * 20)
    assert analysis.threshold_fraction_score(table, 0.75) == 0.5


# --- swingup ----------------------------------------------------------------


def test_swingup_rules():
    ids = sweep.sweep_ids("cartpole_swingup")
    passive = {bid: records(bid, [900.0] * 5, [0.0] * 5) for bid in ids}
    assert analysis.swingup_score(passive) == 0.0
    half = {bid: records(bid, [0.0] * 5, [800.0 if i < 10 else -5.0] * 5) for i, bid in enumerate(ids)}
    assert analysis.swingup_score(half) == 0.5
    good = {bid: records(bid, [0.0] * 5, [1.0] * 5) for bid in ids}
    assert analysis.swingup_score(good) == 1.0


# --- experiment scores ------------------------------------------------------


def test_oracle_set_scores_one():
    table = {}
    for name in sweep.EXPERIMENTS:
        table.update(oracle_table(name, episodes=5))
    scores = analysis.experiment_scores(table)
    assert len(scores) == len(sweep.EXPERIMENTS)
    assert all(s.score == 1.0 and s.complete for s in scores)


def test_missing_and_incomplete_experiments(caplog):
    table = oracle_table("bandit")
    table.update({"catch/0": records("catch/0", [0.0])})
    with caplog.at_level(logging.WARNING):
        scores = analysis.experiment_scores(table)
    assert [s.experiment for s in scores] == ["bandit", "catch"]
    catch = scores[1]
    assert not catch.complete and catch.completeness == pytest.approx(1 / 20)
    assert "incomplete" in caplog.text


def test_unknown_ids_ignored():
    table = oracle_table("bandit")
    table["nope/3"] = records("nope/3", [0.0])
    assert [s.experiment for s in analysis.experiment_scores(table)] == ["bandit"]


def test_diagnostics_carry_setting_values():
    scores = analysis.experiment_scores(oracle_table("deep_sea"))
    sizes = [d["value"] for d in scores[0].diagnostics]
    assert sizes == list(range(10, 51, 2))


fuzz_value = st.floats(-1e6, 1e6, allow_nan=False)


@given(st.sampled_from(["bandit", "deep_sea", "memory_len", "cartpole_swingup", "catch_scale"]),
       st.lists(st.lists(fuzz_value, min_size=1, max_size=20), min_size=1, max_size=5),
       st.lists(fuzz_value, min_size=20, max_size=20))
def test_scores_always_in_unit_interval(experiment, regret_lists, returns):
    ids = sweep.sweep_ids(experiment)
    table = {ids[i]: records(ids[i], g, returns[: len(g)]) for i, g in enumerate(regret_lists)}
    for s in analysis.experiment_scores(table):
        assert 0.0 <= s.score <= 1.0


@given(st.sampled_from(["bandit", "deep_sea", "memory_len", "umbrella_length"]),
       st.lists(st.floats(-2, 2), min_size=1, max_size=300), st.data())
def test_lower_regret_never_lowers_score(experiment, regrets, data):
    bid = sweep.sweep_ids(experiment)[0]
    drops = data.draw(st.lists(st.floats(0, 2), min_size=len(regrets), max_size=len(regrets)))
    worse = analysis.experiment_scores({bid: records(bid, regrets)})[0].score
    better = analysis.experiment_scores({bid: records(bid, np.subtract(regrets, drops))})[0].score
    assert better >= worse


# --- capability summary -----------------------------------------------------


def score(name, value):
    exp = sweep.EXPERIMENTS[name]
    return ExperimentScore(name, value, exp.tags, exp.num_settings, exp.num_settings)


def test_all_ones():
    summary = analysis.capability_summary([score(n, 1.0) for n in sweep.EXPERIMENTS])
    assert summary.values == {c: 1.0 for c in sweep.CAPABILITIES} and summary.missing == []


def test_exploration_mean_of_three():
    summary = analysis.capability_summary(
        [score("deep_sea", 0.8), score("cartpole_swingup", 0.4), score("deep_sea_stochastic", 0.6)])
    assert summary["exploration"] == pytest.approx(0.6)
    assert "memory" in summary.missing and "memory" not in summary.values


def test_stochasticity_feeds_noise_axis():
    summary = analysis.capability_summary([score("umbrella_length", 0.3)])
    assert summary["noise"] == pytest.approx(0.3)


def test_capability_summary_empty():
    with pytest.raises(ValueError):
        analysis.capability_summary([])


@given(st.permutations(list(sweep.EXPERIMENTS)), st.lists(st.floats(0, 1), min_size=23, max_size=23))
def test_capability_summary_permutation_invariant(order, values):
    scores = [score(n, v) for n, v in zip(sweep.EXPERIMENTS, values)]
    by_name = {s.experiment: s for s in scores}
    a = analysis.capability_summary(scores).values
    b = analysis.capability_summary([by_name[n] for n in order]).values
    assert a == b


# --- report -----------------------------------------------------------------


def agent_report(label, value, metadata=None):
    table = {}
    for name in ("bandit", "deep_sea", "memory_len"):
        table.update(oracle_table(name, episodes=3))
    scores = analysis.experiment_scores(table)
    for s in scores:
        s.score = value
    return AgentReport(label, scores, analysis.capability_summary(scores), metadata or {"budget_scale": 0.1})


def test_report_files(tmp_path):
    write_report([agent_report("dqn", 0.5)], out_dir=tmp_path)
    assert (tmp_path / "summary.json").exists() and (tmp_path / "report.md").exists()
    assert sorted(p.name for p in (tmp_path / "plots").iterdir()) == ["bandit.csv", "deep_sea.csv", "memory_len.csv"]
    assert "budget_scale=0.1" in (tmp_path / "report.md").read_text()


def test_report_side_by_side(tmp_path):
    write_report([agent_report("dqn", 0.5), agent_report("boot_dqn", 0.75)], out_dir=tmp_path)
    md = (tmp_path / "report.md").read_text()
    assert "| capability | dqn | boot_dqn |" in md
    assert "| exploration | 0.5 | 0.75 |" in md


def test_report_deep_sea_curve(tmp_path):
    write_report([agent_report("oracle", 1.0)], out_dir=tmp_path)
    lines = (tmp_path / "plots" / "deep_sea.csv").read_text().splitlines()
    header = lines[0].split(",")
    assert "episodes_to_threshold" in header and len(lines) == 1 + 21
    col = header.index("episodes_to_threshold")
    assert all(line.split(",")[col] == "3" for line in lines[1:])


def test_report_is_byte_identical(tmp_path):
    reports = [agent_report("a", 0.25), agent_report("b", 0.5)]
    write_report(reports, out_dir=tmp_path / "one")
    write_report(reports, out_dir=tmp_path / "two")
    for path in (tmp_path / "one").rglob("*"):
        if path.is_file():
            assert path.read_bytes() == (tmp_path / "two" / path.relative_to(tmp_path / "one")).read_bytes()


def test_report_single_agent_signature(tmp_path):
    r = agent_report("x", 0.5)
    write_report(r.scores, r.summary, tmp_path, metadata={"agent": "x", "budget_scale": 1.0})
    assert '"label": "x"' in (tmp_path / "summary.json").read_text()
