"""A tour of one environment, the run loop and the regret score.

Run with: python3 demos/01_environments_and_scoring.py
"""

import tempfile

import numpy as np

from rlsuite import analysis, sweep
from rlsuite.agents import make_random
from rlsuite.agents.oracles import ScriptedOracle
from rlsuite.results import load_results
from rlsuite.runner import run_episode

# Every setting has a string id; the registry turns it into an environment
# recipe with a budget and capability tags.
config = sweep.env_config("deep_sea/0")
print(config.bsuite_id, config.env_kwargs, "budget", config.episode_budget, "tags", sorted(config.tags))
print("ids in the whole suite:", len(sweep.sweep_ids()))

# Environments speak the FIRST MID* LAST protocol.
env = sweep.load("deep_sea/0")
ts = env.reset()
print("first observation shape", ts.observation.shape, "step type", ts.step_type.name)

# The oracle reads the hidden action map and walks straight to the treasure.
ret, steps = run_episode(ScriptedOracle(env), env)
print(f"oracle: return {ret:.2f} in {steps} steps")

# A random agent almost never gets there.
agent = make_random(env.spec(), seed=0)
returns = [run_episode(agent, env)[0] for _ in range(200)]
print(f"random: mean return {np.mean(returns):.3f} over 200 episodes")

# load_and_record logs one CSV row per episode; analysis turns the rows
# into a score in [0, 1].
results_dir = tempfile.mkdtemp()
for bid in sweep.sweep_ids("bandit")[:3]:
    env = sweep.load_and_record(bid, results_dir)
    oracle, agent = ScriptedOracle(env), make_random(env.spec(), seed=1)
    for episode in range(500):
        run_episode(oracle if episode % 2 else agent, env)  # half random, half optimal
    env.close()

for score in analysis.experiment_scores(load_results(results_dir)):
    print(f"{score.experiment}: score {score.score:.3f} "
          f"({score.settings_present} of {score.settings_total} settings, flagged incomplete)")
