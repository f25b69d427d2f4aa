"""Why dithering fails on deep sea and randomized priors do not.

Deep sea of size N pays off only if the agent goes right N times in a row,
so epsilon-greedy needs roughly 2^N episodes to see the treasure once. An
ensemble with random prior functions commits to one hypothesis per episode
and explores deeply. Takes about a minute.

Run with: python3 demos/02_deep_sea_exploration.py
"""

import numpy as np

from rlsuite import analysis, sweep
from rlsuite.runner import AgentFactory, derive_seed, run_episode

BID = "deep_sea/0"  # N = 10
config = sweep.env_config(BID)
bar = analysis.DEEP_SEA_RATIO * config.random_regret
limit = analysis.dithering_limit(BID)
print(f"N={config.env_kwargs['size']}: pass if the 100-episode mean regret drops below {bar:.3f} "
      f"within {limit} episodes")


def train(factory, episodes):
    env = sweep.load(BID)
    agent = factory(env.spec(), derive_seed(factory.seed, BID))
    regrets = np.array([config.optimal_return - run_episode(agent, env)[0] for _ in range(episodes)])
    return regrets, analysis.episodes_to_threshold(regrets, bar)


for name, factory in [("dqn", AgentFactory("dqn", seed=0)),
                      ("boot_dqn K=10", AgentFactory("boot_dqn", seed=0, ensemble_size=10))]:
    regrets, crossing = train(factory, limit)
    curve = analysis.moving_average(regrets)
    checkpoints = ", ".join(f"{e}: {curve[e - 1]:.2f}" for e in (100, 250, 500, 1000))
    verdict = f"crossed at episode {crossing}" if crossing else "never crossed"
    print(f"{name:>14}: {verdict}; mean regret at {checkpoints}")
