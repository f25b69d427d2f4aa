"""Memory: feedforward value learning against a recurrent actor-critic.

The context bit is visible only on the first step of memory_chain and the
reward depends on it at the last step. DQN sees an all-zero final
observation and cannot do better than chance; the LSTM actor-critic,
trained with 30-step truncated backprop, carries the bit forward.

Run with: python3 demos/03_memory_length.py
"""

import tempfile

from rlsuite import analysis, sweep
from rlsuite.results import load_results
from rlsuite.runner import AgentFactory, run_sweep

ids = [bid for bid in sweep.sweep_ids("memory_len") if sweep.env_config(bid).env_kwargs["length"] <= 5]
print("lengths:", [sweep.env_config(bid).env_kwargs["length"] for bid in ids])

for name in ("dqn", "actor_critic_rnn"):
    out = tempfile.mkdtemp()
    run_sweep(AgentFactory(name, seed=0), ids, out, budget_scale=0.5)
    score = analysis.experiment_scores(load_results(out))[0]
    rows = ", ".join(f"N={d['value']}: {d['mean_regret']:.2f}{'' if d['passed'] else ' x'}"
                     for d in score.diagnostics)
    print(f"{name:>17}: mean regret {rows}  (bar {score.diagnostics[0]['threshold']:.2f}, x = fail)")
