import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from rlsuite.envs.idx import write_idx_dataset

settings.register_profile("suite", deadline=None, max_examples=50,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("suite")


def synthetic_mnist(directory, count=200, seed=0):
    """Random uint8 images with random labels in the real training-split layout."""
    rng = np.random.default_rng(seed)
    images = rng.integers(0, 256, size=(count, 28, 28), dtype=np.uint8)
    labels = rng.integers(0, 10, size=count, dtype=np.uint8)
    return write_idx_dataset(directory, images, labels)


@pytest.fixture(scope="session")
def mnist_dir(tmp_path_factory):
    return synthetic_mnist(tmp_path_factory.mktemp("mnist"))


def rollout(env, policy, episodes=1):
    """Run ``policy(timestep) -> action``; returns a list of (rewards, timesteps) per episode."""
    out = []
    for _ in range(episodes):
        ts = env.reset()
        steps = [ts]
        while not ts.last():
            ts = env.step(policy(ts))
            steps.append(ts)
        out.append(([t.reward for t in steps[1:]], steps))
    return out


_acceptance_lines = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_acceptance_lines] = []


@pytest.fixture
def criterion(request):
    """``criterion(n, ok, detail)`` records one acceptance line for the terminal summary."""
    lines = request.config.stash[_acceptance_lines]

    def record(number, ok, detail):
        lines.append(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
        return ok
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_acceptance_lines, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
