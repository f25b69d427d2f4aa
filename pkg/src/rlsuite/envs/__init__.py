from rlsuite.envs.bandit import Bandit, make_bandit
from rlsuite.envs.cartpole import Cartpole, make_cartpole
from rlsuite.envs.cartpole_swingup import CartpoleSwingup, make_cartpole_swingup
from rlsuite.envs.catch import Catch, make_catch
from rlsuite.envs.deep_sea import DeepSea, make_deep_sea
from rlsuite.envs.discounting_chain import DiscountingChain, make_discounting_chain
from rlsuite.envs.idx import IdxParseError, MnistDataset, parse_idx
from rlsuite.envs.memory_chain import MemoryChain, make_memory_chain
from rlsuite.envs.mnist import MnistBandit, make_mnist_bandit
from rlsuite.envs.mountain_car import MountainCar, make_mountain_car
from rlsuite.envs.umbrella import Umbrella, make_umbrella

__all__ = [
    "Bandit", "Cartpole", "CartpoleSwingup", "Catch", "DeepSea", "DiscountingChain",
    "IdxParseError", "MemoryChain", "MnistBandit", "MnistDataset", "MountainCar", "Umbrella",
    "make_bandit", "make_cartpole", "make_cartpole_swingup", "make_catch", "make_deep_sea",
    "make_discounting_chain", "make_memory_chain", "make_mnist_bandit", "make_mountain_car",
    "make_umbrella", "parse_idx",
]
