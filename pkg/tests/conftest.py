from functools import lru_cache

import pytest

from qenvelope import builtin, simulate_mg1
from qenvelope.des import SimConfig

CAPACITY = 10e9


@lru_cache(maxsize=8)
def cached_run(dist_name: str, load: float, seed: int, n_packets: int = 1_000_000,
               capacity: float = CAPACITY):
    cfg = SimConfig(capacity, load, builtin(dist_name), n_packets, None, seed)
    return cfg, simulate_mg1(cfg)


@pytest.fixture(scope="session")
def sfmix_07():
    """SFM-IX at 10 Gb/s, load 0.7, 10^6 packets, seed 1."""
    return cached_run("sfmix", 0.7, 1)
