"""Reproducible per-trial seeding and ordered parallel execution."""
import os
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

import numpy as np

ResultT = TypeVar('ResultT')


def trial_seeds(seed: int, trials: int) -> list[np.random.SeedSequence]:
    """Spawn one independent child seed per trial from a root seed.

    The children depend only on (seed, trial index), so any scheduling of the
    trials reproduces the same draws.
    """
    return np.random.SeedSequence(seed).spawn(trials)


def resolve_threads(threads: int) -> int:
    """Map 0 to the number of available CPUs."""
    return threads if threads > 0 else (os.cpu_count() or 1)


def map_trials(func: Callable[[np.random.SeedSequence], ResultT],
               seeds: Sequence[np.random.SeedSequence], threads: int = 1) -> list[ResultT]:
    """Run func once per seed and return the results in seed order.

    Args:
        func (Callable): The per-trial function.
        seeds (Sequence[np.random.SeedSequence]): One seed per trial.
        threads (int): Worker count; 0 means one per CPU, 1 runs inline.

    Returns:
        list: Per-trial results, ordered like seeds.
    """
    workers = resolve_threads(threads)
    if workers == 1:
        return [func(child) for child in seeds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, seeds))
