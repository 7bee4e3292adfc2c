"""Reference selectors the experiments compare against.

Uniform-random selection, a worst-out greedy frame-potential minimizer,
and an exhaustive minimum-coherence search for tiny instances.
"""

import itertools
import math

import numpy as np

from dataclasses import dataclass

from .exceptions import ExhaustiveLimitError
from .metrics import as_sensing_matrix, mu_avg, validate_budget
from .seeding import seeded_rng

_METHODS = ("random", "fp-greedy", "exhaustive-mu-avg")


@dataclass
class BaselineConfig:
    """Which baseline to run and its knobs (seed applies to random only)."""

    method: str = "random"
    seed: int = 0
    exhaustive_limit: int = 1_000_000

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ValueError(f"method must be one of {_METHODS}, got {self.method!r}")


def select_random(phi, m, seed=0):
    """Uniform sample of m distinct row indices, sorted ascending."""
    phi = as_sensing_matrix(phi)
    d = phi.shape[0]
    m = validate_budget(m, d)
    rng = seeded_rng(seed)
    return np.sort(rng.choice(d, size=m, replace=False))


def select_fp_greedy(phi, m):
    """Worst-out greedy frame-potential minimization.

    Starts from all d rows and repeatedly drops the row whose removal
    lowers the frame potential of the remainder the most (ties to the
    lower index) until m rows remain.
    """
    phi = as_sensing_matrix(phi)
    d = phi.shape[0]
    m = validate_budget(m, d)
    sq = (phi @ phi.T) ** 2
    np.fill_diagonal(sq, 0.0)
    # contrib[i] = row i's total squared overlap with the surviving rows;
    # removing i lowers the frame potential by exactly contrib[i]
    contrib = sq.sum(axis=1)
    alive = np.ones(d, dtype=bool)
    for _ in range(d - m):
        cand = np.nonzero(alive)[0]
        worst = cand[np.argmax(contrib[cand])]  # argmax keeps the lowest index on ties
        alive[worst] = False
        contrib -= sq[:, worst]
    return np.nonzero(alive)[0]


def select_exhaustive_mu_avg(phi, m, limit=1_000_000):
    """Minimum-mu_avg subset by full enumeration over (d choose m) subsets.

    Subsets with undefined coherence (a zero column) rank last; ties keep
    the lexicographically first subset.  Refuses instances whose subset
    count exceeds `limit`.
    """
    phi = as_sensing_matrix(phi)
    d = phi.shape[0]
    m = validate_budget(m, d)
    total = math.comb(d, m)
    if total > limit:
        raise ExhaustiveLimitError(f"({d} choose {m}) = {total} exceeds the limit {limit}")
    best_subset = None
    best_val = math.inf
    for combo in itertools.combinations(range(d), m):
        val = mu_avg(phi[list(combo)])
        key = math.inf if val is None else val
        if best_subset is None or key < best_val:
            best_subset, best_val = combo, key
    return np.asarray(best_subset, dtype=int)


def select_baseline(phi, m, cfg):
    """Dispatch a BaselineConfig to the matching selector."""
    if cfg.method == "random":
        return select_random(phi, m, seed=cfg.seed)
    if cfg.method == "fp-greedy":
        return select_fp_greedy(phi, m)
    return select_exhaustive_mu_avg(phi, m, limit=cfg.exhaustive_limit)
