"""Basis pursuit and the exact-recovery evaluation sweep.

solve_bp finds the minimum-l1 solution of an equality-constrained linear
system by splitting x into positive and negative parts and handing the
resulting linear program to scipy's HiGHS backend.  evaluate_recovery
replays the sweep protocol: plant a unit-magnitude k-sparse signal on
every size-k support (or a seeded sample of them when there are too
many), measure it through the selected rows, and count the supports that
basis pursuit reproduces exactly.

The sweep sees the selected submatrix with its columns scaled to unit
l2 norm.  Column coherence, the quantity the selectors optimize, only
constrains column directions; without the rescaling, per-column gain
differences leak into the planted amplitudes and the sweep stops
measuring the property the selection controlled.
"""

import itertools
import math

import numpy as np

from dataclasses import dataclass
from typing import NamedTuple

from scipy.optimize import linprog

from .exceptions import SolverFailureError
from .metrics import as_sensing_matrix, validate_subset
from .seeding import seeded_rng


@dataclass
class BpConfig:
    """Solver and sweep settings.

    feas_tol bounds the equality residual of an accepted solution and
    exact_tol the per-entry distance at which a trial counts as exact
    recovery; the seed drives support sampling once (n choose k) exceeds
    sample_cap.
    """

    feas_tol: float = 1e-8
    exact_tol: float = 1e-4
    max_iters: int = 20000
    seed: int = 0
    sample_cap: int = 10000

    def __post_init__(self):
        if not 0.0 < self.feas_tol < self.exact_tol:
            raise ValueError("need 0 < feas_tol < exact_tol")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.sample_cap < 1:
            raise ValueError("sample_cap must be at least 1")


class TrialOutcome(NamedTuple):
    """One support's result inside a recovery sweep."""

    support: tuple
    recovered: bool
    residual: float
    linf_error: float


@dataclass
class RecoveryReport:
    """Aggregate sweep outcome; per_trial is filled only on request."""

    total_trials: int
    exact_count: int
    accuracy_percent: float
    sampled: bool
    per_trial: list[TrialOutcome] | None = None

    def to_dict(self, include_trials=False):
        out = {
            "total_trials": self.total_trials,
            "exact_count": self.exact_count,
            "accuracy_percent": self.accuracy_percent,
            "sampled": self.sampled,
        }
        if include_trials and self.per_trial is not None:
            out["per_trial"] = [
                {
                    "support": list(t.support),
                    "recovered": t.recovered,
                    "residual": t.residual,
                    "linf_error": t.linf_error,
                }
                for t in self.per_trial
            ]
        return out


def solve_bp(phi_sub, y, cfg=None):
    """Minimum-l1 solution of phi_sub @ x = y.

    Parameters
    ----------
    phi_sub : array_like, shape (m, n)
        Measurement rows (typically the selected submatrix).
    y : array_like, shape (m,)
        Noiseless measurements.
    cfg : BpConfig, optional

    Returns
    -------
    ndarray, shape (n,)

    Raises
    ------
    SolverFailureError
        When the linear program fails or the returned point misses the
        feasibility tolerance; carries the last residual when known.
    """
    cfg = cfg or BpConfig()
    a = np.asarray(phi_sub, dtype=float)
    y = np.asarray(y, dtype=float)
    if a.ndim != 2:
        raise ValueError(f"measurement matrix must be 2-D, got shape {a.shape}")
    if y.shape != (a.shape[0],):
        raise ValueError(f"dimension mismatch: matrix {a.shape} vs measurement {y.shape}")
    n = a.shape[1]
    res = linprog(
        c=np.ones(2 * n),
        A_eq=np.hstack([a, -a]),
        b_eq=y,
        bounds=(0, None),
        method="highs",
        options={"maxiter": cfg.max_iters},
    )
    if not res.success:
        residual = float("nan")
        if res.x is not None:
            x = res.x[:n] - res.x[n:]
            residual = float(np.linalg.norm(a @ x - y))
        raise SolverFailureError(f"basis pursuit LP failed: {res.message}", residual=residual)
    x = res.x[:n] - res.x[n:]
    residual = float(np.linalg.norm(a @ x - y))
    if residual > cfg.feas_tol:
        raise SolverFailureError(
            f"basis pursuit solution infeasible (residual {residual:.3e})", residual=residual
        )
    return x


def _unit_columns(a):
    """Columns scaled to unit l2 norm; all-zero columns pass through."""
    norms = np.linalg.norm(a, axis=0)
    return a / np.where(norms > 0.0, norms, 1.0)


def _unrank_combination(rank, n, k):
    """rank-th size-k subset of range(n) in lexicographic order."""
    out = []
    x = 0
    for remaining in range(k, 0, -1):
        while math.comb(n - x - 1, remaining - 1) <= rank:
            rank -= math.comb(n - x - 1, remaining - 1)
            x += 1
        out.append(x)
        x += 1
    return tuple(out)


def _supports(n, k, cfg):
    """Every size-k support, or a seeded uniform sample above the cap."""
    total = math.comb(n, k)
    if total <= cfg.sample_cap:
        return list(itertools.combinations(range(n), k)), False
    rng = seeded_rng(cfg.seed)
    if total <= max(4 * cfg.sample_cap, 1_000_000):
        ranks = rng.permutation(total)[: cfg.sample_cap]
    else:
        # collisions are rare at this size; rejection converges quickly
        seen = set()
        while len(seen) < cfg.sample_cap:
            seen.add(int(rng.integers(total)))
        ranks = list(seen)
    return [_unrank_combination(int(r), n, k) for r in sorted(ranks)], True


def evaluate_recovery(phi, subset, k, cfg=None, keep_trials=False):
    """Exact-recovery percentage of unit-magnitude k-sparse signals.

    For each support, plants x with ones on the support, measures
    y = A @ x through the column-normalized submatrix A, runs basis
    pursuit, and counts the trial as exact when the reconstruction is
    within exact_tol of x in every entry.  A solver failure marks the
    trial as not recovered and the sweep goes on.

    Returns
    -------
    RecoveryReport
    """
    cfg = cfg or BpConfig()
    phi = as_sensing_matrix(phi)
    d, n = phi.shape
    idx = validate_subset(subset, d)
    if not 1 <= k < n:
        raise ValueError(f"sparsity k={k} outside [1, {n})")
    a = _unit_columns(phi[idx])
    supports, sampled = _supports(n, k, cfg)
    trials = [] if keep_trials else None
    exact = 0
    for support in supports:
        x = np.zeros(n)
        x[list(support)] = 1.0
        y = a @ x
        try:
            xhat = solve_bp(a, y, cfg)
            residual = float(np.linalg.norm(a @ xhat - y))
            err = float(np.max(np.abs(xhat - x)))
            recovered = err <= cfg.exact_tol
        except SolverFailureError as exc:
            residual, err, recovered = exc.residual, math.inf, False
        exact += recovered
        if keep_trials:
            trials.append(TrialOutcome(support, bool(recovered), residual, err))
    total = len(supports)
    return RecoveryReport(
        total_trials=total,
        exact_count=exact,
        accuracy_percent=100.0 * exact / total,
        sampled=sampled,
        per_trial=trials,
    )
