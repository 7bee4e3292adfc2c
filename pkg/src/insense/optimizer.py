"""Projected-gradient selection of incoherent sensor rows.

Minimizes a smoothed version of the average squared column coherence of
the weighted matrix over relaxed selection weights z in the scaled
boxed-simplex {sum(z) = m, 0 <= z <= 1}.  The objective is expressed
through the weighted column Gram matrix

    G(z) = phi.T @ diag(z) @ phi,

summing (G_ij^2 + eps1) / (G_ii G_jj + eps2) over column pairs i < j; the
epsilons keep the ratio bounded when weighted column norms vanish.

The reported subset is the best rounding seen along the descent path, not
the rounding of the final weights alone.  Fractional weights can null the
off-diagonal mass in ways no m-row subset can (spreading tiny weight over
many mutually orthogonal rows), so the final iterate's top-m rows may be
a poor subset even at a low objective value.  Scoring the actual rounded
candidates by their average column coherence closes that relaxation gap.
"""

import numpy as np

from dataclasses import dataclass, field, replace

from .exceptions import NumericalFailureError
from .metrics import as_sensing_matrix, mu_avg, validate_budget
from .projection import project_sbs
from .seeding import seeded_rng

_INIT_MODES = ("uniform", "uniform-plus-jitter")
_MAX_BACKTRACKS = 50
_REL_FLOOR = 1e-30  # denominator floor for the relative-change stop rule


@dataclass
class InsenseConfig:
    """Settings for run_insense.

    eps1/eps2 smooth the objective (eps2 < eps1 << 1).  The run stops when
    the relative objective change drops below rel_tol or after max_iters
    iterations.  The line search shrinks the step by ls_shrink starting
    from ls_init_step until the objective stops increasing; ls_c is the
    sufficient-decrease coefficient reserved for a stricter Armijo rule
    and is not consulted by the default monotone acceptance.
    """

    eps1: float = 1e-9
    eps2: float = 1e-10
    rel_tol: float = 1e-7
    max_iters: int = 5000
    ls_shrink: float = 0.5
    ls_c: float = 1e-4
    ls_init_step: float = 1.0
    init: str = "uniform"
    jitter_scale: float = 1e-3
    seed: int = 0
    restarts: int = 1

    def __post_init__(self):
        if not 0.0 < self.eps2 < self.eps1 < 1.0:
            raise ValueError(f"need 0 < eps2 < eps1 < 1, got {self.eps1}, {self.eps2}")
        if self.rel_tol <= 0.0:
            raise ValueError("rel_tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if not 0.0 < self.ls_shrink < 1.0:
            raise ValueError("ls_shrink must lie in (0, 1)")
        if self.ls_init_step <= 0.0:
            raise ValueError("ls_init_step must be positive")
        if self.init not in _INIT_MODES:
            raise ValueError(f"init must be one of {_INIT_MODES}, got {self.init!r}")
        if self.jitter_scale < 0.0:
            raise ValueError("jitter_scale must be non-negative")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")


@dataclass
class SelectionResult:
    """Outcome of a selection run.

    subset holds the best rounded candidate along the descent path: at
    the start and after every accepted step, the current weights are
    rounded to their m largest entries (ties to the lower index) and the
    rounding is scored by the average column coherence of its submatrix.
    The lowest defined score wins, earliest iterate on ties;
    subset_iteration records where it occurred and subset_mu_avg its
    score.  When no visited rounding has a defined score (all of them
    leave zero columns), the final weights' rounding is kept and
    subset_mu_avg is None.

    final_weights, final_objective, and objective_trace describe the end
    of the descent itself.  converged is True when the run stopped on the
    relative-change tolerance (or could no longer descend) rather than on
    the iteration cap.
    """

    subset: np.ndarray
    final_weights: np.ndarray
    iterations: int
    final_objective: float
    objective_trace: list[float] = field(repr=False)
    converged: bool = True
    subset_iteration: int = 0
    subset_mu_avg: float | None = None


def gram_matrix(phi, z):
    """Weighted column Gram matrix phi.T @ diag(z) @ phi, symmetrized."""
    g = phi.T @ (np.asarray(z, dtype=float)[:, None] * phi)
    return 0.5 * (g + g.T)


def _objective_from_gram(gram, eps1, eps2):
    diag = np.diag(gram)
    ratio = (gram**2 + eps1) / (np.outer(diag, diag) + eps2)
    # off-diagonal sum halves to the i < j pair sum
    return float((ratio.sum() - np.trace(ratio)) / 2.0)


def coherence_objective(phi, z, cfg=None):
    """Smoothed average-squared-coherence objective at weights `z`.

    Finite for any finite phi and any z in the box, including z = 0.
    """
    cfg = cfg or InsenseConfig()
    phi = as_sensing_matrix(phi)
    return _objective_from_gram(gram_matrix(phi, z), cfg.eps1, cfg.eps2)


def gram_gradient(gram, cfg=None):
    """Gradient of the objective with respect to the Gram matrix.

    Upper triangular: entry (i, j) with i < j is 2 G_ij / (G_ii G_jj + eps2);
    diagonal entry (i, i) collects the effect of G_ii on every denominator
    it appears in, -sum_{l != i} G_ll (G_il^2 + eps1) / (G_ii G_ll + eps2)^2.
    """
    cfg = cfg or InsenseConfig()
    gram = np.asarray(gram, dtype=float)
    diag = np.diag(gram)
    den = np.outer(diag, diag) + cfg.eps2
    grad = np.triu(2.0 * gram / den, k=1)
    diag_terms = -(diag[None, :] * (gram**2 + cfg.eps1)) / den**2
    np.fill_diagonal(diag_terms, 0.0)
    np.fill_diagonal(grad, diag_terms.sum(axis=1))
    return grad


def weight_gradient(phi, gram, cfg=None):
    """Chain-rule gradient with respect to the selection weights.

    Component i is the quadratic form of sensor row i against the Gram
    gradient; the d x d conjugation is never materialized.
    """
    cfg = cfg or InsenseConfig()
    gg = gram_gradient(gram, cfg)
    return np.einsum("ij,ij->i", phi @ gg, phi)


def _initial_weights(d, m, cfg, rng):
    z = np.full(d, m / d)
    if cfg.init == "uniform-plus-jitter" and cfg.jitter_scale > 0.0:
        z = z + cfg.jitter_scale * rng.standard_normal(d)
        z = project_sbs(z, m).z
    return z


def _objective_at(phi, z, cfg):
    gram = gram_matrix(phi, z)
    return _objective_from_gram(gram, cfg.eps1, cfg.eps2), gram


def _round_to_subset(z, m):
    top = np.argsort(-z, kind="stable")[:m]
    return np.sort(top)


def _run_single(phi, m, cfg, rng, callback=None):
    z = _initial_weights(phi.shape[0], m, cfg, rng)
    f, gram = _objective_at(phi, z, cfg)
    if not np.isfinite(f):
        raise NumericalFailureError("objective non-finite at the initial point", iteration=0)
    trace = [f]
    converged = False
    iterations = 0
    # best rounded candidate so far: (score, iteration, subset)
    subset = _round_to_subset(z, m)
    best = (mu_avg(phi[subset]), 0, subset)
    for iterations in range(1, cfg.max_iters + 1):
        grad = weight_gradient(phi, gram, cfg)
        step = cfg.ls_init_step
        accepted = False
        for _ in range(_MAX_BACKTRACKS):
            cand = project_sbs(z - step * grad, m).z
            f_cand, gram_cand = _objective_at(phi, cand, cfg)
            if not np.isfinite(f_cand):
                raise NumericalFailureError(
                    f"objective became non-finite at iteration {iterations}",
                    iteration=iterations,
                )
            if f_cand <= f:
                accepted = True
                break
            step *= cfg.ls_shrink
        if not accepted:
            # no step at resolvable sizes descends; treat as converged
            converged = True
            break
        rel_change = abs(f_cand - f) / max(abs(f), _REL_FLOOR)
        z, f, gram = cand, f_cand, gram_cand
        trace.append(f)
        subset = _round_to_subset(z, m)
        score = mu_avg(phi[subset])
        if score is not None and (best[0] is None or score < best[0]):
            best = (score, iterations, subset)
        if callback is not None:
            callback(iterations, z, f)
        if rel_change < cfg.rel_tol:
            converged = True
            break
    score, subset_iteration, subset = best
    if score is None:
        # every visited rounding left zero columns; keep the final one
        subset_iteration, subset = iterations, _round_to_subset(z, m)
    return SelectionResult(
        subset=subset,
        final_weights=z,
        iterations=iterations,
        final_objective=f,
        objective_trace=trace,
        converged=converged,
        subset_iteration=subset_iteration,
        subset_mu_avg=score,
    )


def run_insense(phi, m, cfg=None, callback=None):
    """Select `m` of the rows of `phi` by projected gradient descent.

    Parameters
    ----------
    phi : array_like, shape (d, n)
        Candidate sensor rows.
    m : int
        Number of rows to select, 1 <= m <= d.
    cfg : InsenseConfig, optional
        Algorithm settings; defaults are the standard protocol.
    callback : callable, optional
        Called as callback(iteration, z, objective) after every accepted
        step, for tracing or instrumentation.

    Returns
    -------
    SelectionResult

    Notes
    -----
    With restarts > 1, restart 0 uses cfg.init and every later restart
    uses a jittered start (identical uniform restarts would be no-ops);
    restart r draws from the seeded stream (cfg.seed, r).  Restarts are
    compared the same way iterate candidates are: the subset with the
    lowest defined average column coherence wins, earliest restart on
    ties; if no restart produced a defined score, the lowest final
    objective wins.
    """
    cfg = cfg or InsenseConfig()
    phi = as_sensing_matrix(phi)
    m = validate_budget(m, phi.shape[0])
    best = None
    best_key = None
    for r in range(cfg.restarts):
        rng = seeded_rng(cfg.seed, r)
        run_cfg = cfg if r == 0 else replace(cfg, init="uniform-plus-jitter")
        result = _run_single(phi, m, run_cfg, rng, callback=callback)
        if result.subset_mu_avg is not None:
            key = (0, result.subset_mu_avg)
        else:
            key = (1, result.final_objective)
        if best is None or key < best_key:
            best, best_key = result, key
    return best
