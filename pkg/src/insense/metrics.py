"""Sensing-matrix quality metrics.

A sensing matrix is a dense 2-D float array with d rows (sensors) and n
columns (signal atoms).  Coherence metrics look at column pairs, the frame
potential at row pairs.  A metric that is meaningless for the given matrix
(zero column, zero singular value) is reported as None rather than raising.
"""

import numpy as np

from dataclasses import dataclass

from .exceptions import InfeasibleConstraintError, InvalidPairError, InvalidSubsetError

# A column (or singular value) at or below this fraction of the largest one
# counts as zero, which flips the affected metric to undefined.
ZERO_RTOL = 1e-12


def as_sensing_matrix(phi):
    """Validate `phi` and return it as a float64 matrix.

    Requires a finite 2-D array with at least one row and two columns
    (coherence needs at least one column pair).
    """
    a = np.asarray(phi, dtype=float)
    if a.ndim != 2:
        raise ValueError(f"sensing matrix must be 2-D, got shape {a.shape}")
    d, n = a.shape
    if d < 1 or n < 2:
        raise ValueError(f"sensing matrix needs >= 1 row and >= 2 columns, got {d}x{n}")
    if not np.all(np.isfinite(a)):
        raise ValueError("sensing matrix contains non-finite entries")
    return a


def validate_subset(indices, d):
    """Check that `indices` is a strictly increasing list of ints in [0, d)."""
    idx = np.asarray(indices, dtype=int)
    if idx.ndim != 1 or idx.size == 0:
        raise InvalidSubsetError("subset must be a non-empty 1-D index list")
    if np.any(idx < 0) or np.any(idx >= d):
        raise InvalidSubsetError(f"subset indices out of range for d={d}: {idx.tolist()}")
    if idx.size > 1 and np.any(np.diff(idx) <= 0):
        raise InvalidSubsetError(
            f"subset indices must be strictly increasing without duplicates: {idx.tolist()}"
        )
    return idx


def validate_budget(m, d):
    """Check that `m` is an integer row budget with 1 <= m <= d."""
    if int(m) != m:
        raise InfeasibleConstraintError(f"row budget must be an integer, got {m!r}")
    m = int(m)
    if not 1 <= m <= d:
        raise InfeasibleConstraintError(f"row budget m={m} outside [1, {d}]")
    return m


def extract_submatrix(phi, indices):
    """Return the rows of `phi` selected by `indices`, in that order."""
    phi = as_sensing_matrix(phi)
    idx = validate_subset(indices, phi.shape[0])
    return phi[idx].copy()


def _column_norms(phi):
    norms = np.linalg.norm(phi, axis=0)
    zero = norms <= ZERO_RTOL * norms.max()
    return norms, zero


def pairwise_coherence(phi, i, j):
    """Normalized absolute inner product of columns i and j, in [0, 1].

    Returns None when either column is numerically zero.
    """
    phi = as_sensing_matrix(phi)
    n = phi.shape[1]
    if i == j:
        raise InvalidPairError(f"need two distinct columns, got i = j = {i}")
    if not (0 <= i < n and 0 <= j < n):
        raise InvalidPairError(f"column pair ({i}, {j}) out of range for n={n}")
    norms, zero = _column_norms(phi)
    if zero[i] or zero[j]:
        return None
    c = abs(float(phi[:, i] @ phi[:, j])) / (norms[i] * norms[j])
    return min(c, 1.0)


def _coherence_values(phi):
    """Upper-triangle column coherences as a flat array, or None if undefined."""
    norms, zero = _column_norms(phi)
    if zero.any():
        return None
    unit = phi / norms
    gram = unit.T @ unit
    iu = np.triu_indices(phi.shape[1], k=1)
    return np.minimum(np.abs(gram[iu]), 1.0)


def mu_avg(phi):
    """Root-mean-square coherence over all column pairs, or None if any column is zero."""
    phi = as_sensing_matrix(phi)
    c = _coherence_values(phi)
    if c is None:
        return None
    return float(np.sqrt(np.mean(c**2)))


def mu_max(phi):
    """Largest pairwise column coherence, or None if any column is zero."""
    phi = as_sensing_matrix(phi)
    c = _coherence_values(phi)
    if c is None:
        return None
    return float(np.max(c))


def frame_potential(phi):
    """Sum of squared inner products over distinct row pairs (0 for one row)."""
    phi = as_sensing_matrix(phi)
    if phi.shape[0] < 2:
        return 0.0
    r = phi @ phi.T
    return float((np.sum(r * r) - np.sum(np.diag(r) ** 2)) / 2.0)


def condition_number(phi):
    """Ratio of largest to smallest singular value, or None if rank deficient."""
    phi = as_sensing_matrix(phi)
    s = np.linalg.svd(phi, compute_uv=False)
    if s[-1] <= ZERO_RTOL * s[0]:
        return None
    return float(s[0] / s[-1])


@dataclass
class MetricReport:
    """Quality metrics of one (sub)matrix; None marks an undefined metric."""

    mu_avg: float | None
    mu_max: float | None
    frame_potential: float
    condition_number: float | None


def metric_report(phi):
    """All four quality metrics of `phi` in one report."""
    phi = as_sensing_matrix(phi)
    return MetricReport(
        mu_avg=mu_avg(phi),
        mu_max=mu_max(phi),
        frame_potential=frame_potential(phi),
        condition_number=condition_number(phi),
    )
