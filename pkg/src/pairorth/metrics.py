"""Diagnostics for a unit-column matrix state.

The central quantities are the leave-one-out distances d_j (distance from
column j to the span of the other columns), the potential
phi = -sum_j log d_j, the singular values, and the condition number
kappa = sigma_1 / sigma_n. The reciprocal of d_j equals the Euclidean norm
of row j of the inverse, which gives the fast computation path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from .errors import SingularityError, UsageError
from .matrix import ColumnMatrix

PROJECTION = "projection"
INVERSE_ROWS = "inverse-rows"
AUTO = "auto"


@dataclass(frozen=True)
class MetricsSnapshot:
    """All diagnostics for one matrix state.

    d: leave-one-out distances, each in (0, 1]
    phi: -sum_j log d_j, zero iff the matrix is orthonormal
    sigma: singular values, descending
    kappa: sigma[0] / sigma[-1]
    gram_offdiag: Frobenius norm of A*A - I
    """

    d: np.ndarray
    phi: float
    sigma: np.ndarray
    kappa: float
    gram_offdiag: float


def _distances_inverse_rows(arr: np.ndarray) -> np.ndarray:
    try:
        inv = np.linalg.inv(arr)
    except np.linalg.LinAlgError as exc:
        raise SingularityError(f"matrix is numerically singular: {exc}") from exc
    row_norms = np.linalg.norm(inv, axis=1)
    if not np.all(np.isfinite(row_norms)) or np.any(row_norms == 0.0):
        j = int(np.argmax(~np.isfinite(row_norms)))
        raise SingularityError(f"inverse row {j} is not finite", column=j)
    # d_j <= 1 holds exactly in real arithmetic; trim roundoff overshoot.
    return np.minimum(1.0 / row_norms, 1.0)


def _distances_projection(arr: np.ndarray) -> np.ndarray:
    n = arr.shape[1]
    d = np.empty(n)
    for j in range(n):
        others = np.delete(arr, j, axis=1)
        q, _ = np.linalg.qr(others)
        a_j = arr[:, j]
        r = a_j - q @ (q.conj().T @ a_j)
        r = r - q @ (q.conj().T @ r)  # second pass recovers lost orthogonality
        d[j] = np.linalg.norm(r)
        if d[j] == 0.0 or not np.isfinite(d[j]):
            raise SingularityError(
                f"column {j} is numerically in the span of the others", column=j
            )
    return np.minimum(d, 1.0)


def _phi_from_distances(d: np.ndarray) -> float:
    # Sum of logs, never log of the product: phi far above 700 must not
    # underflow through an intermediate product. The + 0.0 turns the
    # negative zero of an exactly orthonormal state into plain zero.
    return float(-np.log(d).sum() + 0.0)


def _distances_auto(arr: np.ndarray) -> np.ndarray:
    try:
        inv = np.linalg.inv(arr)
    except np.linalg.LinAlgError:
        return _distances_projection(arr)
    row_norms = np.linalg.norm(inv, axis=1)
    if not np.all(np.isfinite(row_norms)) or np.any(row_norms == 0.0):
        return _distances_projection(arr)
    # sqrt(n) * ||A^-1||_F bounds kappa from above and is free here.
    kappa_est = math.sqrt(arr.shape[0]) * float(np.linalg.norm(inv))
    if kappa_est > tol.DISTANCE_FALLBACK_KAPPA:
        return _distances_projection(arr)
    return np.minimum(1.0 / row_norms, 1.0)


def leave_one_out_distances(A: ColumnMatrix, method: str = AUTO) -> np.ndarray:
    """Distance from each column to the span of the other columns.

    method "inverse-rows" uses one factorization (d_j is the reciprocal
    norm of row j of the inverse); "projection" orthonormalizes the other
    columns and measures the residual per column; "auto" (default) uses
    inverse rows and falls back to projection when the estimated condition
    number exceeds 1e8.
    """
    if method == INVERSE_ROWS:
        return _distances_inverse_rows(A.array)
    if method == PROJECTION:
        return _distances_projection(A.array)
    if method == AUTO:
        return _distances_auto(A.array)
    raise UsageError(f"unknown distance method {method!r}")


def potential_phi(A: ColumnMatrix, method: str = AUTO) -> float:
    """The potential -sum_j log d_j(A); zero iff A is orthonormal."""
    return _phi_from_distances(leave_one_out_distances(A, method))


def condition_number(A: ColumnMatrix):
    """Return (kappa, sigma) with singular values descending."""
    sigma = np.linalg.svd(A.array, compute_uv=False)
    return float(sigma[0] / sigma[-1]), sigma


@dataclass(frozen=True)
class HadamardReport:
    """Determinant and operator-norm inequalities implied by the potential.

    For a unit-column matrix: |det A| <= 1, |det A^-1| <= exp(phi),
    ||A|| <= sqrt(n), and ||A^-1|| <= sqrt(n) exp(phi).
    """

    phi: float
    det_abs: float
    det_bound: float
    det_ok: bool
    inv_det_abs: float
    inv_det_bound: float
    inv_det_ok: bool
    norm: float
    norm_bound: float
    norm_ok: bool
    inv_norm: float
    inv_norm_bound: float
    inv_norm_ok: bool

    @property
    def all_ok(self) -> bool:
        return self.det_ok and self.inv_det_ok and self.norm_ok and self.inv_norm_ok


def _exp_or_inf(x: float) -> float:
    # math.exp raises on overflow; the bound is honestly inf in doubles
    return math.exp(x) if x < 709.0 else math.inf


def hadamard_report(A: ColumnMatrix) -> HadamardReport:
    """Evaluate all four determinant/norm inequalities for one matrix."""
    phi = potential_phi(A)
    _, logdet = np.linalg.slogdet(A.array)
    sigma = np.linalg.svd(A.array, compute_uv=False)
    det_abs = math.exp(logdet)
    inv_det_abs = _exp_or_inf(-logdet)
    norm = float(sigma[0])
    inv_norm = float(1.0 / sigma[-1])
    sqrt_n = math.sqrt(A.n)
    slack = 1.0 + tol.HADAMARD_REL
    return HadamardReport(
        phi=phi,
        det_abs=det_abs,
        det_bound=1.0,
        det_ok=det_abs <= slack,
        inv_det_abs=inv_det_abs,
        inv_det_bound=_exp_or_inf(phi),
        # relative slack applied in the log domain so the check survives
        # values that overflow to inf
        inv_det_ok=-logdet <= phi + math.log1p(tol.HADAMARD_REL),
        norm=norm,
        norm_bound=sqrt_n,
        norm_ok=norm <= sqrt_n * slack,
        inv_norm=inv_norm,
        inv_norm_bound=sqrt_n * _exp_or_inf(phi),
        inv_norm_ok=math.log(inv_norm)
        <= 0.5 * math.log(A.n) + phi + math.log1p(tol.HADAMARD_REL),
    )


def snapshot(A: ColumnMatrix, method: str = AUTO) -> MetricsSnapshot:
    """Compute the full diagnostic snapshot for one matrix state."""
    d = leave_one_out_distances(A, method)
    sigma = np.linalg.svd(A.array, compute_uv=False)
    g = A.array.conj().T @ A.array
    g[np.diag_indices(A.n)] -= 1.0
    return MetricsSnapshot(
        d=d,
        phi=_phi_from_distances(d),
        sigma=sigma,
        kappa=float(sigma[0] / sigma[-1]),
        gram_offdiag=float(np.linalg.norm(g)),
    )
