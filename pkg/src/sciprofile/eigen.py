"""Symmetric eigendecomposition by cyclic Jacobi rotations.

Deterministic by construction: a fixed (p, q) sweep order, no reductions whose
order depends on threading, and a fixed eigenvector sign convention (the entry
of largest magnitude is positive).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

MAX_SWEEPS = 100
OFFDIAG_TOL = 1e-12
SYMMETRY_TOL = 1e-10


@dataclass(frozen=True)
class EigenResult:
    values: np.ndarray   # descending
    vectors: np.ndarray  # column i pairs with values[i]
    sweeps: int = 0


def _check_symmetric(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    if np.abs(a - a.T).max(initial=0.0) > SYMMETRY_TOL * scale:
        raise ValueError("matrix is not symmetric")
    return 0.5 * (a + a.T)


def jacobi_eigh(a) -> EigenResult:
    """Eigenvalues and orthonormal eigenvectors of a real symmetric matrix.

    Sweeps over all off-diagonal pairs in row order until the largest
    off-diagonal magnitude is at most ``1e-12 * ||A||_F`` (or 100 sweeps).

    Returns
    -------
    EigenResult
        ``values`` sorted descending (stable, so equal values keep their
        diagonal order), ``vectors`` with matching columns.
    """
    a = _check_symmetric(a)
    n = a.shape[0]
    v = np.eye(n)
    tol = OFFDIAG_TOL * float(np.linalg.norm(a))
    sweeps = 0
    off = ~np.eye(n, dtype=bool)
    while n > 1 and sweeps < MAX_SWEEPS:
        if np.abs(a[off]).max() <= tol:
            break
        sweeps += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                app, aqq = a[p, p], a[q, q]
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                a[p, :] = a[:, p]
                a[q, :] = a[:, q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = a[q, p] = 0.0
                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq

    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    values = values[order]
    v = v[:, order]
    for j in range(n):
        i = int(np.argmax(np.abs(v[:, j])))
        if v[i, j] < 0:
            v[:, j] = -v[:, j]
    return EigenResult(values, v, sweeps)
