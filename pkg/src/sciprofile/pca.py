"""Principal component / factor extraction from profile matrices.

In Q mode the countries are the variables and the subject areas the cases, so
every country gets a loading on every factor. R mode swaps the roles.
Loadings are eigenvectors of the correlation matrix scaled by the square root
of their eigenvalue, optionally varimax-rotated.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .core import ProfileMatrix
from .eigen import jacobi_eigh
from .tables import ReportTable

MODES = ("q_mode", "r_mode")


class PreconditionError(ValueError):
    """Input cannot be analysed (too few variables or cases, zero variance)."""


@dataclass(frozen=True)
class FactorModel:
    mode: str
    k: int
    labels: tuple[str, ...]
    eigenvalues: np.ndarray
    explained: np.ndarray
    loadings: np.ndarray
    rotated: bool

    @property
    def communalities(self) -> np.ndarray:
        return (self.loadings**2).sum(axis=1)

    @property
    def factor_explained(self) -> np.ndarray:
        """Percent of total variance carried by each retained factor (after rotation)."""
        return 100.0 * (self.loadings**2).sum(axis=0) / float(np.sum(self.eigenvalues))

    def loading_table(self):
        from .ingest import LoadingTable

        return LoadingTable(self.labels, self.loadings)


def correlation_matrix(matrix: ProfileMatrix, mode: str = "q_mode") -> np.ndarray:
    """Pearson correlations between countries (Q mode) or areas (R mode)."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    x = matrix.values
    names = matrix.codes
    if mode == "r_mode":
        x = x.T
        names = list(matrix.scheme.areas)
    n_vars, n_cases = x.shape
    if n_vars < 2:
        raise PreconditionError(f"{mode}: need at least 2 variables to correlate, got {n_vars}")
    if n_cases < 3:
        raise PreconditionError(f"{mode}: need at least 3 cases per variable, got {n_cases}")
    centered = x - x.mean(axis=1, keepdims=True)
    norms = np.sqrt((centered**2).sum(axis=1))
    flat = [names[i] for i in np.flatnonzero(norms <= 1e-12 * (1.0 + np.abs(x).max(axis=1)))]
    if flat:
        raise PreconditionError(f"zero variance, cannot correlate: {', '.join(flat)}")
    z = centered / norms[:, None]
    r = z @ z.T
    r = 0.5 * (r + r.T)
    np.fill_diagonal(r, 1.0)
    return np.clip(r, -1.0, 1.0)


def _fix_signs(loadings: np.ndarray) -> np.ndarray:
    signs = np.where(loadings.sum(axis=0) < 0, -1.0, 1.0)
    return loadings * signs


def varimax(loadings, tol: float = 1e-10, max_sweeps: int = 1000) -> np.ndarray:
    """Kaiser-normalized varimax by successive planar rotations.

    Each sweep rotates every factor pair by the angle that maximizes the
    criterion for that pair; iteration stops when a sweep improves the
    criterion by less than ``tol``. Columns come back with positive sums,
    ordered by decreasing sum of squared loadings.
    """
    a = np.array(loadings, dtype=float)
    if a.ndim != 2 or a.shape[1] < 2:
        raise ValueError("varimax needs at least two factors")
    n, k = a.shape
    h = np.sqrt((a**2).sum(axis=1))
    h_safe = np.where(h > 0, h, 1.0)
    x = a / h_safe[:, None]

    def criterion(x):
        s = x**2
        return float(((n * (s**2).sum(axis=0) - s.sum(axis=0) ** 2) / n**2).sum())

    current = criterion(x)
    for _ in range(max_sweeps):
        for i in range(k - 1):
            for j in range(i + 1, k):
                xi, xj = x[:, i].copy(), x[:, j].copy()
                u = xi * xi - xj * xj
                v = 2.0 * xi * xj
                su, sv = u.sum(), v.sum()
                num = 2.0 * (u @ v) - 2.0 * su * sv / n
                den = (u @ u - v @ v) - (su * su - sv * sv) / n
                phi = 0.25 * math.atan2(num, den)
                c, s = math.cos(phi), math.sin(phi)
                x[:, i] = c * xi + s * xj
                x[:, j] = -s * xi + c * xj
        new = criterion(x)
        gain = new - current
        current = new
        if gain < tol:
            break
    rotated = _fix_signs(x * h_safe[:, None] * (h > 0)[:, None])
    order = np.argsort(-(rotated**2).sum(axis=0), kind="stable")
    return rotated[:, order]


def retained_count(eigenvalues, rule) -> int:
    """Number of factors to keep.

    ``rule`` is an int (used as is), ``"kaiser"`` (eigenvalues above their
    mean) or a string such as ``"90%"`` (smallest count whose cumulative
    explained variance reaches that percent).
    """
    lam = np.asarray(eigenvalues, dtype=float)
    if isinstance(rule, (int, np.integer)) and not isinstance(rule, bool):
        return int(rule)
    if isinstance(rule, str):
        text = rule.strip().lower()
        if text == "kaiser":
            return max(1, int(np.sum(lam > lam.mean())))
        if text.endswith("%"):
            target = float(text[:-1])
            if not 0 < target <= 100:
                raise ValueError(f"cumulative threshold must be in (0, 100], got {rule!r}")
            cum = np.cumsum(100.0 * lam / lam.sum())
            return int(min(np.searchsorted(cum, target - 1e-9) + 1, lam.size))
        if text.isdigit():
            return int(text)
    raise ValueError(f"cannot read factor count from {rule!r}")


def extract_factors(matrix: ProfileMatrix, k=3, mode: str = "q_mode",
                    rotate: bool = True) -> FactorModel:
    """Correlate, decompose, keep ``k`` factors, optionally rotate."""
    r = correlation_matrix(matrix, mode)
    eig = jacobi_eigh(r)
    lam = eig.values
    n_vars = lam.size
    k = retained_count(lam, k)
    if not 1 <= k <= n_vars:
        raise ValueError(f"k must be between 1 and {n_vars}, got {k}")
    explained = 100.0 * lam / math.fsum(lam)
    loadings = eig.vectors[:, :k] * np.sqrt(np.clip(lam[:k], 0.0, None))
    if rotate and k >= 2:
        loadings = varimax(loadings)
    else:
        rotate = False
        loadings = _fix_signs(loadings)
    labels = matrix.codes if mode == "q_mode" else list(matrix.scheme.areas)
    return FactorModel(mode, k, tuple(labels), lam, explained, loadings, rotate)


def communalities(model: FactorModel) -> np.ndarray:
    return model.communalities


def variance_table(model: FactorModel, top: int | None = None,
                   title: str = "Explained variance") -> ReportTable:
    """Leading unrotated components: percent of total variance and running total."""
    n = model.explained.size
    top = n if top is None else top
    if not 0 < top <= n:
        raise ValueError(f"top must be between 1 and {n}, got {top}")
    rows, running = [], []
    for i in range(top):
        running.append(float(model.explained[i]))
        rows.append((f"{model.explained[i]:.5f}", f"{math.fsum(running):.5f}"))
    return ReportTable(title, ("% total variance", "Cum. %"),
                       [str(i + 1) for i in range(top)], rows, label_header="Component")


def model_to_json(model: FactorModel) -> str:
    """Stable text form; keys in a fixed order, floats as shortest repr."""
    doc = {
        "mode": model.mode,
        "k": model.k,
        "labels": list(model.labels),
        "eigenvalues": [float(v) for v in model.eigenvalues],
        "explained": [float(v) for v in model.explained],
        "loadings": [[float(v) for v in row] for row in model.loadings],
        "rotated": model.rotated,
    }
    return json.dumps(doc, indent=1) + "\n"


def model_from_json(text: str) -> FactorModel:
    doc = json.loads(text)
    loadings = np.array(doc["loadings"], dtype=float).reshape(len(doc["labels"]), doc["k"])
    return FactorModel(doc["mode"], doc["k"], tuple(doc["labels"]),
                       np.array(doc["eigenvalues"]), np.array(doc["explained"]),
                       loadings, doc["rotated"])
