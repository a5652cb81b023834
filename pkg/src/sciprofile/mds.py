"""Two-dimensional maps of countries and factor poles.

Classical (Torgerson) scaling gives a deterministic starting configuration;
SMACOF then minimizes raw stress by repeated Guttman transforms, which never
increase it.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .eigen import jacobi_eigh

POLE_LABELS = ("F1", "F2", "F3")


@dataclass(frozen=True)
class Dissimilarity:
    labels: tuple[str, ...]
    d: np.ndarray

    def __post_init__(self):
        d = np.array(self.d, dtype=float)
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "d", d)
        n = len(self.labels)
        if d.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} matrix, got shape {d.shape}")
        if not np.all(np.isfinite(d)):
            raise ValueError("dissimilarities must be finite")
        if np.any(d < 0):
            raise ValueError("dissimilarities must be non-negative")
        if np.any(np.diag(d) != 0):
            raise ValueError("dissimilarity diagonal must be zero")
        if not np.array_equal(d, d.T):
            raise ValueError("dissimilarity matrix must be symmetric")

    def __len__(self):
        return len(self.labels)


@dataclass(frozen=True)
class Embedding:
    labels: tuple[str, ...]
    x: np.ndarray
    stress1: float = 0.0
    iterations: int = 0
    history: tuple[float, ...] = ()
    diagnostics: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "x", np.array(self.x, dtype=float))

    def __len__(self):
        return len(self.labels)

    def to_csv(self) -> str:
        """``label,x,y`` with 9 significant digits."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["label", "x", "y"])
        for label, (a, b) in zip(self.labels, self.x):
            w.writerow([label, f"{a:.9g}", f"{b:.9g}"])
        return buf.getvalue()


def read_embedding_csv(text: str) -> Embedding:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["label", "x", "y"]:
        raise ValueError("embedding CSV must start with label,x,y")
    body = rows[1:]
    return Embedding([r[0] for r in body], [[float(r[1]), float(r[2])] for r in body])


def add_factor_poles(loadings, labels, k: int | None = None):
    """Append one unit-loading row per factor, labelled F1, F2, F3.

    ``loadings`` may be a loading array or a fitted factor model (then
    ``labels`` may be None). Returns ``(rows, labels)``.
    """
    if hasattr(loadings, "loadings"):
        labels = loadings.labels if labels is None else labels
        loadings = loadings.loadings
    a = np.asarray(loadings, dtype=float)
    k = a.shape[1] if k is None else k
    if k != 3 or a.shape[1] != 3:
        raise ValueError(f"factor poles need exactly 3 factors, got {a.shape[1]}")
    return np.vstack([a, np.eye(3)]), (*labels, *POLE_LABELS)


def distance_matrix(rows, labels, metric: str = "euclidean") -> Dissimilarity:
    """Pairwise distances between rows; cosine distance is 1 - cosine similarity."""
    x = np.asarray(rows, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("need at least two rows")
    if metric == "euclidean":
        sq = ((x[:, None, :] - x[None, :, :]) ** 2).sum(axis=-1)
        d = np.sqrt(sq)
    elif metric == "cosine":
        norms = np.linalg.norm(x, axis=1)
        zero = [str(labels[i]) for i in np.flatnonzero(norms == 0)]
        if zero:
            raise ValueError(f"zero-norm rows have no cosine distance: {', '.join(zero)}")
        u = x / norms[:, None]
        d = np.clip(1.0 - u @ u.T, 0.0, 2.0)
    else:
        raise ValueError(f"unknown metric {metric!r}")
    d = 0.5 * (d + d.T)
    np.fill_diagonal(d, 0.0)
    return Dissimilarity(labels, d)


def _pair_distances(x: np.ndarray) -> np.ndarray:
    return np.sqrt(((x[:, None, :] - x[None, :, :]) ** 2).sum(axis=-1))


def raw_stress(x: np.ndarray, d: np.ndarray) -> float:
    iu = np.triu_indices(d.shape[0], 1)
    return float(((d[iu] - _pair_distances(x)[iu]) ** 2).sum())


def stress1(e: Embedding, d: Dissimilarity) -> float:
    """Kruskal stress-1 of ``e`` against ``d``."""
    if e.labels != d.labels:
        raise ValueError("embedding and dissimilarity labels differ")
    iu = np.triu_indices(len(d), 1)
    denom = float((d.d[iu] ** 2).sum())
    if denom == 0:
        raise ValueError("stress-1 undefined: all dissimilarities are zero")
    return math.sqrt(raw_stress(e.x, d.d) / denom)


def _stress1_or_zero(x, d):
    iu = np.triu_indices(d.shape[0], 1)
    denom = float((d[iu] ** 2).sum())
    return math.sqrt(raw_stress(x, d) / denom) if denom > 0 else 0.0


def classical_mds(d: Dissimilarity, dim: int = 2) -> Embedding:
    """Torgerson scaling: top eigenpairs of the double-centred squared distances."""
    n = len(d)
    if n < dim + 1:
        raise ValueError(f"need at least {dim + 1} items for a {dim}-d map, got {n}")
    j = np.eye(n) - 1.0 / n
    b = -0.5 * j @ (d.d**2) @ j
    eig = jacobi_eigh(0.5 * (b + b.T))
    lam = eig.values[:dim]
    notes = []
    if np.any(lam < 0):
        notes.append(f"clamped negative eigenvalues {lam[lam < 0].tolist()} to zero")
    neg = eig.values[eig.values < -1e-9 * max(1.0, abs(eig.values[0]))]
    if neg.size:
        notes.append(f"distances are not Euclidean: {neg.size} negative eigenvalue(s), "
                     f"smallest {neg.min():.3g}")
    x = eig.vectors[:, :dim] * np.sqrt(np.clip(lam, 0.0, None))
    x -= x.mean(axis=0)
    return Embedding(d.labels, x, _stress1_or_zero(x, d.d), 0, (), tuple(notes))


def smacof(d: Dissimilarity, init="classical", dim: int = 2, max_iter: int = 500,
           tol: float = 1e-9, seed: int | None = None) -> Embedding:
    """Metric SMACOF with unit weights.

    ``init`` is an :class:`Embedding`, an array, ``"classical"`` or
    ``"random"`` (seeded by ``seed``). Iterates the Guttman transform until the
    relative decrease of raw stress drops below ``tol``. The raw stress of every
    iterate is kept in ``history``; an increase beyond rounding raises
    ``RuntimeError`` since majorization rules it out.
    """
    n = len(d)
    if isinstance(init, Embedding):
        x = init.x.copy()
    elif isinstance(init, str) and init == "classical":
        x = classical_mds(d, dim).x
    elif isinstance(init, str) and init == "random":
        x = np.random.default_rng(seed).standard_normal((n, dim))
    else:
        x = np.array(init, dtype=float)
    if x.shape != (n, dim):
        raise ValueError(f"initial configuration must be {n}x{dim}, got {x.shape}")

    if not np.any(d.d):
        return Embedding(d.labels, x, 0.0, 0, (0.0,),
                         ("all dissimilarities are zero; returned the initial configuration",))

    iu = np.triu_indices(n, 1)
    scale = float((d.d[iu] ** 2).sum())
    exact = 1e-24 * scale  # stress-1 below 1e-12 counts as a perfect fit
    sigma = raw_stress(x, d.d)
    history = [sigma]
    it = 0
    while it < max_iter:
        dist = _pair_distances(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(dist > 0, d.d / dist, 0.0)
        bmat = -ratio
        np.fill_diagonal(bmat, 0.0)
        np.fill_diagonal(bmat, -bmat.sum(axis=1))
        x = bmat @ x / n
        it += 1
        new = raw_stress(x, d.d)
        history.append(new)
        if new > sigma * (1.0 + 1e-10) + 1e-15 * scale:
            raise RuntimeError(f"raw stress rose from {sigma!r} to {new!r} at iteration {it}")
        prev, sigma = sigma, new
        if prev <= exact or sigma <= exact or (prev - sigma) / prev < tol:
            break
    return Embedding(d.labels, x, _stress1_or_zero(x, d.d), it, tuple(history))


def procrustes(x: Embedding, y: Embedding) -> tuple[Embedding, float]:
    """Align ``y`` onto ``x`` by translation, rotation/reflection and uniform scale.

    Returns the transformed ``y`` and the root mean squared point distance.
    """
    if x.labels != y.labels:
        raise ValueError("embeddings must have the same labels in the same order")
    a, b = x.x, y.x
    ma, mb = a.mean(axis=0), b.mean(axis=0)
    a0, b0 = a - ma, b - mb
    u, s, vt = np.linalg.svd(b0.T @ a0)
    r = u @ vt
    nb = float((b0**2).sum())
    scale = float(s.sum()) / nb if nb > 0 else 0.0
    aligned = scale * b0 @ r + ma
    rmse = math.sqrt(float(((a - aligned) ** 2).sum()) / len(x))
    return Embedding(y.labels, aligned, y.stress1, y.iterations, y.history), rmse
