"""Factor rankings, threshold membership, profile-vs-world and scheme tables."""

from __future__ import annotations

from .core import CountryProfile, ProfileMatrix, specialization_index
from .ingest import LoadingTable
from .pca import FactorModel, variance_table
from .tables import ReportTable

__all__ = ["ReportTable", "rank_by_factor", "membership", "profile_table",
           "compare_schemes", "rankings_table", "membership_table", "FACTOR_NAMES"]

FACTOR_NAMES = {1: "Biomedicine", 2: "Basic science & engineering", 3: "Agriculture"}
MEMBERSHIP_THRESHOLD = 0.8
HIGH, LOW = 1.5, 0.5
UP, DOWN = "↑", "↓"


def _check_factor(table: LoadingTable, f: int):
    if not 1 <= f <= table.k:
        raise IndexError(f"factor {f} out of range 1..{table.k}")


def rank_by_factor(table: LoadingTable, f: int) -> list[tuple[str, float]]:
    """Countries by decreasing loading on 1-based factor ``f`` (ties by label)."""
    _check_factor(table, f)
    pairs = [(label, float(v)) for label, v in zip(table.labels, table.loadings[:, f - 1])]
    return sorted(pairs, key=lambda p: (-p[1], p[0]))


def membership(table: LoadingTable, f: int, theta: float = MEMBERSHIP_THRESHOLD) -> list[tuple[str, float]]:
    """Countries whose loading on factor ``f`` is at least ``theta``, ranked."""
    return [p for p in rank_by_factor(table, f) if p[1] >= theta]


def rankings_table(table: LoadingTable, title: str = "Factor loadings by country") -> ReportTable:
    """Long format: one row per (factor, rank)."""
    labels, rows = [], []
    for f in range(1, table.k + 1):
        for rank, (country, v) in enumerate(rank_by_factor(table, f), start=1):
            labels.append(str(f))
            rows.append((str(rank), country, f"{v:.5f}"))
    return ReportTable(title, ("rank", "country", "loading"), labels, rows, label_header="factor")


def membership_table(table: LoadingTable, theta: float = MEMBERSHIP_THRESHOLD,
                     excluded: dict[int, list[str]] | None = None) -> ReportTable:
    """Members of every factor at ``theta``.

    ``excluded`` drops countries by hand from a factor's list; each drop is
    recorded as a footnote.
    """
    excluded = excluded or {}
    labels, rows, notes = [], [], []
    for f in range(1, table.k + 1):
        for country, v in membership(table, f, theta):
            if country in excluded.get(f, ()):
                notes.append(f"factor {f}: {country} ({v:.5f}) excluded by hand")
                continue
            labels.append(str(f))
            rows.append((country, f"{v:.5f}"))
    return ReportTable(f"Factor membership (loading >= {theta:g})", ("country", "loading"),
                       labels, rows, notes, label_header="factor")


def profile_table(matrix: ProfileMatrix, members, world: CountryProfile,
                  title: str = "", short_names=None) -> ReportTable:
    """Member share rows followed by the world row, one decimal and a percent sign.

    Each member cell is marked with an up arrow when the share is at least 1.5
    times the world share and a down arrow when it is at most half of it.
    ``short_names`` optionally maps canonical area names to column heads.
    """
    rows, marks, labels = [], [], []
    for key in members:
        try:
            country = matrix.row(key)
        except KeyError:
            raise KeyError(f"{key!r} is not a row of the matrix") from None
        ratio = specialization_index(country, world)
        labels.append(country.name)
        rows.append([country.iso2, *(f"{s:.1f}%" for s in country.shares)])
        marks.append(["", *(UP if r >= HIGH else DOWN if r <= LOW else "" for r in ratio)])
    labels.append(world.name)
    rows.append(["", *(f"{s:.1f}%" for s in world.shares)])
    marks.append([""] * (len(world.shares) + 1))
    heads = [short_names.get(a, a) if short_names else a for a in matrix.scheme.areas]
    notes = [f"{UP} share >= {HIGH:g}x world, {DOWN} share <= {LOW:g}x world"]
    suspect = [matrix.row(k).iso2 for k in members if matrix.row(k).iso2 in matrix.suspect]
    if suspect:
        notes.append("rows with a missing cell in the source: " + ", ".join(suspect))
    return ReportTable(title, ("code", *heads), labels, rows, notes, marks, "Country")


def _variance_rows(model) -> ReportTable:
    if isinstance(model, FactorModel):
        return variance_table(model)
    return model


def compare_schemes(a, b, top: int = 3, names=("A", "B")) -> ReportTable:
    """Side-by-side variance rows of two analyses plus the cumulative gap.

    ``a`` and ``b`` are fitted models or already-rendered variance tables
    (such as the bundled printed tables), whose strings are used verbatim.
    """
    ta, tb = _variance_rows(a), _variance_rows(b)
    for t in (ta, tb):
        if len(t.row_labels) < top:
            raise ValueError(f"variance table has {len(t.row_labels)} rows, need {top}")
    na, nb = names
    rows = []
    for i in range(top):
        pa, ca = ta.cells[i][0], ta.cells[i][1]
        pb, cb = tb.cells[i][0], tb.cells[i][1]
        rows.append((pa, ca, pb, cb, f"{float(ca) - float(cb):.5f}"))
    last_a, last_b = ta.cells[top - 1][1], tb.cells[top - 1][1]
    notes = [f"cumulative after {top}: {last_a} vs {last_b}"]
    return ReportTable(f"Explained variance: {na} vs {nb}",
                       (f"{na} %", f"{na} cum. %", f"{nb} %", f"{nb} cum. %", "cum. difference"),
                       [str(i + 1) for i in range(top)], rows, notes, label_header="Component")
