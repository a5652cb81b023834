"""CSV reading/writing for profile matrices and the bundled fixtures.

Matrix CSV layout (UTF-8, RFC 4180 quoting)::

    iso2,name,region,<area 1>,...,<area n>[,unclassified]

The area columns decide the subject scheme: a header that canonicalizes to the
27 Scopus areas is ``scopus27``, to the 22 ESI fields ``esi22``, anything else
becomes a custom scheme named ``custom``.
"""

from __future__ import annotations

import csv
import difflib
import io
import math
from dataclasses import dataclass
from importlib import resources
from typing import TextIO

import numpy as np

from .core import (KNOWN_SCHEMES, SCOPUS27, WORLD_CODE, CountryProfile, ProfileMatrix,
                   SubjectScheme, normalize_key)

META_COLUMNS = ("iso2", "name", "region")
UNCLASSIFIED = "unclassified"


class ParseError(ValueError):
    """Raised for malformed matrix or table input; carries the 1-based line."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def canonicalize_subject(raw: str, scheme: SubjectScheme) -> str:
    """Map a subject-area spelling to the scheme's canonical name.

    Matching ignores case and runs of whitespace. Unknown names raise
    ``KeyError`` with the closest known spelling in the message.
    """
    table = scheme.lookup()
    key = normalize_key(raw)
    if key in table:
        return table[key]
    near = difflib.get_close_matches(key, list(table), n=1, cutoff=0.0)
    hint = f"; nearest is {table[near[0]]!r} (via {near[0]!r})" if near else ""
    raise KeyError(f"unknown subject area {raw!r} for scheme {scheme.name}{hint}")


def detect_scheme(headers: list[str]) -> tuple[SubjectScheme, list[str]]:
    """Return the scheme for ``headers`` and each header's canonical name."""
    for scheme in KNOWN_SCHEMES.values():
        if len(headers) != len(scheme):
            continue
        try:
            names = [canonicalize_subject(h, scheme) for h in headers]
        except KeyError:
            continue
        if set(names) == set(scheme.areas):
            return scheme, names
    names = [" ".join(h.split()) for h in headers]
    return SubjectScheme("custom", names), names


def _number(cell: str, line: int, column: str) -> float:
    text = cell.strip().rstrip("%").strip()
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"non-numeric value {cell!r} in column {column!r}", line) from None
    if not math.isfinite(value):
        raise ParseError(f"non-finite value {cell!r} in column {column!r}", line)
    return value


def parse_matrix(text: str | TextIO, kind: str = "shares") -> ProfileMatrix:
    """Parse matrix CSV into a :class:`ProfileMatrix` (rows in file order)."""
    if isinstance(text, str):
        text = io.StringIO(text)
    reader = csv.reader(text)
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty input: missing header row", 1) from None
    if [h.strip().lower() for h in header[:3]] != list(META_COLUMNS):
        raise ParseError(f"header must start with {','.join(META_COLUMNS)}", 1)
    area_cols = [h.strip() for h in header[3:]]
    has_unclassified = bool(area_cols) and normalize_key(area_cols[-1]) == UNCLASSIFIED
    if has_unclassified:
        area_cols = area_cols[:-1]
    if len(area_cols) < 1:
        raise ParseError("header lists no subject areas", 1)
    scheme, canonical = detect_scheme(area_cols)
    if len(set(canonical)) != len(canonical):
        raise ParseError("header/area mismatch: repeated subject area", 1)
    order = [canonical.index(a) for a in scheme.areas]

    width = len(header)
    rows, seen = [], set()
    for line, cells in enumerate(reader, start=2):
        if not cells or all(not c.strip() for c in cells):
            continue
        if len(cells) != width:
            raise ParseError(f"ragged row: expected {width} fields, got {len(cells)}", line)
        iso2, name, region = (c.strip() for c in cells[:3])
        if iso2 in seen:
            raise ParseError(f"duplicate iso2 code {iso2!r}", line)
        seen.add(iso2)
        values = [_number(c, line, h) for c, h in zip(cells[3:3 + len(area_cols)], area_cols)]
        unclassified = None
        if has_unclassified and cells[-1].strip():
            unclassified = _number(cells[-1], line, UNCLASSIFIED)
        rows.append(CountryProfile(iso2, name, region, [values[i] for i in order], unclassified))
    return ProfileMatrix(scheme, rows, kind)


def format_decimal(value: float) -> str:
    """Shortest text that reads back as exactly ``value``; never exponent form."""
    return np.format_float_positional(value, unique=True, trim="0")


def write_matrix(matrix: ProfileMatrix) -> str:
    """Serialize to canonical CSV; ``parse_matrix`` inverts it exactly."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    with_unclassified = any(r.unclassified is not None for r in matrix.rows)
    header = [*META_COLUMNS, *matrix.scheme.areas]
    if with_unclassified:
        header.append(UNCLASSIFIED)
    writer.writerow(header)
    for r in matrix.rows:
        cells = [r.iso2, r.name, r.region, *(format_decimal(s) for s in r.shares)]
        if with_unclassified:
            cells.append("" if r.unclassified is None else format_decimal(r.unclassified))
        writer.writerow(cells)
    return buf.getvalue()


@dataclass(frozen=True)
class LoadingTable:
    """Per-country factor loadings, one row per country.

    The bundled loadings are all in [0, 1]; tables derived from a fresh
    analysis may hold small negative loadings, so only ``|loading| <= 1``
    and ``sum(loading**2) <= 1`` are enforced.
    """

    labels: tuple[str, ...]
    loadings: np.ndarray
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        values = np.array(self.loadings, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "loadings", values)
        object.__setattr__(self, "labels", tuple(self.labels))
        if values.ndim != 2 or values.shape[0] != len(self.labels):
            raise ValueError("loadings must be a (countries, factors) array matching labels")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate country labels")
        if np.any(np.abs(values) > 1.0 + 1e-9):
            raise ValueError("loading outside [-1, 1]")
        ss = (values**2).sum(axis=1)
        if np.any(ss > 1.0 + 1e-6):
            worst = self.labels[int(ss.argmax())]
            raise ValueError(f"{worst}: squared loadings sum to {ss.max():.6f} > 1")

    @property
    def k(self) -> int:
        return self.loadings.shape[1]

    def __len__(self):
        return len(self.labels)

    def loading(self, label: str, factor: int) -> float:
        """Loading of ``label`` on 1-based ``factor``."""
        return float(self.loadings[self.labels.index(label), factor - 1])


# ----------------------------------------------------------------------------
# Fixtures

FIXTURES = ("table1_world", "table2_sjr_variance", "table3_esi_variance",
            "annexA_loadings", "annexB_f1", "annexB_f2", "annexB_f3", "annexB_all")

# The printed per-factor tables drop one cell in some rows. Each entry names
# the area whose cell is missing; the gap is filled with whatever brings the
# row to 100% (country rows in these tables otherwise sum to 100 +- 0.5).
_ANNEX_B_GAPS = {
    "annexB_f1": {"*": "Mathematics"},
    "annexB_f2": {"RU": "Nursing", "KR": "Pharmacology, Toxicology and Pharmaceutics",
                  "PL": "Pharmacology, Toxicology and Pharmaceutics"},
    "annexB_f3": {"ID": "Dentistry"},
}
# The world row of the first table misses Mathematics too; the other two
# tables print it as 3.8 with every other cell identical.
_WORLD_MATHEMATICS = 3.8


def _data(name: str) -> str:
    return resources.files("sciprofile").joinpath("data").joinpath(name).read_text(encoding="utf-8")


def _load_annex_b(name: str) -> ProfileMatrix:
    gaps = _ANNEX_B_GAPS[name]
    rows, suspect = [], set()
    for rec in csv.DictReader(io.StringIO(_data(f"{name}_printed.csv"))):
        printed = [float(v) for v in rec["values"].split()]
        iso2 = rec["iso2"]
        if len(printed) == len(SCOPUS27) - 1:
            area = gaps.get(iso2, gaps.get("*"))
            if iso2 == WORLD_CODE:
                fill = _WORLD_MATHEMATICS
            else:
                fill = max(0.0, round(100.0 - math.fsum(printed), 1))
            printed.insert(SCOPUS27.index(area), fill)
            suspect.add(iso2)
        elif len(printed) != len(SCOPUS27):
            raise ParseError(f"{name}: {iso2} has {len(printed)} values")
        rows.append(CountryProfile(iso2, rec["name"], rec["region"], printed))
    return ProfileMatrix(SCOPUS27, rows, "shares", suspect)


def annex_b_origin() -> dict[str, int]:
    """iso2 -> number of the per-factor table (1, 2, 3) the country is listed in."""
    out = {}
    for f in (1, 2, 3):
        for code in load_fixture(f"annexB_f{f}").codes:
            if code != WORLD_CODE:
                out[code] = f
    return out


def _load_annex_b_all() -> ProfileMatrix:
    parts = [_load_annex_b(f"annexB_f{f}") for f in (1, 2, 3)]
    rows = [r for p in parts for r in p.rows if r.iso2 != WORLD_CODE]
    rows.append(parts[1].row(WORLD_CODE))
    suspect = set().union(*(p.suspect for p in parts)) - {WORLD_CODE}
    return ProfileMatrix(SCOPUS27, rows, "shares", suspect)


def _load_annex_a() -> LoadingTable:
    reader = csv.reader(io.StringIO(_data("annexA_columns.tsv")), delimiter="\t")
    next(reader)
    columns: list[list[tuple[str, float]]] = [[], [], []]
    for cells in reader:
        for f in range(3):
            name = cells[2 * f].strip()
            # one cell spells it with an accent; the other two columns do not
            name = "Taiwan" if name == "Taiwán" else name
            columns[f].append((name, float(cells[2 * f + 1])))
    labels = [name for name, _ in columns[0]]
    index = {name: i for i, name in enumerate(labels)}
    values = np.zeros((len(labels), 3))
    for f, column in enumerate(columns):
        if sorted(n for n, _ in column) != sorted(labels):
            raise ParseError(f"annexA_loadings: factor {f + 1} column lists different countries")
        for name, v in column:
            values[index[name], f] = v
    return LoadingTable(labels, values, notes=("'Taiwán' in the factor 1 column read as 'Taiwan'",))


def _load_variance(name: str):
    from .tables import ReportTable

    reader = csv.reader(io.StringIO(_data(f"{name}.csv")))
    title, = next(reader)
    columns = next(reader)
    body = list(reader)
    return ReportTable(title, columns[1:], [r[0] for r in body], [r[1:] for r in body],
                       label_header=columns[0])


def load_fixture(name: str):
    """Return a bundled published table by name (see ``FIXTURES``).

    ``table1_world`` and the ``annexB_*`` names give a :class:`ProfileMatrix`,
    ``annexA_loadings`` a :class:`LoadingTable`, the variance tables a
    :class:`~sciprofile.report.ReportTable` of the printed strings.
    ``annexB_all`` stacks the three per-factor tables (35 countries) and keeps
    one world row at the end.
    """
    if name == "table1_world":
        return parse_matrix(_data("table1_world.csv"))
    if name in ("table2_sjr_variance", "table3_esi_variance"):
        return _load_variance(name)
    if name == "annexA_loadings":
        return _load_annex_a()
    if name in _ANNEX_B_GAPS:
        return _load_annex_b(name)
    if name == "annexB_all":
        return _load_annex_b_all()
    raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")


def read_matrix(path, kind: str = "shares") -> ProfileMatrix:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_matrix(fh, kind)
