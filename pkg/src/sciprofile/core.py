"""Domain types and profile arithmetic.

A profile matrix holds one row per country with that country's output split
across the subject areas of a :class:`SubjectScheme`. Shares are percentages
of the country's output and are stored as given: journals assigned to several
areas make row sums exceed 100, so nothing is renormalized here.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

WORLD_CODE = "WD"

_ISO2 = re.compile(r"[A-Z]{2}\Z")

SCOPUS27_AREAS = (
    "Agricultural and Biological Sciences",
    "Arts and Humanities",
    "Biochemistry, Genetics and Molecular Biology",
    "Business, Management and Accounting",
    "Chemical Engineering",
    "Chemistry",
    "Computer Science",
    "Decision Sciences",
    "Dentistry",
    "Earth and Planetary Sciences",
    "Economics, Econometrics and Finance",
    "Energy",
    "Engineering",
    "Environmental Science",
    "Health Professions",
    "Immunology and Microbiology",
    "Materials Science",
    "Mathematics",
    "Medicine",
    "Multidisciplinary",
    "Neuroscience",
    "Nursing",
    "Pharmacology, Toxicology and Pharmaceutics",
    "Physics and Astronomy",
    "Psychology",
    "Social Sciences",
    "Veterinary",
)

# Short column heads used by the per-factor profile tables, plus known misprints.
SCOPUS27_ALIASES = {
    "agri": "Agricultural and Biological Sciences",
    "agriculture": "Agricultural and Biological Sciences",
    "arte": "Arts and Humanities",
    "arts": "Arts and Humanities",
    "biochem": "Biochemistry, Genetics and Molecular Biology",
    "business": "Business, Management and Accounting",
    "chem-eng": "Chemical Engineering",
    "computer": "Computer Science",
    "decision": "Decision Sciences",
    "earth": "Earth and Planetary Sciences",
    "herat and planetary sciences": "Earth and Planetary Sciences",
    "economics": "Economics, Econometrics and Finance",
    "environmental": "Environmental Science",
    "health": "Health Professions",
    "immunology": "Immunology and Microbiology",
    "material": "Materials Science",
    "materials": "Materials Science",
    "multidisciplinary": "Multidisciplinary",
    "pharma": "Pharmacology, Toxicology and Pharmaceutics",
    "physics": "Physics and Astronomy",
    "social": "Social Sciences",
}

ESI22_AREAS = (
    "Agricultural Sciences",
    "Biology & Biochemistry",
    "Chemistry",
    "Clinical Medicine",
    "Computer Science",
    "Economics & Business",
    "Engineering",
    "Environment/Ecology",
    "Geosciences",
    "Immunology",
    "Materials Science",
    "Mathematics",
    "Microbiology",
    "Molecular Biology & Genetics",
    "Multidisciplinary",
    "Neuroscience & Behavior",
    "Pharmacology & Toxicology",
    "Physics",
    "Plant & Animal Science",
    "Psychiatry/Psychology",
    "Social Sciences, General",
    "Space Science",
)

ESI22_ALIASES = {
    "biology and biochemistry": "Biology & Biochemistry",
    "economics and business": "Economics & Business",
    "environment ecology": "Environment/Ecology",
    "molecular biology and genetics": "Molecular Biology & Genetics",
    "neuroscience and behavior": "Neuroscience & Behavior",
    "pharmacology and toxicology": "Pharmacology & Toxicology",
    "plant and animal science": "Plant & Animal Science",
    "psychiatry psychology": "Psychiatry/Psychology",
    "social sciences": "Social Sciences, General",
}


def normalize_key(text: str) -> str:
    """Lower-case, collapse whitespace, for alias lookup."""
    return " ".join(text.split()).casefold()


@dataclass(frozen=True)
class SubjectScheme:
    """Ordered subject areas plus a variant-spelling map.

    ``aliases`` maps normalized variant spellings to canonical names; canonical
    names themselves always resolve.
    """

    name: str
    areas: tuple[str, ...]
    aliases: dict[str, str] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "areas", tuple(self.areas))
        keys = [normalize_key(a) for a in self.areas]
        if len(set(keys)) != len(keys):
            raise ValueError(f"scheme {self.name!r}: duplicate area names")
        for variant, canonical in self.aliases.items():
            if canonical not in self.areas:
                raise ValueError(f"alias {variant!r} points to unknown area {canonical!r}")

    def __len__(self):
        return len(self.areas)

    def lookup(self) -> dict[str, str]:
        table = {normalize_key(a): a for a in self.areas}
        table.update({normalize_key(k): v for k, v in self.aliases.items()})
        return table

    def index(self, area: str) -> int:
        return self.areas.index(area)


SCOPUS27 = SubjectScheme("scopus27", SCOPUS27_AREAS, SCOPUS27_ALIASES)
ESI22 = SubjectScheme("esi22", ESI22_AREAS, ESI22_ALIASES)
KNOWN_SCHEMES = {s.name: s for s in (SCOPUS27, ESI22)}


@dataclass(frozen=True)
class CountryProfile:
    """One country's share vector (percent of its own output per area).

    ``unclassified`` is the percentage of records without a subject area,
    when the source reports it; it is not part of ``shares``.
    """

    iso2: str
    name: str
    region: str
    shares: tuple[float, ...]
    unclassified: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "shares", tuple(float(s) for s in self.shares))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.shares, dtype=float)

    def share(self, area: str, scheme: SubjectScheme) -> float:
        return self.shares[scheme.index(area)]


@dataclass(frozen=True)
class ProfileMatrix:
    """Countries x subject areas.

    ``suspect`` holds iso2 codes of rows whose source values are known to be
    damaged (dropped or shifted cells); it is metadata and does not take part
    in equality.
    """

    scheme: SubjectScheme
    rows: tuple[CountryProfile, ...]
    kind: str = "shares"
    suspect: frozenset[str] = field(default=frozenset(), compare=False)

    def __post_init__(self):
        if self.kind not in ("shares", "counts"):
            raise ValueError(f"kind must be 'shares' or 'counts', got {self.kind!r}")
        object.__setattr__(self, "rows", tuple(self.rows))
        object.__setattr__(self, "suspect", frozenset(self.suspect))

    def __len__(self):
        return len(self.rows)

    @property
    def codes(self) -> list[str]:
        return [r.iso2 for r in self.rows]

    @property
    def values(self) -> np.ndarray:
        """Row-major ``(n_countries, n_areas)`` array."""
        if not self.rows:
            return np.zeros((0, len(self.scheme)))
        return np.array([r.shares for r in self.rows], dtype=float)

    def row(self, key: str) -> CountryProfile:
        """Find a row by iso2 code or display name."""
        for r in self.rows:
            if r.iso2 == key or r.name == key:
                return r
        raise KeyError(key)

    def without_world(self) -> ProfileMatrix:
        return self.select([r.iso2 for r in self.rows if r.iso2 != WORLD_CODE])

    def select(self, keys: Iterable[str]) -> ProfileMatrix:
        rows = tuple(self.row(k) for k in keys)
        return ProfileMatrix(self.scheme, rows, self.kind,
                             self.suspect & {r.iso2 for r in rows})

    def to_shares(self) -> ProfileMatrix:
        """Convert a counts matrix to percent-of-row-total shares."""
        if self.kind == "shares":
            return self
        rows = []
        for r in self.rows:
            total = sum(r.shares)
            if total <= 0:
                raise ValueError(f"{r.iso2}: row total is zero, cannot convert to shares")
            rows.append(CountryProfile(r.iso2, r.name, r.region,
                                       [100.0 * s / total for s in r.shares], r.unclassified))
        return ProfileMatrix(self.scheme, rows, "shares", self.suspect)


@dataclass
class ValidationReport:
    errors: list[tuple[str, str]] = field(default_factory=list)
    warnings: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def lines(self) -> list[str]:
        out = [f"error\t{rid}\t{msg}" for rid, msg in self.errors]
        out += [f"warning\t{rid}\t{msg}" for rid, msg in self.warnings]
        return out


ROW_SUM_WARN = (95.0, 160.0)
UNCLASSIFIED_WARN = 50.0


def validate_profile(matrix: ProfileMatrix) -> ValidationReport:
    """Collect every problem in ``matrix`` without raising."""
    report = ValidationReport()
    n_areas = len(matrix.scheme)
    seen = set()
    for i, r in enumerate(matrix.rows):
        rid = r.iso2 or f"row {i + 1}"
        if not _ISO2.match(r.iso2):
            report.errors.append((rid, f"malformed iso2 code {r.iso2!r}"))
        if r.iso2 in seen:
            report.errors.append((rid, "duplicate iso2 code"))
        seen.add(r.iso2)
        if len(r.shares) != n_areas:
            report.errors.append((rid, f"expected {n_areas} values, got {len(r.shares)}"))
        bad = [s for s in r.shares if not math.isfinite(s)]
        if bad:
            report.errors.append((rid, "non-finite value"))
        neg = [s for s in r.shares if s < 0]
        if neg:
            report.errors.append((rid, f"negative value {min(neg)}"))
        if matrix.kind == "shares":
            over = [s for s in r.shares if s > 100]
            if over:
                report.errors.append((rid, f"share above 100%: {max(over)}"))
            total = sum(r.shares)
            lo, hi = ROW_SUM_WARN
            if not bad and not lo <= total <= hi:
                report.warnings.append((rid, f"row sum {total:.1f} outside [{lo:g}, {hi:g}]"))
        if r.unclassified is not None and r.unclassified > UNCLASSIFIED_WARN:
            report.warnings.append((rid, f"{r.unclassified:g}% of records unclassified"))
        if r.iso2 in matrix.suspect:
            report.warnings.append((rid, "source row is damaged (missing or shifted cell)"))
    return report


def world_profile(matrix: ProfileMatrix, weights: Sequence[float] | None = None) -> CountryProfile:
    """Weighted mean of the row share vectors, tagged with the world code."""
    if not matrix.rows:
        raise ValueError("cannot build a world profile from an empty matrix")
    values = matrix.values
    if weights is None:
        w = np.ones(len(matrix.rows))
    else:
        w = np.asarray(weights, dtype=float)
        if w.shape != (len(matrix.rows),):
            raise ValueError(f"expected {len(matrix.rows)} weights, got {w.size}")
        if np.any(w < 0):
            raise ValueError("weights must be non-negative")
        if not np.any(w > 0):
            raise ValueError("weights are all zero")
    # exactly rounded sums keep the result independent of row order
    total = math.fsum(w)
    mean = [math.fsum(w * values[:, j]) / total for j in range(values.shape[1])]
    return CountryProfile(WORLD_CODE, "World", "World", mean)


def specialization_index(country: CountryProfile, world: CountryProfile) -> np.ndarray:
    """Country share divided by world share, area by area.

    Areas where the world share is zero have no defined index and come back
    as NaN.
    """
    c = country.as_array()
    w = world.as_array()
    if c.shape != w.shape:
        raise ValueError(f"scheme mismatch: {c.size} areas vs {w.size}")
    out = np.full(c.shape, np.nan)
    defined = w != 0
    out[defined] = c[defined] / w[defined]
    return out
