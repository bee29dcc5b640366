"""Domain types for the factor universe, deals, and portfolios.

The factor universe is an ordered list of group labels (sectors, geographies,
founder types) together with the correlation matrix over those groups.  Group
order is significant: it fixes the row/column order of the correlation matrix
and of every loading vector built against the universe.

Serialization is a labeled square-matrix CSV (header row and first column hold
group labels) plus a JSON sidecar mapping each label to its kind.  The same
format is produced by the correlation-estimation pipeline and consumed here.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import KindMismatch, UnknownGroup, ValidationError

#: Entries of an estimated correlation matrix may dip this far below the PSD
#: boundary before construction refuses them (run ensure_psd first).
PSD_EIGENVALUE_TOLERANCE = 1e-8

#: Kind weights must sum to one within this tolerance.
WEIGHT_SUM_TOLERANCE = 1e-12


class GroupKind(str, Enum):
    SECTOR = "sector"
    GEOGRAPHY = "geography"
    FOUNDER_TYPE = "founder_type"


@dataclass(frozen=True)
class Group:
    label: str
    kind: GroupKind


@dataclass(frozen=True)
class FactorUniverse:
    """Ordered factor groups plus the correlation matrix over them."""

    groups: tuple[Group, ...]
    sigma: np.ndarray

    def __post_init__(self):
        labels = [g.label for g in self.groups]
        if len(set(labels)) != len(labels):
            raise ValidationError("group labels must be unique")
        sigma = np.asarray(self.sigma, dtype=float)
        k = len(self.groups)
        if sigma.shape != (k, k):
            raise ValidationError(
                f"sigma shape {sigma.shape} does not match {k} groups"
            )
        if not np.allclose(sigma, sigma.T, atol=1e-12):
            raise ValidationError("sigma must be symmetric")
        if not np.allclose(np.diag(sigma), 1.0, atol=1e-12):
            raise ValidationError("sigma must have a unit diagonal")
        if np.any(np.abs(sigma) > 1.0 + 1e-12):
            raise ValidationError("sigma entries must lie in [-1, 1]")
        min_eig = float(np.linalg.eigvalsh(sigma).min())
        if min_eig < -PSD_EIGENVALUE_TOLERANCE:
            raise ValidationError(
                f"sigma is not positive semidefinite (min eigenvalue {min_eig:.3e}); "
                "repair it with corr_estimator.ensure_psd first"
            )
        sigma = sigma.copy()
        sigma.setflags(write=False)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(
            self, "_index", {g.label: (i, g.kind) for i, g in enumerate(self.groups)}
        )

    @property
    def size(self) -> int:
        return len(self.groups)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(g.label for g in self.groups)

    def labels_of_kind(self, kind: GroupKind) -> tuple[str, ...]:
        return tuple(g.label for g in self.groups if g.kind == kind)

    def index_of(self, label: str, expected_kind: GroupKind) -> int:
        """Resolve a label to its matrix index, checking the group kind."""
        entry = self._index.get(label)
        if entry is None:
            raise UnknownGroup(f"group {label!r} is not in the universe")
        idx, kind = entry
        if kind != expected_kind:
            raise KindMismatch(
                f"group {label!r} has kind {kind.value}, expected {expected_kind.value}"
            )
        return idx


@dataclass(frozen=True)
class KindWeights:
    """Relative contribution of each group kind to a deal's loading vector."""

    sector: float
    geography: float
    founder: float

    def __post_init__(self):
        for name, value in (
            ("sector", self.sector),
            ("geography", self.geography),
            ("founder", self.founder),
        ):
            if value < 0:
                raise ValidationError(f"{name} weight must be >= 0, got {value}")
        total = self.sector + self.geography + self.founder
        if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise ValidationError(f"kind weights must sum to 1, got {total!r}")


#: The modeling prior used throughout: sector risk dominates, then geography,
#: then founder type.
DEFAULT_KIND_WEIGHTS = KindWeights(sector=0.6, geography=0.3, founder=0.1)

#: Sector-only weights; used when only sector factors carry dependence.
SECTOR_ONLY_WEIGHTS = KindWeights(sector=1.0, geography=0.0, founder=0.0)


@dataclass(frozen=True)
class Affiliation:
    """One group label per kind; the part of a deal the factor model sees."""

    sector: str
    geography: str
    founder: str


@dataclass(frozen=True)
class Deal:
    """A single investment: standalone success probability plus affiliations."""

    id: str
    p: float
    sector: str
    geography: str
    founder: str

    def __post_init__(self):
        if not (0.0 < self.p < 1.0):
            raise ValidationError(
                f"deal {self.id!r}: success probability must be in (0, 1), got {self.p}"
            )


@dataclass(frozen=True)
class Portfolio:
    """A labeled list of deals; the unit of simulation."""

    label: str
    deals: tuple[Deal, ...]

    def __post_init__(self):
        if not self.deals:
            raise ValidationError(f"portfolio {self.label!r} has no deals")
        object.__setattr__(self, "deals", tuple(self.deals))

    @property
    def size(self) -> int:
        return len(self.deals)

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([d.p for d in self.deals], dtype=float)


def cross_product_affiliations(universe: FactorUniverse) -> list[Affiliation]:
    """One synthetic member per (sector, geography, founder) combination.

    This is the default calibration universe: reproducible and independent of
    any particular portfolio's composition.
    """
    sectors = universe.labels_of_kind(GroupKind.SECTOR)
    geographies = universe.labels_of_kind(GroupKind.GEOGRAPHY)
    founders = universe.labels_of_kind(GroupKind.FOUNDER_TYPE)
    if not (sectors and geographies and founders):
        raise ValidationError(
            "cross-product calibration universe needs at least one group per kind"
        )
    return [
        Affiliation(sector=s, geography=g, founder=f)
        for s in sectors
        for g in geographies
        for f in founders
    ]


# ---------------------------------------------------------------------------
# Labeled CSV + kind-map sidecar serialization
# ---------------------------------------------------------------------------

#: Matrix entries are written with this many significant digits, enough to
#: round-trip within 1e-12 for correlation-scaled values.
CSV_SIGNIFICANT_DIGITS = 12


def write_universe(universe: FactorUniverse, csv_path, kinds_path) -> None:
    """Write the correlation matrix CSV and its kind-map sidecar."""
    labels = universe.labels
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["group", *labels])
        for i, label in enumerate(labels):
            row = [
                format(universe.sigma[i, j], f".{CSV_SIGNIFICANT_DIGITS}g")
                for j in range(universe.size)
            ]
            writer.writerow([label, *row])
    kinds = {"groups": [{"label": g.label, "kind": g.kind.value} for g in universe.groups]}
    Path(kinds_path).write_text(json.dumps(kinds, indent=2) + "\n")


def read_universe(csv_path, kinds_path) -> FactorUniverse:
    """Load a universe from the labeled CSV and kind-map sidecar."""
    with open(csv_path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or len(rows[0]) < 2 or rows[0][0] != "group":
        raise ValidationError(f"{csv_path}: expected a header row starting with 'group'")
    labels = rows[0][1:]
    k = len(labels)
    matrix = np.empty((k, k), dtype=float)
    if len(rows) - 1 != k:
        raise ValidationError(
            f"{csv_path}: expected {k} matrix rows, found {len(rows) - 1}"
        )
    for i, row in enumerate(rows[1:]):
        if row[0] != labels[i]:
            raise ValidationError(
                f"{csv_path}: row label {row[0]!r} does not match column label {labels[i]!r}"
            )
        if len(row) != k + 1:
            raise ValidationError(f"{csv_path}: row {i + 2} has {len(row)} fields")
        matrix[i] = [float(v) for v in row[1:]]

    kinds_doc = json.loads(Path(kinds_path).read_text())
    kind_entries = kinds_doc.get("groups")
    if not isinstance(kind_entries, list):
        raise ValidationError(f"{kinds_path}: expected a 'groups' list")
    kind_by_label = {e["label"]: GroupKind(e["kind"]) for e in kind_entries}
    missing = [lab for lab in labels if lab not in kind_by_label]
    if missing:
        raise ValidationError(f"{kinds_path}: no kind recorded for {missing}")
    groups = tuple(Group(label=lab, kind=kind_by_label[lab]) for lab in labels)
    return FactorUniverse(groups=groups, sigma=matrix)
