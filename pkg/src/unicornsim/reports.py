"""Report schema, run manifests, scenario documents, and text tables.

Every simulation output is a JSON report carrying the outcome histogram, the
summary statistics, and a run manifest (command, input content hashes, seed,
iteration count, mode, engine version) sufficient to reproduce it bit for
bit.  Reports are serialized canonically — sorted keys, fixed separators —
so equal runs yield byte-identical files regardless of which surface (CLI or
HTTP service) produced them; the manifest therefore records logical output
names, never filesystem paths.
"""
from __future__ import annotations

import hashlib
import json
from typing import Mapping, Sequence

from . import __version__ as ENGINE_VERSION
from .errors import ValidationError
from .factor_model import LoadingSet
from .mc_engine import (
    ModelMode,
    OutcomeDistribution,
    PortfolioStats,
    SimConfig,
    distribution_stats,
    simulate,
)
from .prob_assigner import AssignmentRules, default_rules, rules_from_dict, rules_to_dict
from .scenario_lib import (
    Composition,
    build_portfolio,
    loadings_for_mode,
    realize_portfolio,
    _stream,
)
from .universe import Deal, FactorUniverse, Portfolio

SCHEMA_VERSION = 1

#: Simulation requests above this iteration ceiling are rejected outright.
DEFAULT_MAX_ITERATIONS = 10_000_000


def canonical_json(payload) -> str:
    """Deterministic JSON encoding; the byte-identity contract for reports."""
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False)


def canonical_json_bytes(payload) -> bytes:
    return canonical_json(payload).encode("ascii")


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def distribution_to_dict(dist: OutcomeDistribution) -> dict:
    return {
        "counts": [int(c) for c in dist.counts],
        "M": dist.iterations,
        "N": dist.n_deals,
    }


def stats_to_dict(stats: PortfolioStats) -> dict:
    return {
        "expected_u": stats.expected_u,
        "p_u_eq_0": stats.p_u_eq_0,
        "p_u_le_1": stats.p_u_le_1,
        "p_u_le_2": stats.p_u_le_2,
        "e_u_given_ge_1": stats.e_u_given_ge_1,
        "e_u_given_ge_2": stats.e_u_given_ge_2,
        "e_u_given_ge_3": stats.e_u_given_ge_3,
    }


def build_manifest(
    command: str,
    seed: int,
    iterations: int,
    mode: str,
    inputs: Mapping[str, str],
    outputs: Sequence[str] = ("report",),
) -> dict:
    return {
        "command": command,
        "engine_version": ENGINE_VERSION,
        "schema_version": SCHEMA_VERSION,
        "seed": seed,
        "M": iterations,
        "mode": mode,
        "inputs": dict(inputs),
        "outputs": list(outputs),
    }


# ---------------------------------------------------------------------------
# Scenario documents
# ---------------------------------------------------------------------------


def composition_from_dict(label: str, doc: Mapping) -> Composition:
    try:
        return Composition(
            label=label,
            size=int(doc["size"]),
            founder_mix=dict(doc["founder_mix"]),
            sector_mix=dict(doc["sector_mix"]),
            geography_mix=dict(doc["geography_mix"]),
        )
    except KeyError as exc:
        raise ValidationError(f"composition {label!r}: missing field {exc}")


def composition_to_dict(comp: Composition) -> dict:
    return {
        "size": comp.size,
        "founder_mix": dict(comp.founder_mix),
        "sector_mix": dict(comp.sector_mix),
        "geography_mix": dict(comp.geography_mix),
    }


class ScenarioDocument:
    """Parsed single-portfolio simulation request.

    Fields: ``label``, ``composition``, optional ``probabilities`` (either
    ``{"homogeneous_p": x}`` or ``{"rules": {...}}``; defaults to the shipped
    assignment rules), ``mode``, ``iterations``, ``seed``.
    """

    def __init__(self, doc: Mapping):
        if not isinstance(doc, Mapping):
            raise ValidationError("scenario document must be a JSON object")
        try:
            self.label = str(doc["label"])
            self.composition = composition_from_dict(self.label, doc["composition"])
        except KeyError as exc:
            raise ValidationError(f"scenario document: missing field {exc}")
        self.mode = ModelMode(doc.get("mode", ModelMode.MULTI_FACTOR.value))
        self.iterations = int(doc.get("iterations", 100_000))
        self.seed = int(doc.get("seed", 0))
        probabilities = doc.get("probabilities") or {}
        self.homogeneous_p = probabilities.get("homogeneous_p")
        if self.homogeneous_p is not None:
            self.homogeneous_p = float(self.homogeneous_p)
            self.rules = None
        elif "rules" in probabilities:
            self.rules = rules_from_dict(probabilities["rules"])
        else:
            self.rules = default_rules()

    def with_overrides(self, iterations=None, seed=None, mode=None) -> "ScenarioDocument":
        if iterations is not None:
            self.iterations = int(iterations)
        if seed is not None:
            self.seed = int(seed)
        if mode is not None:
            self.mode = ModelMode(mode)
        return self

    def canonical_dict(self) -> dict:
        """Normalized form used for the manifest's scenario hash."""
        probabilities: dict
        if self.homogeneous_p is not None:
            probabilities = {"homogeneous_p": self.homogeneous_p}
        else:
            probabilities = {"rules": rules_to_dict(self.rules)}
        return {
            "label": self.label,
            "composition": composition_to_dict(self.composition),
            "probabilities": probabilities,
            "mode": self.mode.value,
            "iterations": self.iterations,
            "seed": self.seed,
        }

    def realize(self) -> Portfolio:
        if self.homogeneous_p is not None:
            affiliations = realize_portfolio(
                self.composition, _stream(self.seed, "attributes", self.composition.size)
            )
            deals = tuple(
                Deal(
                    id=f"{self.label}-{i:03d}",
                    p=self.homogeneous_p,
                    sector=a.sector,
                    geography=a.geography,
                    founder=a.founder,
                )
                for i, a in enumerate(affiliations)
            )
            return Portfolio(label=self.label, deals=deals)
        return build_portfolio(self.composition, self.rules, self.seed)


def simulate_report(
    scenario: ScenarioDocument,
    universe: FactorUniverse,
    sigma_sha256: str,
    workers: int = 1,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> dict:
    """Run one scenario and assemble the full report document."""
    if scenario.iterations > max_iterations:
        raise ValidationError(
            f"iterations {scenario.iterations} exceed the ceiling {max_iterations}"
        )
    portfolio = scenario.realize()
    loadings = loadings_for_mode(portfolio.deals, universe, scenario.mode)
    config = SimConfig(
        iterations=scenario.iterations,
        seed=scenario.seed,
        model_mode=scenario.mode,
        workers=workers,
    )
    dist = simulate(portfolio, loadings, universe, config)
    stats = distribution_stats(dist)
    scenario_sha = sha256_hex(canonical_json_bytes(scenario.canonical_dict()))
    return {
        "schema_version": SCHEMA_VERSION,
        "engine_version": ENGINE_VERSION,
        "label": scenario.label,
        "mode": scenario.mode.value,
        "distribution": distribution_to_dict(dist),
        "stats": stats_to_dict(stats),
        "manifest": build_manifest(
            command="simulate",
            seed=scenario.seed,
            iterations=scenario.iterations,
            mode=scenario.mode.value,
            inputs={"scenario_sha256": scenario_sha, "sigma_sha256": sigma_sha256},
        ),
    }


class CompareDocument:
    """Parsed multi-portfolio comparison request.

    Fields: ``label``, ``portfolios`` (list of {label, composition}),
    optional ``probabilities`` rules override, ``mode``, ``iterations``,
    ``seed``.
    """

    def __init__(self, doc: Mapping):
        if not isinstance(doc, Mapping):
            raise ValidationError("comparison document must be a JSON object")
        self.label = str(doc.get("label", "comparison"))
        entries = doc.get("portfolios")
        if not entries:
            raise ValidationError("comparison document needs a 'portfolios' list")
        labels = [str(e.get("label")) for e in entries]
        if len(set(labels)) != len(labels):
            raise ValidationError(f"duplicate portfolio labels: {labels}")
        self.compositions = [
            composition_from_dict(str(e["label"]), e["composition"]) for e in entries
        ]
        probabilities = doc.get("probabilities") or {}
        if "rules" in probabilities:
            self.rules = rules_from_dict(probabilities["rules"])
        else:
            self.rules = default_rules()
        self.mode = ModelMode(doc.get("mode", ModelMode.MULTI_FACTOR.value))
        self.iterations = int(doc.get("iterations", 100_000))
        self.seed = int(doc.get("seed", 0))

    def canonical_dict(self) -> dict:
        return {
            "label": self.label,
            "portfolios": [
                {"label": c.label, "composition": composition_to_dict(c)}
                for c in self.compositions
            ],
            "probabilities": {"rules": rules_to_dict(self.rules)},
            "mode": self.mode.value,
            "iterations": self.iterations,
            "seed": self.seed,
        }


def compare_report(
    request: CompareDocument,
    universe: FactorUniverse,
    sigma_sha256: str,
    workers: int = 1,
    max_iterations: int = DEFAULT_MAX_ITERATIONS,
) -> dict:
    """Simulate each portfolio and assemble one comparison report."""
    if request.iterations > max_iterations:
        raise ValidationError(
            f"iterations {request.iterations} exceed the ceiling {max_iterations}"
        )
    rows = []
    for comp in request.compositions:
        portfolio = build_portfolio(comp, request.rules, request.seed)
        loadings = loadings_for_mode(portfolio.deals, universe, request.mode)
        config = SimConfig(
            iterations=request.iterations,
            seed=request.seed,
            model_mode=request.mode,
            workers=workers,
        )
        dist = simulate(portfolio, loadings, universe, config)
        rows.append(
            {
                "label": comp.label,
                "distribution": distribution_to_dict(dist),
                "stats": stats_to_dict(distribution_stats(dist)),
            }
        )
    request_sha = sha256_hex(canonical_json_bytes(request.canonical_dict()))
    return {
        "schema_version": SCHEMA_VERSION,
        "engine_version": ENGINE_VERSION,
        "label": request.label,
        "mode": request.mode.value,
        "results": rows,
        "manifest": build_manifest(
            command="compare",
            seed=request.seed,
            iterations=request.iterations,
            mode=request.mode.value,
            inputs={"scenario_sha256": request_sha, "sigma_sha256": sigma_sha256},
        ),
    }


# ---------------------------------------------------------------------------
# Text rendering (probabilities as one-decimal percents, means to two decimals)
# ---------------------------------------------------------------------------

UNDEFINED_MARK = "—"  # em dash

STAT_ROWS = (
    ("P(U=0)", "p_u_eq_0", "probability"),
    ("P(U<=1)", "p_u_le_1", "probability"),
    ("P(U<=2)", "p_u_le_2", "probability"),
    ("E[U|U>=1]", "e_u_given_ge_1", "mean"),
    ("E[U|U>=2]", "e_u_given_ge_2", "mean"),
    ("E[U|U>=3]", "e_u_given_ge_3", "mean"),
)


def format_stat(value, kind: str) -> str:
    """Probabilities as one-decimal percents, means to two decimals."""
    if value is None:
        return UNDEFINED_MARK
    if kind == "probability":
        return f"{100.0 * value:.1f}%"
    return f"{value:.2f}"


def comparison_text_table(report: Mapping) -> str:
    """Aligned text table: one column per portfolio, six statistic rows."""
    results = report["results"]
    labels = [r["label"] for r in results]
    header = ["statistic", *labels]
    body = []
    for title, key, kind in STAT_ROWS:
        row = [title]
        for r in results:
            row.append(format_stat(r["stats"][key], kind))
        body.append(row)
    widths = [
        max(len(row[i]) for row in [header, *body]) for i in range(len(header))
    ]
    lines = []
    for row in [header, *body]:
        cells = [row[0].ljust(widths[0])] + [
            cell.rjust(widths[i + 1]) for i, cell in enumerate(row[1:])
        ]
        lines.append("  ".join(cells))
    return "\n".join(lines)
