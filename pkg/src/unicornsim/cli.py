"""Command-line surface for the simulation pipeline.

Subcommands:

* ``estimate-corr``  prices CSV + basket manifest -> labeled correlation CSV
* ``simulate``       scenario JSON + correlation CSV -> report JSON
* ``compare``        comparison JSON + correlation CSV -> table (JSON + text)
* ``sweep``          sweep JSON + correlation CSV -> CSV series + JSON
* ``serve``          run the HTTP/JSON service

All validation and parse failures exit with code 2 and a diagnostic on
standard error.  Reports are written canonically, so a rerun with the same
inputs and seed is byte-identical.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from . import __version__
from .corr_estimator import estimate_universe, load_baskets, load_prices
from .errors import UnicornSimError
from .mc_engine import ModelMode
from .reports import (
    CompareDocument,
    ScenarioDocument,
    build_manifest,
    canonical_json,
    canonical_json_bytes,
    compare_report,
    comparison_text_table,
    sha256_hex,
    simulate_report,
)
from .scenario_lib import run_probability_sweep, run_size_sweep
from .universe import read_universe, write_universe

#: Environment variable pointing at the default config directory (falls back
#: to the packaged data directory).
CONFIG_DIR_ENV = "UNICORNSIM_CONFIG_DIR"


def default_config_dir() -> Path:
    override = os.environ.get(CONFIG_DIR_ENV)
    if override:
        return Path(override)
    return Path(__file__).resolve().parent / "data"


def _kinds_path_for(sigma_csv: Path) -> Path:
    return sigma_csv.with_name(sigma_csv.stem + "_kinds.json")


def _load_universe(sigma_csv: str):
    path = Path(sigma_csv)
    universe = read_universe(path, _kinds_path_for(path))
    return universe, sha256_hex(path.read_bytes())


def _write_report(report: dict, out_path: str | None) -> None:
    payload = canonical_json_bytes(report) + b"\n"
    if out_path:
        Path(out_path).write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)


def cmd_estimate_corr(args) -> int:
    prices = load_prices(args.prices_csv)
    baskets = load_baskets(args.baskets_json)
    universe, repair = estimate_universe(prices, baskets, eps=args.eps)
    out_csv = Path(args.out)
    write_universe(universe, out_csv, _kinds_path_for(out_csv))
    manifest = build_manifest(
        command="estimate-corr",
        seed=0,
        iterations=0,
        mode="n/a",
        inputs={
            "prices_sha256": sha256_hex(Path(args.prices_csv).read_bytes()),
            "baskets_sha256": sha256_hex(Path(args.baskets_json).read_bytes()),
        },
        outputs=["sigma_csv", "kinds_json"],
    )
    summary = {
        "repair": {
            "changed": repair.changed,
            "min_eigenvalue_before": repair.min_eigenvalue_before,
            "max_abs_change": repair.max_abs_change,
        },
        "groups": len(universe.groups),
        "manifest": manifest,
    }
    print(canonical_json(summary))
    return 0


def cmd_simulate(args) -> int:
    universe, sigma_sha = _load_universe(args.sigma_csv)
    doc = json.loads(Path(args.scenario_json).read_text())
    scenario = ScenarioDocument(doc).with_overrides(
        iterations=args.iters, seed=args.seed, mode=args.mode
    )
    report = simulate_report(scenario, universe, sigma_sha, workers=args.workers)
    _write_report(report, args.out)
    return 0


def cmd_compare(args) -> int:
    universe, sigma_sha = _load_universe(args.sigma_csv)
    doc = json.loads(Path(args.scenario_set_json).read_text())
    request = CompareDocument(doc)
    report = compare_report(request, universe, sigma_sha, workers=args.workers)
    _write_report(report, args.out)
    if args.text or not args.out:
        print(comparison_text_table(report), file=sys.stderr if args.out else sys.stdout)
    return 0


def _sweep_series_rows(series_by_label, x_key: str, mode: str):
    for label, points in series_by_label.items():
        for point in points:
            row = {"label": label, "mode": mode, x_key: point[x_key]}
            row.update(
                {k: v for k, v in point.items() if k != x_key}
            )
            yield row


def cmd_sweep(args) -> int:
    universe, sigma_sha = _load_universe(args.sigma_csv)
    doc = json.loads(Path(args.sweep_json).read_text())
    kind = doc.get("kind")
    iterations = int(doc.get("iterations", 100_000))
    seed = int(doc.get("seed", 0))
    rows: list[dict] = []
    if kind == "probability":
        p_values = [float(p) for p in doc["p_values"]]
        modes = [ModelMode(m) for m in doc.get("modes", ["uncorrelated", "multi_factor"])]
        series = run_probability_sweep(
            p_values,
            universe,
            iterations,
            seed,
            n=int(doc.get("n", 40)),
            modes=modes,
            workers=args.workers,
        )
        for mode, points in series.items():
            rows.extend(_sweep_series_rows({"homogeneous": points}, "p", mode.value))
    elif kind == "size":
        from .reports import composition_from_dict

        comps = [
            composition_from_dict(str(e["label"]), e["composition"])
            for e in doc["portfolios"]
        ]
        sizes = [int(s) for s in doc["sizes"]]
        mode = ModelMode(doc.get("mode", "multi_factor"))
        series = run_size_sweep(
            comps,
            sizes,
            universe,
            iterations,
            seed,
            mode=mode,
            workers=args.workers,
            assignment_replicates=int(doc.get("replicates", 1)),
        )
        rows.extend(_sweep_series_rows(series, "size", mode.value))
    else:
        raise UnicornSimError(f"unknown sweep kind {kind!r}; expected 'probability' or 'size'")

    sweep_sha = sha256_hex(canonical_json_bytes(doc))
    manifest = build_manifest(
        command="sweep",
        seed=seed,
        iterations=iterations,
        mode=str(doc.get("mode", "per-series")),
        inputs={"sweep_sha256": sweep_sha, "sigma_sha256": sigma_sha},
        outputs=["series_csv", "series_json"],
    )
    payload = {"schema_version": 1, "kind": kind, "series": rows, "manifest": manifest}

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    json_path = out_dir / f"sweep_{kind}.json"
    json_path.write_text(canonical_json(payload) + "\n")
    csv_path = out_dir / f"sweep_{kind}.csv"
    fieldnames = sorted({key for row in rows for key in row})
    lead = [k for k in ("label", "mode", "size", "p") if k in fieldnames]
    fieldnames = lead + [k for k in fieldnames if k not in lead]
    with open(csv_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    print(f"wrote {json_path} and {csv_path}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    config_dir = default_config_dir()
    sigma_csv = Path(args.sigma_csv) if args.sigma_csv else config_dir / "fixture_sigma.csv"
    rules_json = Path(args.rules_json) if args.rules_json else None
    ui_dir = Path(args.ui_dir) if args.ui_dir else None
    app = create_app(sigma_csv=sigma_csv, rules_json=rules_json, ui_dir=ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unicornsim",
        description="Correlated venture portfolio outlier simulation",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate-corr", help="estimate the factor correlation matrix")
    p.add_argument("prices_csv", help="CSV with a 'date' column plus one column per ticker")
    p.add_argument("baskets_json", help="manifest mapping group -> {kind, tickers}")
    p.add_argument("-o", "--out", required=True, help="output correlation CSV path")
    p.add_argument("--eps", type=float, default=1e-10, help="PSD repair eigenvalue floor")
    p.set_defaults(func=cmd_estimate_corr)

    p = sub.add_parser("simulate", help="simulate one scenario")
    p.add_argument("scenario_json")
    p.add_argument("sigma_csv")
    p.add_argument("--iters", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--mode", choices=[m.value for m in ModelMode], default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-o", "--out", default=None, help="report path (default: stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="compare portfolios side by side")
    p.add_argument("scenario_set_json")
    p.add_argument("sigma_csv")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-o", "--out", default=None, help="report path (default: stdout)")
    p.add_argument("--text", action="store_true", help="also print the aligned text table")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sweep", help="probability or size sweep")
    p.add_argument("sweep_json")
    p.add_argument("sigma_csv")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("-o", "--out-dir", default=".", help="directory for CSV/JSON series")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("serve", help="run the HTTP/JSON service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--sigma-csv", default=None)
    p.add_argument("--rules-json", default=None)
    p.add_argument("--ui-dir", default=None, help="serve a built web UI from this directory")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UnicornSimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
