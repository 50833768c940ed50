"""``iontrap-ut <mode> --config <path> [--out <path>] [--format csv|json]``.

Exit status: 0 success, 1 validation failure, 2 configuration error.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import logging
import math
import sys
from pathlib import Path

from . import __version__
from .config import FORMATS, MODES, ConfigError, RunConfig, load_config
from .dynamics import TimeSeries, run_evolution
from .fockspace import Truncation
from .spectral import solve_eigensystem
from .validation import compare_all, run_checks

log = logging.getLogger("iontrap_ut")

TIMESERIES_COLUMNS = ("t", "p_excited", "inversion", "mean_n", "norm_defect")


def fmt(x) -> str:
    """12 significant digits."""
    return f"{float(x):.12g}"


def _manifest(config: RunConfig | None) -> dict:
    return {"artifact_version": __version__, "config": config.manifest() if config else None}


def _json_float(x):
    x = float(x)
    return x if math.isfinite(x) else None


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _sidecar(path, config):
    _write_json(str(path) + ".manifest.json", _manifest(config))


def write_timeseries(ts: TimeSeries, format: str, path, config: RunConfig | None = None):
    """CSV with columns ``t,p_excited,inversion,mean_n,norm_defect`` or JSON with a run manifest.

    CSV output is accompanied by ``<path>.manifest.json``.
    """
    if format == "csv":
        rows = zip(ts.times, ts.p_excited, ts.inversion, ts.mean_n, ts.norm_defect)
        _write_csv(path, TIMESERIES_COLUMNS, ([fmt(v) for v in row] for row in rows))
        _sidecar(path, config)
    elif format == "json":
        payload = {name: [float(v) for v in getattr(ts, name)] for name in
                   ("times", "p_excited", "inversion", "mean_n", "norm_defect")}
        payload["valid"] = bool(ts.valid)
        payload["leakage"] = float(ts.leakage)
        payload["run_manifest"] = _manifest(config)
        _write_json(path, payload)
    else:
        raise ValueError(f"unknown format {format!r}")


def write_spectrum(eigensystem, format, path, config=None):
    header = ("branch", "index", "lambda", "residual", "converged")
    rows = [(q.branch.value, q.index, q.lambda_l, q.residual, q.converged) for q in eigensystem.pairs()]
    if format == "csv":
        _write_csv(path, header, ((b, i, fmt(L), fmt(r), int(c)) for b, i, L, r, c in rows))
        _sidecar(path, config)
    else:
        _write_json(path, {
            "eigenpairs": [dict(zip(header, (b, i, L, r, bool(c)))) for b, i, L, r, c in rows],
            "run_manifest": _manifest(config),
        })


def write_checks(checks, format, path, config=None):
    header = ("check", "passed", "value", "tolerance", "detail")
    status = {True: "pass", False: "fail", None: "info"}
    if format == "csv":
        _write_csv(path, header, (
            (c.name, status[c.passed], fmt(c.value), "" if c.tolerance is None else fmt(c.tolerance), c.detail)
            for c in checks
        ))
        _sidecar(path, config)
    else:
        _write_json(path, {
            "checks": [
                {"check": c.name, "passed": c.passed, "value": _json_float(c.value),
                 "tolerance": c.tolerance, "detail": c.detail}
                for c in checks
            ],
            "run_manifest": _manifest(config),
        })


def write_comparisons(reports, format, path, config=None):
    header = ("comparison", "max_state_deviation", "max_observable_deviation")
    if format == "csv":
        _write_csv(path, header, (
            (name, fmt(r.max_state_deviation), fmt(r.max_observable_deviation)) for name, r in reports.items()
        ))
        _sidecar(path, config)
    else:
        _write_json(path, {
            "comparisons": {
                name: {
                    "max_state_deviation": _json_float(r.max_state_deviation),
                    "max_observable_deviation": _json_float(r.max_observable_deviation),
                    "per_time_deviations": [float(v) for v in r.per_time_deviations],
                }
                for name, r in reports.items()
            },
            "run_manifest": _manifest(config),
        })


def dispatch(config: RunConfig) -> int:
    p = config.params
    trunc = Truncation(config.truncation)
    out = config.output_path or f"iontrap_{config.mode}.{config.output_format}"
    log.info("mode=%s eta=%g nu=%g omega=%g N=%d -> %s", config.mode, p.eta, p.nu, p.omega, trunc.dim, out)

    if config.mode == "spectrum":
        write_spectrum(solve_eigensystem(p, trunc), config.output_format, out, config)
        return 0
    if config.mode == "evolve":
        ts = run_evolution(p, config.initial, trunc, config.t_grid)
        write_timeseries(ts, config.output_format, out, config)
        if not ts.valid:
            log.error("eigenbasis leakage %.3e: run marked invalid", ts.leakage)
            return 1
        return 0
    if config.mode == "validate":
        checks = run_checks(p, trunc, config.t_grid)
        write_checks(checks, config.output_format, out, config)
        failed = [c.name for c in checks if c.passed is False]
        for c in checks:
            log.info("%-28s %s value=%.3e", c.name, {True: "PASS", False: "FAIL", None: "INFO"}[c.passed], c.value)
        return 1 if failed else 0
    if config.mode == "compare":
        reports = compare_all(p, config.initial, trunc, config.t_grid)
        write_comparisons(reports, config.output_format, out, config)
        return 0
    raise ConfigError(f"mode: unknown mode {config.mode!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="iontrap-ut", description=__doc__.splitlines()[0])
    ap.add_argument("mode", choices=MODES)
    ap.add_argument("--config", required=True, help="JSON run configuration")
    ap.add_argument("--out", help="output path (overrides output_path)")
    ap.add_argument("--format", choices=FORMATS, help="output format (overrides output_format)")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = load_config(args.config)
    except OSError as exc:
        print(f"iontrap-ut: cannot read config: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"iontrap-ut: config error: {exc}", file=sys.stderr)
        return 2
    overrides = {"mode": args.mode}
    if args.out:
        overrides["output_path"] = args.out
    if args.format:
        overrides["output_format"] = args.format
    config = dataclasses.replace(config, **overrides)
    out = Path(config.output_path or f"iontrap_{config.mode}.{config.output_format}")
    if out.parent and not out.parent.exists():
        print(f"iontrap-ut: output directory does not exist: {out.parent}", file=sys.stderr)
        return 2
    return dispatch(config)


if __name__ == "__main__":
    sys.exit(main())
