"""Command-line entry point: ``plasmonshape <verb> [options]``."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import __version__, config, experiments, kernels
from .errors import ConfigError, PlasmonShapeError

VERBS = ("forward", "resonance-scan", "np-spectrum", "ssf-scan", "svd", "reconstruct", "sample", "repro-table")


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    if isinstance(v, (complex, np.complexfloating)):
        return f"{complex(v).real:.17g}{complex(v).imag:+.17g}j"
    return v


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return [complex(obj).real, complex(obj).imag]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def write_result(result: experiments.Result, out: str, manifest: dict) -> list:
    os.makedirs(out, exist_ok=True)
    files = []
    for name, (header, rows) in result.tables.items():
        path = os.path.join(out, f"{name}.csv")
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            for row in rows:
                w.writerow([_fmt(v) for v in row])
        files.append(os.path.basename(path))
    manifest = dict(manifest, files=files, summary=_jsonable(result.summary))
    with open(os.path.join(out, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump(_jsonable(manifest), fh, indent=2, sort_keys=True)
    return files


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="plasmonshape", description="Plasmonic shape sensitivity and reconstruction.")
    p.add_argument("verb", choices=VERBS)
    p.add_argument("table", nargs="?", type=int, choices=(1, 2, 3, 4), help="table number for repro-table")
    p.add_argument("--config", help="TOML configuration file")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a config entry")
    p.add_argument("--seed", type=int, help="random seed (default: run.seed)")
    p.add_argument("--out", default="out", help="output directory (default: out)")
    p.add_argument("--workers", type=int, default=1, help="worker processes for repro-table 2")
    p.add_argument("--oracle", action="store_true", help="compare forward with the series solution (disk only)")
    return p


def run(args) -> experiments.Result:
    cfg = config.load(args.config, args.set)
    seed = cfg["run"]["seed"] if args.seed is None else args.seed
    if args.seed is not None:
        cfg["run"]["seeds"] = [args.seed]
    v = args.verb
    if v == "forward":
        res = experiments.run_forward(cfg, args.oracle)
    elif v == "resonance-scan":
        res = experiments.run_resonance_scan(cfg)
    elif v == "np-spectrum":
        res = experiments.run_np_spectrum(cfg)
    elif v == "ssf-scan":
        res = experiments.run_ssf_scan(cfg)
    elif v == "svd":
        res = experiments.run_svd(cfg)
    elif v == "reconstruct":
        res = experiments.run_reconstruct(cfg, seed)
    elif v == "sample":
        res = experiments.run_sample(cfg, seed)
    else:
        if args.table is None:
            raise ConfigError("repro-table needs a table number (1-4)")
        res = experiments.repro_table(args.table, cfg, args.workers)
    manifest = {"verb": v, "table": args.table, "seed": seed, "version": __version__,
                "backend": kernels.BACKEND, "config": cfg}
    write_result(res, args.out, manifest)
    return res


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on usage errors
    try:
        res = run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 2
    except PlasmonShapeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    print(json.dumps(_jsonable(res.summary), indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
