"""Command-line entry point ``nads``.

    nads --config exp.json [--system ID] [--seed N] [--out report.json] [--csv trace.csv]
    nads --repro ID [--seed N] [--out report.json]
    nads --verify report.json
    nads --list

Exit codes: 0 witnessed / holds / verified / reproduced, 2 refuted at
resolution, 3 inconclusive / not found / exhausted, 1 error (including a
report that fails verification or a catalog table that does not reproduce).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
import time
from typing import Any

from jsonschema import Draft202012Validator

from nads import __version__, catalog
from nads.errors import ConfigError, NadsError
from nads.experiments import EXIT_CODES, KINDS, run_experiment, verify_result, _level_system
from nads.serialize import SCHEMA, decode_certificate, decode_family, decode_spec, encode_family

log = logging.getLogger("nads")

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["experiment"],
    "properties": {
        "schema": {"const": SCHEMA},
        "system": {"anyOf": [{"type": "string"}, {"type": "object"}]},
        "experiment": {"enum": list(KINDS)},
        "params": {"type": "object"},
        "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "budget": {"type": "integer", "minimum": 1},
    },
    "additionalProperties": False,
}


def _validate(cfg: Any) -> None:
    errors = sorted(Draft202012Validator(CONFIG_SCHEMA).iter_errors(cfg), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        path = "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in e.absolute_path)
        raise ConfigError(e.message, path)


def _resolve_system(system: Any):
    if isinstance(system, str):
        try:
            entry = catalog.get(system)
        except KeyError as exc:
            raise ConfigError(str(exc.args[0]), "$.system") from exc
        return system, entry.family
    return None, decode_family(system, "$.system")


def _threads(arg: int | None) -> int:
    if arg is not None:
        return arg
    env = os.environ.get("NADS_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"NADS_THREADS must be an integer, got {env!r}", "$env.NADS_THREADS")
    return 1


def run(config: dict, *, system: str | None = None, seed: int | None = None, threads: int = 1) -> dict:
    """Execute one experiment config and return its report."""
    _validate(config)
    if system is not None:
        config = {**config, "system": system}
    if "system" not in config:
        raise ConfigError("missing system (config 'system' or --system)", "$.system")
    if seed is None:
        if "seed" not in config:
            raise ConfigError("seed is mandatory (config 'seed' or --seed)", "$.seed")
        seed = config["seed"]
    sys_id, fam = _resolve_system(config["system"])
    params = dict(config.get("params", {}))
    if "budget" in config:
        params.setdefault("budget", config["budget"])
    if threads > 1 and config["experiment"] == "property-check":
        params.setdefault("threads", threads)
    t0 = time.perf_counter()
    result = run_experiment(fam, config["experiment"], params, int(seed) % 2**32)
    return {
        "schema": SCHEMA,
        "kind": "run",
        "version": __version__,
        "system": {"id": sys_id, "family": encode_family(fam)},
        "experiment": config["experiment"],
        "params": params,
        "seed": int(seed),
        "outcome": result["outcome"],
        "partial": result["outcome"] in ("not-found", "exhausted"),
        "result": result,
        "timing": {"wall_seconds": time.perf_counter() - t0},
    }


def repro(entry_id: str, seed: int = 0) -> dict:
    """Run a catalog entry's expected-verdict table."""
    try:
        entry = catalog.get(entry_id)
    except KeyError as exc:
        raise ConfigError(str(exc.args[0]), "$.repro") from exc
    rows, times = [], []
    for i, exp in enumerate(entry.table):
        t0 = time.perf_counter()
        result = run_experiment(entry.family, exp.kind, dict(exp.params), seed, f"$.table[{i}].params")
        times.append(time.perf_counter() - t0)
        rows.append(
            {
                "experiment": exp.kind,
                "params": exp.params,
                "expected": exp.expected,
                "outcome": result["outcome"],
                "match": result["outcome"] == exp.expected,
                "result": result,
            }
        )
    return {
        "schema": SCHEMA,
        "kind": "repro",
        "version": __version__,
        "system": {"id": entry_id, "description": entry.description, "family": encode_family(entry.family)},
        "seed": seed,
        "rows": rows,
        "reproduced": all(r["match"] for r in rows),
        "timing": {"wall_seconds": sum(times), "rows": times},
    }


def verify(report: dict) -> bool:
    """Recheck every certificate / witness in a report; no search is performed."""
    if report.get("schema") != SCHEMA:
        raise ConfigError(f"unsupported report schema {report.get('schema')!r}", "$.schema")
    fam = decode_family(report["system"]["family"], "$.system.family")
    if report.get("kind") == "repro":
        return all(verify_result(fam, r["experiment"], r["params"], r["result"]) for r in report["rows"])
    return verify_result(fam, report["experiment"], report["params"], report["result"])


def strip_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timing"}


def _dump(report: dict, path: str | None) -> None:
    text = json.dumps(report, sort_keys=True, indent=2)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def write_csv(report: dict, path: str) -> None:
    """Plot-ready rows: per-index tracing distances for certificates, 0/1 hit series for hit sets."""
    fam = decode_family(report["system"]["family"])
    result = report["result"]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        if report["experiment"] == "hit-set":
            w.writerow(["n", "hit"])
            hits = set(result["hits"])
            for n in range(1, int(report["params"].get("horizon", 40)) + 1):
                w.writerow([n, int(n in hits)])
            return
        w.writerow(["certificate", "segment", "j", "distance"])
        for c, entry in enumerate(result.get("certificates", [])):
            f = decode_family(entry["family"]) if "family" in entry else fam
            system = _level_system(entry["level"], f)
            spec, cert = decode_spec(entry["spec"]), decode_certificate(entry["certificate"])
            oz = system.orbit(cert.witness, spec.horizon)
            for s, x in enumerate(spec.targets):
                ox = system.orbit(x, spec.segments[s][1])
                for j in spec.indices(s):
                    w.writerow([c, s, j, repr(system.distance(oz[j], ox[j]))])


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nads", description="Checks and witnesses for non-autonomous dynamical systems.")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--config", metavar="PATH", help="experiment config (JSON)")
    mode.add_argument("--verify", metavar="REPORT", help="recheck all certificates in a report")
    mode.add_argument("--repro", metavar="ID", help="run a catalog entry's expected-verdict table")
    mode.add_argument("--list", action="store_true", help="list catalog ids")
    p.add_argument("--system", metavar="ID", help="catalog id (overrides the config's system)")
    p.add_argument("--seed", type=int, metavar="U64", help="RNG seed (overrides the config's seed)")
    p.add_argument("--out", metavar="PATH", help="write the JSON report here instead of stdout")
    p.add_argument("--csv", metavar="PATH", help="also write plot-ready CSV data")
    p.add_argument("--threads", type=int, metavar="N", help="worker threads (default: NADS_THREADS or 1)")
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("--version", action="version", version=f"nads {__version__}")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.seed is not None and not 0 <= args.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer", "--seed")
        if args.list:
            for i in catalog.ids():
                print(f"{i:24s} {catalog.get(i).description}")
            return 0
        if args.verify:
            with open(args.verify) as fh:
                report = json.load(fh)
            ok = verify(report)
            print("verified" if ok else "verification FAILED")
            return 0 if ok else 1
        if args.repro:
            report = repro(args.repro, 0 if args.seed is None else args.seed % 2**32)
            _dump(report, args.out)
            for r in report["rows"]:
                log.info("%s: expected %s, got %s", r["experiment"], r["expected"], r["outcome"])
            return 0 if report["reproduced"] else 1
        with open(args.config) as fh:
            try:
                cfg = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"invalid JSON: {exc}", "$") from exc
        report = run(cfg, system=args.system, seed=args.seed, threads=_threads(args.threads))
        _dump(report, args.out)
        if args.csv:
            write_csv(report, args.csv)
        return EXIT_CODES[report["outcome"]]
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (NadsError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
