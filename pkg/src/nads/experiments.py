"""Experiment runner shared by the CLI and the catalog tables.

An experiment is ``(kind, params)`` evaluated on a family with a seed. The
result is a JSON-ready dict whose ``outcome`` is one of ``witnessed``,
``refuted-at-resolution``, ``inconclusive``, ``not-found``, ``exhausted``,
``holds`` or ``violated``. Every certificate produced is stored with the
family it refers to, so :func:`verify_result` can recheck it without
searching.
"""

from __future__ import annotations

import math
from itertools import product as cartesian
from typing import Any, Callable

import numpy as np

from nads import properties as P
from nads import specification as SP
from nads.errors import ConfigError
from nads.hyperspace import HyperspaceFamily, lift_witness_hyperspace
from nads.measures import MeasureFamily, check_mixing_measures, lift_witness_measures, reverify_measures
from nads.serialize import (
    decode_certificate,
    decode_family,
    decode_map,
    decode_spec,
    decode_verdict,
    encode_certificate,
    encode_family,
    encode_spec,
    encode_verdict,
    from_json,
    to_json,
)
from nads.spaces import OpenBallSet, random_point
from nads.symbolic import Word
from nads.systems import MapFamily, collapsed_family, inverse, orbit, periodicity_evidence

KINDS = (
    "property-check",
    "hit-set",
    "periodicity",
    "qsp",
    "wsp",
    "ssp",
    "estimate-M",
    "collapse",
    "product",
    "conjugate",
    "hyperspace-lift",
    "measure-lift",
    "measure-mixing",
)

EXIT_CODES = {
    "witnessed": 0,
    "holds": 0,
    "refuted-at-resolution": 2,
    "violated": 2,
    "inconclusive": 3,
    "not-found": 3,
    "exhausted": 3,
}


def _need(params: dict, key: str, path: str):
    if key not in params:
        raise ConfigError(f"missing parameter {key!r}", f"{path}.{key}")
    return params[key]


def _spec(params: dict, path: str, *, with_period: bool) -> SP.SegmentSpec:
    obj = {
        "segments": _need(params, "segments", path),
        "targets": _need(params, "targets", path),
        "eps": _need(params, "eps", path),
        "gap": params.get("gap", 0),
        "period": params.get("period") if with_period else None,
    }
    try:
        return decode_spec(obj, path)
    except ValueError as exc:
        raise ConfigError(str(exc), path) from exc


def _cert_entry(level: str, spec, cert, family: MapFamily | None = None) -> dict:
    out = {"level": level, "spec": encode_spec(spec), "certificate": encode_certificate(cert)}
    if family is not None:
        out["family"] = encode_family(family)
    return out


def _ball(obj, path) -> OpenBallSet:
    try:
        c, r = from_json(obj)
    except (TypeError, ValueError) as exc:
        raise ConfigError("ball must be [center, radius]", path) from exc
    return OpenBallSet.ball(c, float(r))


# experiment kinds


def _property_check(fam, params, seed, path):
    prop = _need(params, "property", path)
    eps = float(params.get("eps", 0.5))
    horizon = int(params.get("horizon", 30))
    samples = int(params.get("samples", 128))
    window = bool(params.get("window", False))
    threads = int(params.get("threads", 1))
    if prop == "transitive":
        v = P.check_transitive(fam, eps, horizon, samples=samples, seed=seed, window=window, threads=threads)
    elif prop == "mixing":
        v = P.check_mixing(fam, eps, horizon, samples=samples, seed=seed, window=window, threads=threads)
    elif prop == "sensitive":
        v = P.check_sensitive(
            fam, float(params.get("delta", 0.25)), float(params.get("eps_perturb", eps)), horizon, seed=seed, window=window
        )
    elif prop == "periodic-dense":
        v = P.check_periodic_dense(
            fam, eps, int(params.get("period_bound", 16)), int(params.get("multiples", 3)), seed=seed, window=window
        )
    elif prop in ("devaney", "wiggins"):
        dp = P.DevaneyParams(
            eps=eps,
            horizon=horizon,
            delta=float(params.get("delta", 0.25)),
            eps_perturb=float(params.get("eps_perturb", 0.25)),
            period_bound=int(params.get("period_bound", 16)),
            multiples=int(params.get("multiples", 3)),
            samples=samples,
            window=window,
        )
        v = P.check_devaney(fam, dp, seed=seed)
        if prop == "wiggins":
            v = v.sub["wiggins"]
            v.sub = {}
    else:
        raise ConfigError(f"unknown property {prop!r}", path + ".property")
    return {"outcome": v.verdict.value, "verdict": encode_verdict(v)}


def _hit_set(fam, params, seed, path):
    U = _ball(_need(params, "U", path), path + ".U")
    V = _ball(_need(params, "V", path), path + ".V")
    horizon = int(params.get("horizon", 40))
    hs = P.hit_set(fam, U, V, horizon, int(params.get("samples", 128)), seed)
    parity = params.get("parity")
    if parity is None:
        outcome = "witnessed" if hs.hits else "refuted-at-resolution"
    else:
        want = 1 if parity == "odd" else 0
        outcome = "holds" if hs.hits and all(n % 2 == want for n in hs.hits) else "violated"
    return {
        "outcome": outcome,
        "hits": hs.hits,
        "witnesses": {str(n): to_json(w) for n, w in hs.evidence.items()},
    }


def _periodicity(fam, params, seed, path):
    """``f_1^{n m}(x) = x`` for ``m <= multiples`` on all short words or sampled points."""
    n = int(_need(params, "n", path))
    multiples = int(params.get("multiples", 3))
    tol = float(params.get("tol", 1e-9))
    space = fam.space
    if space.kind == "symbolic":
        L = int(params.get("max_word", 8))
        pts = [Word("".join(b)) for k in range(1, L + 1) for b in cartesian("01", repeat=k)]
        pts = list(dict.fromkeys(pts))
    else:
        rng = np.random.default_rng(seed)
        pts = [random_point(space, rng) for _ in range(int(params.get("points", 50)))]
    worst, bad = 0.0, None
    for x in pts:
        chk = periodicity_evidence(fam, x, n, multiples, tol)
        worst = max(worst, max(d for _, d in chk.distances))
        if not chk.periodic and bad is None:
            bad = x
    return {
        "outcome": "holds" if bad is None else "violated",
        "points_checked": len(pts),
        "max_return_distance": worst,
        "counterexample": to_json(bad),
    }


def _search_result(fam, spec, res, level="base"):
    if not res:
        return {"outcome": "not-found", "budget": res.budget, "reason": res.reason, "spec": encode_spec(spec)}
    return {"outcome": "witnessed", "budget": res.budget, "certificates": [_cert_entry(level, spec, res)]}


def _qsp(fam, params, seed, path):
    x1, x2 = from_json(_need(params, "x1", path)), from_json(_need(params, "x2", path))
    n, eps = int(_need(params, "n", path)), float(_need(params, "eps", path))
    spec = SP.qsp_spec(x1, x2, n, eps)
    res = SP.find_qsp_witness(fam, x1, x2, n, eps, budget=int(params.get("budget", 4000)), seed=seed)
    return _search_result(fam, spec, res)


def _wsp(fam, params, seed, path):
    spec = _spec(params, path, with_period=False)
    res = SP.find_wsp_witness(fam, spec, budget=int(params.get("budget", 4000)), seed=seed)
    return _search_result(fam, spec, res)


def _ssp(fam, params, seed, path):
    spec = _spec(params, path, with_period=True)
    if spec.period is None:
        raise ConfigError("ssp needs 'period'", path + ".period")
    res = SP.find_ssp_witness(fam, spec, int(params.get("multiples", 3)), budget=int(params.get("budget", 4000)), seed=seed)
    return _search_result(fam, spec, res)


def _estimate_m(fam, params, seed, path):
    eps = float(_need(params, "eps", path))
    est = SP.estimate_M_qsp(
        fam,
        eps,
        int(params.get("horizon", 60)),
        int(params.get("trials", 100)),
        seed=seed,
        budget=int(params.get("budget", 4000)),
        window=bool(params.get("window", False)),
    )
    out = {
        "outcome": "exhausted" if est.exhausted else "witnessed",
        "M": est.M,
        "trials": est.trials,
        "successes": est.successes,
        "warnings": est.warnings,
        "mixing": encode_verdict(est.mixing),
        "certificates": [_cert_entry("base", s, c) for s, c in est.certificates],
    }
    return out


def _collapse(fam, params, seed, path):
    g = collapsed_family(fam)
    spec = _spec(params, path, with_period=True)
    budget = int(params.get("budget", 4000))
    if spec.period is None:
        res = SP.find_wsp_witness(g, spec, budget=budget, seed=seed)
    else:
        res = SP.find_ssp_witness(g, spec, int(params.get("multiples", 3)), budget=budget, seed=seed)
    if not res:
        return {"outcome": "not-found", "budget": res.budget, "reason": res.reason}
    base_spec, base_cert = SP.collapse_witness(fam, spec, res, params.get("M"))
    _, back_spec, back_cert = SP.restrict_witness(fam, base_spec, base_cert)
    return {
        "outcome": "witnessed",
        "k": fam.period,
        "certificates": [
            _cert_entry("base", spec, res, g),
            _cert_entry("base", base_spec, base_cert),
            _cert_entry("base", back_spec, back_cert, g),
        ],
    }


def _product(fam, params, seed, path):
    if fam.kind != "product":
        raise ConfigError("product experiment needs a product family", path)
    spec = _spec(params, path, with_period=True)
    budget = int(params.get("budget", 4000))
    parts = []
    for idx, sub_fam in enumerate(fam.factors):
        sub = SP.SegmentSpec(spec.segments, tuple(t[idx] for t in spec.targets), spec.eps, spec.gap, spec.period, spec.stride)
        if spec.period is None:
            res = SP.find_wsp_witness(sub_fam, sub, budget=budget, seed=seed)
        else:
            res = SP.find_ssp_witness(sub_fam, sub, int(params.get("multiples", 3)), budget=budget, seed=seed)
        if not res:
            return {"outcome": "not-found", "factor": idx, "budget": res.budget, "reason": res.reason}
        parts.append((sub_fam, sub, res))
    (fx, sx, cx), (fy, sy, cy) = parts
    pfam, pspec, pcert = SP.product_witness(fx, sx, cx, fy, sy, cy)
    return {
        "outcome": "witnessed",
        "certificates": [
            _cert_entry("base", sx, cx, fx),
            _cert_entry("base", sy, cy, fy),
            _cert_entry("base", pspec, pcert, pfam),
        ],
    }


def _conjugate(fam, params, seed, path):
    h = decode_map(_need(params, "h", path), path + ".h")
    target_eps = float(_need(params, "target_eps", path))
    if "lipschitz" in params:
        lip = float(params["lipschitz"])
        modulus: Callable[[float], float] | None = lambda e: e / lip  # noqa: E731
    else:
        modulus = None
    delta = modulus(target_eps) if modulus else float(_need(params, "eps", path))
    spec = _spec({**params, "eps": delta}, path, with_period=True)
    budget = int(params.get("budget", 4000))
    res = (
        SP.find_wsp_witness(fam, spec, budget=budget, seed=seed)
        if spec.period is None
        else SP.find_ssp_witness(fam, spec, budget=budget, seed=seed)
    )
    if not res:
        return {"outcome": "not-found", "budget": res.budget, "reason": res.reason}
    h_inv = decode_map(params["h_inv"], path + ".h_inv") if "h_inv" in params else inverse(h)
    from nads.systems import conjugate_family

    g = conjugate_family(fam, h, h_inv)
    g_fam, spec_y, cert_y = SP.transport_witness(fam, spec, res, h, modulus, target_eps, target=g)
    return {
        "outcome": "witnessed",
        "certificates": [_cert_entry("base", spec, res), _cert_entry("base", spec_y, cert_y, g_fam)],
    }


def _hyperspace_lift(fam, params, seed, path):
    targets = [{"set": t} if isinstance(t, list) else t for t in _need(params, "targets", path)]
    spec = _spec({**params, "targets": targets}, path, with_period=True)
    _, hspec, hcert = lift_witness_hyperspace(fam, spec, budget=int(params.get("budget", 4000)), seed=seed)
    return {"outcome": "witnessed", "certificates": [_cert_entry("hyperspace", hspec, hcert)]}


def _measure_lift(fam, params, seed, path):
    targets = [{"atoms": t} if isinstance(t, list) else t for t in _need(params, "targets", path)]
    spec = _spec({**params, "targets": targets}, path, with_period=True)
    _, mspec, mcert = lift_witness_measures(fam, spec, budget=int(params.get("budget", 4000)), seed=seed)
    return {"outcome": "witnessed", "certificates": [_cert_entry("measure", mspec, mcert)]}


def _measure_mixing(fam, params, seed, path):
    U = _ball(_need(params, "U", path), path + ".U")
    V = _ball(_need(params, "V", path), path + ".V")
    v = check_mixing_measures(
        fam,
        U,
        V,
        float(params.get("threshold", 0.8)),
        int(params.get("atom_count", 10)),
        int(params.get("horizon", 40)),
        samples=int(params.get("samples", 128)),
        seed=seed,
    )
    return {"outcome": v.verdict.value, "verdict": encode_verdict(v)}


_RUNNERS = {
    "property-check": _property_check,
    "hit-set": _hit_set,
    "periodicity": _periodicity,
    "qsp": _qsp,
    "wsp": _wsp,
    "ssp": _ssp,
    "estimate-M": _estimate_m,
    "collapse": _collapse,
    "product": _product,
    "conjugate": _conjugate,
    "hyperspace-lift": _hyperspace_lift,
    "measure-lift": _measure_lift,
    "measure-mixing": _measure_mixing,
}


def run_experiment(fam: MapFamily, kind: str, params: dict, seed: int, path: str = "$.params") -> dict:
    runner = _RUNNERS.get(kind)
    if runner is None:
        raise ConfigError(f"unknown experiment {kind!r}; expected one of {', '.join(KINDS)}", "$.experiment")
    return runner(fam, params, seed, path)


# verification without search


def _level_system(level: str, fam: MapFamily):
    if level == "base":
        return fam
    if level == "hyperspace":
        return HyperspaceFamily(fam)
    if level == "measure":
        return MeasureFamily(fam)
    raise ValueError(f"unknown certificate level {level!r}")


def verify_result(fam: MapFamily, kind: str, params: dict, result: dict) -> bool:
    """Recheck every certificate and witness recorded in ``result``."""
    ok = True
    for entry in result.get("certificates", []):
        f = decode_family(entry["family"]) if "family" in entry else fam
        system = _level_system(entry["level"], f)
        ok &= SP.verify_certificate(system, decode_spec(entry["spec"]), decode_certificate(entry["certificate"]))
    if "verdict" in result:
        v = decode_verdict(result["verdict"])
        if kind == "measure-mixing":
            U, V = _ball(params["U"], "U"), _ball(params["V"], "V")
            ok &= reverify_measures(fam, U, V, v)
        else:
            ok &= P.reverify(fam, v)
    if kind == "hit-set":
        U, V = _ball(params["U"], "U"), _ball(params["V"], "V")
        hs = P.HitSet(U, V, 0, list(result["hits"]), {int(n): from_json(w) for n, w in result["witnesses"].items()}, 0, 0)
        ok &= hs.verify(fam)
    if kind == "periodicity" and result["outcome"] == "holds":
        ok &= result["max_return_distance"] <= float(params.get("tol", 1e-9))
    if kind == "estimate-M" and result["outcome"] == "witnessed":
        ok &= result["successes"] == result["trials"] == len(result["certificates"])
    return bool(ok)
