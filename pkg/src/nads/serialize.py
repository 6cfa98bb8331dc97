"""JSON encodings (``schema: 1``) for every value that crosses the CLI boundary.

Points are encoded structurally so they decode without knowing the space:

* numbers stay numbers (interval / circle points)
* a symbolic word is ``{"word": "0110"}`` (one period, canonical)
* a product point is a two-element list
* a finite set is ``{"set": [...]}`` and an empirical measure ``{"atoms": [...]}``
* a rational is ``{"fraction": "3/2"}``

Lists decode to tuples, which is how product points and balls are
represented in memory.
"""

from __future__ import annotations

import dataclasses
import enum
import json
from fractions import Fraction
from typing import Any

import numpy as np

from nads.errors import ConfigError, UnsupportedOperationError
from nads.hyperspace import FiniteCompact
from nads.measures import EmpiricalMeasure
from nads.properties import PropertyVerdict, Verdict
from nads.spaces import SpaceDescriptor
from nads.specification import NotFound, SegmentSpec, TracingCertificate
from nads import systems as S
from nads.symbolic import Word

SCHEMA = 1


def to_json(obj: Any) -> Any:
    """Recursively convert package values into JSON-compatible data."""
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, Fraction):
        return {"fraction": str(obj)}
    if isinstance(obj, Word):
        return {"word": obj.bits}
    if isinstance(obj, FiniteCompact):
        return {"set": [to_json(p) for p in obj.points]}
    if isinstance(obj, EmpiricalMeasure):
        return {"atoms": [to_json(a) for a in obj.atoms]}
    if isinstance(obj, SpaceDescriptor):
        return encode_space(obj)
    if isinstance(obj, S.MapSpec):
        return encode_map(obj)
    if isinstance(obj, SegmentSpec):
        return encode_spec(obj)
    if isinstance(obj, TracingCertificate):
        return encode_certificate(obj)
    if isinstance(obj, PropertyVerdict):
        return encode_verdict(obj)
    if isinstance(obj, NotFound):
        return {"not_found": True, "budget": obj.budget, "reason": obj.reason}
    if isinstance(obj, np.ndarray):
        return [to_json(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): to_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset, range)):
        return [to_json(v) for v in obj]
    if dataclasses.is_dataclass(obj):
        return {f.name: to_json(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    raise TypeError(f"cannot encode {type(obj).__name__}")


def from_json(obj: Any) -> Any:
    """Inverse of :func:`to_json` for points, sets, measures and containers."""
    if isinstance(obj, list):
        return tuple(from_json(v) for v in obj)
    if isinstance(obj, dict):
        if obj.keys() == {"word"}:
            return Word(obj["word"])
        if obj.keys() == {"set"}:
            return FiniteCompact(from_json(p) for p in obj["set"])
        if obj.keys() == {"atoms"}:
            return EmpiricalMeasure(from_json(a) for a in obj["atoms"])
        if obj.keys() == {"fraction"}:
            return Fraction(obj["fraction"])
        return {k: from_json(v) for k, v in obj.items()}
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(to_json(obj), sort_keys=True, indent=2)


# spaces and maps


def encode_space(space: SpaceDescriptor) -> dict:
    out = {"kind": space.kind}
    if space.kind == "interval":
        out.update(lo=space.lo, hi=space.hi, compact=space.compact)
    if space.kind == "product":
        out["factors"] = [encode_space(f) for f in space.factors]
    return out


def decode_space(obj: dict, path: str = "$") -> SpaceDescriptor:
    from nads import spaces

    try:
        kind = obj["kind"]
        if kind == "interval":
            lo, hi = float(obj.get("lo", 0.0)), float(obj.get("hi", 1.0))
            if obj.get("compact", True):
                return spaces.interval(lo, hi)
            return spaces.real_line((lo, hi))
        if kind == "circle":
            return spaces.circle()
        if kind == "symbolic":
            return spaces.symbolic()
        if kind == "product":
            fx, fy = obj["factors"]
            return spaces.product(decode_space(fx, path + ".factors[0]"), decode_space(fy, path + ".factors[1]"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad space: {exc}", path) from exc
    raise ConfigError(f"unknown space kind {obj.get('kind')!r}", path + ".kind")


def encode_map(spec: S.MapSpec) -> dict:
    if spec.name == "callable":
        raise UnsupportedOperationError("maps built from Python callables cannot be serialized")
    out: dict[str, Any] = {"name": spec.name}
    if spec.params:
        out["params"] = [to_json(p) for p in spec.params]
    if spec.parts:
        out["parts"] = [encode_map(p) for p in spec.parts]
    return out


_MAP_CONSTRUCTORS = {
    "identity": S.identity,
    "logistic": S.logistic,
    "tent": S.tent,
    "constant": S.constant,
    "circle_power": S.circle_power,
    "angle_scale": S.angle_scale,
    "rotation": S.rotation,
    "shift": S.shift,
    "sin2": S.sin2,
    "asin_sqrt": S.asin_sqrt,
}


def decode_map(obj: dict, path: str = "$") -> S.MapSpec:
    if not isinstance(obj, dict) or "name" not in obj:
        raise ConfigError("map needs a 'name'", path)
    name = obj["name"]
    params = [from_json(p) for p in obj.get("params", [])]
    parts = [decode_map(p, f"{path}.parts[{i}]") for i, p in enumerate(obj.get("parts", []))]
    if name == "compose":
        # parts are stored in application order
        return S.compose(*reversed(parts))
    if name == "product":
        if len(parts) != 2:
            raise ConfigError("product map needs two parts", path + ".parts")
        return S.product_map(*parts)
    ctor = _MAP_CONSTRUCTORS.get(name)
    if ctor is None:
        raise ConfigError(f"unknown map {name!r}", path + ".name")
    try:
        return ctor(*params)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad parameters for {name}: {exc}", path + ".params") from exc


def encode_family(fam: S.MapFamily) -> dict:
    out: dict[str, Any] = {"kind": fam.kind, "space": encode_space(fam.space), "surjective": fam.surjective}
    if fam.name:
        out["name"] = fam.name
    if fam.kind == "periodic":
        out["maps"] = [encode_map(m) for m in fam.maps]
    elif fam.kind == "schedule":
        out["schedule"] = fam.schedule
    elif fam.kind == "product":
        out["factors"] = [encode_family(f) for f in fam.factors]
    elif fam.kind == "conjugate":
        h, h_inv = fam.conjugacy
        out.update(base=encode_family(fam.factors[0]), h=encode_map(h), h_inv=encode_map(h_inv))
    else:
        raise UnsupportedOperationError("families built from Python rules cannot be serialized")
    return out


def decode_family(obj: dict, path: str = "$") -> S.MapFamily:
    if not isinstance(obj, dict):
        raise ConfigError("family must be an object", path)
    if "catalog" in obj:
        from nads import catalog

        try:
            return catalog.get(obj["catalog"]).family
        except KeyError as exc:
            raise ConfigError(str(exc), path + ".catalog") from exc
    kind = obj.get("kind")
    surj = obj.get("surjective")
    name = obj.get("name")
    if kind == "product":
        fx, fy = obj.get("factors", [None, None])
        fam = S.product_family(decode_family(fx, path + ".factors[0]"), decode_family(fy, path + ".factors[1]"))
        fam.name = name
        return fam
    if kind == "conjugate":
        base = decode_family(obj.get("base"), path + ".base")
        h, h_inv = decode_map(obj.get("h"), path + ".h"), decode_map(obj.get("h_inv"), path + ".h_inv")
        space = decode_space(obj["space"], path + ".space") if "space" in obj else base.space
        return S.MapFamily(space, "conjugate", factors=(base,), conjugacy=(h, h_inv), surjective=surj, name=name)
    if "space" not in obj:
        raise ConfigError("family needs a 'space'", path)
    space = decode_space(obj["space"], path + ".space")
    if kind == "periodic":
        maps = obj.get("maps")
        if not maps:
            raise ConfigError("periodic family needs a nonempty 'maps' list", path + ".maps")
        return S.periodic_family(space, [decode_map(m, f"{path}.maps[{i}]") for i, m in enumerate(maps)], name, surjective=surj)
    if kind == "schedule":
        sched = obj.get("schedule")
        if sched not in S.SCHEDULES:
            raise ConfigError(f"unknown schedule {sched!r}", path + ".schedule")
        return S.scheduled_family(space, sched, name)
    raise ConfigError(f"unknown family kind {kind!r}", path + ".kind")


# specs, certificates, verdicts


def encode_spec(spec: SegmentSpec) -> dict:
    return {
        "segments": [list(s) for s in spec.segments],
        "targets": [to_json(t) for t in spec.targets],
        "eps": spec.eps,
        "gap": spec.gap,
        "period": spec.period,
        "stride": spec.stride,
    }


def decode_spec(obj: dict, path: str = "$") -> SegmentSpec:
    try:
        return SegmentSpec(
            tuple(tuple(s) for s in obj["segments"]),
            tuple(from_json(t) for t in obj["targets"]),
            float(obj["eps"]),
            gap=int(obj.get("gap", 0)),
            period=obj.get("period"),
            stride=int(obj.get("stride", 1)),
        )
    except KeyError as exc:
        raise ConfigError(f"spec is missing {exc}", path) from exc


def encode_certificate(cert: TracingCertificate) -> dict:
    return {
        "witness": to_json(cert.witness),
        "distances": [float(d) for d in cert.distances],
        "period": cert.period,
        "period_evidence": [[int(m), float(d)] for m, d in cert.period_evidence],
        "budget": int(cert.budget),
        "method": cert.method,
    }


def decode_certificate(obj: dict) -> TracingCertificate:
    return TracingCertificate(
        from_json(obj["witness"]),
        tuple(float(d) for d in obj["distances"]),
        obj.get("period"),
        tuple((int(m), float(d)) for m, d in obj.get("period_evidence", [])),
        int(obj.get("budget", 0)),
        obj.get("method", ""),
    )


def encode_verdict(v: PropertyVerdict) -> dict:
    return {
        "name": v.name,
        "verdict": v.verdict.value,
        "params": to_json(v.params),
        "evidence": to_json(v.evidence),
        "seed": v.seed,
        "heuristic": v.heuristic,
        "caveats": list(v.caveats),
        "sub": {k: encode_verdict(s) for k, s in v.sub.items()},
    }


def decode_verdict(obj: dict) -> PropertyVerdict:
    return PropertyVerdict(
        obj["name"],
        Verdict(obj["verdict"]),
        from_json(obj.get("params", {})),
        from_json(obj.get("evidence", {})),
        obj.get("seed", 0),
        obj.get("heuristic", False),
        list(obj.get("caveats", [])),
        {k: decode_verdict(s) for k, s in obj.get("sub", {}).items()},
    )
