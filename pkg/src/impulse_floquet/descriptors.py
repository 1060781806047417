"""JSON system descriptors.

Schema:
    {"period": T,
     "coefficients": {"a": [segments], "b": [...], "c": [...]},
     "impulses": [{"tau": t, "alpha": a, "beta": b}, ...]}

Each segment is {"end": breakpoint, "poly": [c0, c1, ...]} with polynomial
coefficients in the global time variable, ascending degree; the segment ends
must be strictly increasing and the last one must equal the period, so the
segments partition [0, T].
"""

from __future__ import annotations

import json
import re
import sys

from .piecewise import PiecewiseFunction, PolySegment
from .system import ImpulseSchedule, ImpulsiveSystem

_COEFF_NAMES = ("a", "b", "c")
_PATH_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)((?:\[\d+\])*)$")


class DescriptorError(ValueError):
    """Malformed system descriptor, with the offending field in the message."""


def _number(doc, path: str) -> float:
    if isinstance(doc, bool) or not isinstance(doc, (int, float)):
        raise DescriptorError(f"{path}: expected a number, got {type(doc).__name__}")
    return float(doc)


def _coefficient(segments, period: float, path: str) -> PiecewiseFunction:
    if not isinstance(segments, list) or not segments:
        raise DescriptorError(f"{path}: expected a non-empty list of segments")
    ends = []
    polys = []
    prev = 0.0
    for i, seg in enumerate(segments):
        spath = f"{path}[{i}]"
        if not isinstance(seg, dict):
            raise DescriptorError(f"{spath}: expected an object")
        unknown = set(seg) - {"end", "poly"}
        if unknown:
            raise DescriptorError(f"{spath}: unknown fields {sorted(unknown)}")
        if "end" not in seg or "poly" not in seg:
            raise DescriptorError(f"{spath}: needs 'end' and 'poly'")
        end = _number(seg["end"], f"{spath}.end")
        if end <= prev:
            raise DescriptorError(f"{spath}.end: {end} not greater than previous end {prev}")
        if not isinstance(seg["poly"], list) or not seg["poly"]:
            raise DescriptorError(f"{spath}.poly: expected a non-empty coefficient list")
        coeffs = tuple(_number(c, f"{spath}.poly[{j}]") for j, c in enumerate(seg["poly"]))
        ends.append(end)
        polys.append(PolySegment(coeffs))
        prev = end
    eps = 1e-9 * max(1.0, period)
    if abs(ends[-1] - period) > eps:
        raise DescriptorError(f"{path}[{len(ends) - 1}].end: segments must end at the period "
                              f"{period}, got {ends[-1]}")
    return PiecewiseFunction(period, tuple(ends[:-1]), tuple(polys))


def system_from_descriptor(doc: dict) -> ImpulsiveSystem:
    if not isinstance(doc, dict):
        raise DescriptorError("descriptor: expected a JSON object")
    unknown = set(doc) - {"period", "coefficients", "impulses"}
    if unknown:
        raise DescriptorError(f"descriptor: unknown fields {sorted(unknown)}")
    if "period" not in doc:
        raise DescriptorError("period: missing")
    period = _number(doc["period"], "period")
    if period <= 0.0:
        raise DescriptorError(f"period: must be positive, got {period}")
    coeffs = doc.get("coefficients")
    if not isinstance(coeffs, dict) or set(coeffs) != set(_COEFF_NAMES):
        raise DescriptorError("coefficients: expected an object with exactly 'a', 'b', 'c'")
    fa, fb, fc = (_coefficient(coeffs[name], period, f"coefficients.{name}")
                  for name in _COEFF_NAMES)
    impulses = doc.get("impulses", [])
    if not isinstance(impulses, list):
        raise DescriptorError("impulses: expected a list")
    triples = []
    for i, imp in enumerate(impulses):
        path = f"impulses[{i}]"
        if not isinstance(imp, dict):
            raise DescriptorError(f"{path}: expected an object")
        unknown = set(imp) - {"tau", "alpha", "beta"}
        if unknown:
            raise DescriptorError(f"{path}: unknown fields {sorted(unknown)}")
        for key in ("tau", "alpha", "beta"):
            if key not in imp:
                raise DescriptorError(f"{path}.{key}: missing")
        triples.append((_number(imp["tau"], f"{path}.tau"),
                        _number(imp["alpha"], f"{path}.alpha"),
                        _number(imp["beta"], f"{path}.beta")))
    return ImpulsiveSystem(fa, fb, fc, ImpulseSchedule.from_triples(period, triples))


def system_to_descriptor(system: ImpulsiveSystem) -> dict:
    coeffs = {}
    for name, f in zip(_COEFF_NAMES, system.coefficients()):
        if not f.is_polynomial:
            raise DescriptorError(f"coefficients.{name}: non-polynomial segments cannot "
                                  "be serialized")
        segs = []
        knots = f.knots
        for i, seg in enumerate(f.segments):
            segs.append({"end": knots[i + 1], "poly": list(seg.coeffs)})
        coeffs[name] = segs
    return {
        "period": system.period,
        "coefficients": coeffs,
        "impulses": [{"tau": imp.tau, "alpha": imp.alpha, "beta": imp.beta}
                     for imp in system.schedule.impulses],
    }


def parse_descriptor_text(text: str) -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptorError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")


def read_descriptor_source(source: str) -> dict:
    """Descriptor from a file path, '-' for stdin, or an inline JSON object."""
    if source == "-":
        text = sys.stdin.read()
    elif source.lstrip().startswith("{"):
        text = source
    else:
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    return parse_descriptor_text(text)


def load_system(source: str) -> ImpulsiveSystem:
    """System from a file path, stdin ('-') or inline JSON."""
    return system_from_descriptor(read_descriptor_source(source))


def set_descriptor_value(doc: dict, path: str, value: float) -> None:
    """Assign into a descriptor by path, e.g. 'impulses[0].beta' or
    'coefficients.c[0].poly[1]'."""
    target = doc
    parts = path.split(".")
    trail = []
    for n, part in enumerate(parts):
        m = _PATH_TOKEN.match(part)
        if not m:
            raise DescriptorError(f"sweep axis path: bad component {part!r}")
        key, idx_text = m.group(1), m.group(2)
        indices = [int(x) for x in re.findall(r"\[(\d+)\]", idx_text)]
        last = n == len(parts) - 1
        try:
            if not isinstance(target, dict) or key not in target:
                raise KeyError(key)
            if last and not indices:
                target[key] = value
                return
            target = target[key]
            for j, ix in enumerate(indices):
                if not isinstance(target, list) or ix >= len(target):
                    raise IndexError(ix)
                if last and j == len(indices) - 1:
                    target[ix] = value
                    return
                target = target[ix]
        except (KeyError, IndexError) as exc:
            raise DescriptorError(f"sweep axis path {path!r}: no field at "
                                  f"{'.'.join(trail + [part])}") from exc
        trail.append(part)
