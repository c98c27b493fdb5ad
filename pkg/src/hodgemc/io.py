"""JSON documents for ModuleData, chains and reports.

A data document looks like::

    {
      "delta": {"0": -1},
      "delta_valid": true,
      "h": {"0": 1},
      "points": [
        {"location": "0", "nu": [{"gamma": "1/3", "ell": 0, "p": 0, "mult": 1}]},
        ...
      ]
    }

Parse errors carry the line of the offending JSON object.
"""

from __future__ import annotations

import json
import json.decoder
import json.scanner
import os
import tempfile
from fractions import Fraction

from .errors import HodgeError, ParseError
from .invariants import HodgeTable, ModuleData, Point, format_angle

# --------------------------------------------------------------------------
# a decoder that remembers where each object starts


class _Obj(dict):
    line = None


class _DuplicateKey(Exception):
    pass


class _Decoder(json.JSONDecoder):
    def __init__(self):
        super().__init__(object_pairs_hook=self._pairs)
        base = json.decoder.JSONObject

        def parse_object(s_and_end, strict, scan_once, hook, pairs_hook, memo=None):
            s, end = s_and_end
            line = s.count("\n", 0, end) + 1
            try:
                obj, stop = base(s_and_end, strict, scan_once, hook, pairs_hook, memo)
            except _DuplicateKey as exc:
                raise ParseError(f"duplicate key {exc.args[0]!r}", exc.args[0], line) from None
            obj.line = line
            return obj, stop

        self.parse_object = parse_object
        self.scan_once = json.scanner.py_make_scanner(self)

    @staticmethod
    def _pairs(pairs):
        out = _Obj()
        for key, value in pairs:
            if key in out:
                raise _DuplicateKey(key)
            out[key] = value
        return out


def _load(text: str):
    try:
        return _Decoder().decode(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg}", line=exc.lineno) from None


# --------------------------------------------------------------------------
# field readers


def _int(value, field, line, minimum=None):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"expected an integer, got {value!r}", field, line)
    if minimum is not None and value < minimum:
        what = "negative multiplicity" if field == "mult" else f"value below {minimum}"
        raise ParseError(f"{what}: {value}", field, line)
    return value


def _angle(value, field, line) -> Fraction:
    if not isinstance(value, str):
        raise ParseError(f"angles are strings 'a/b', got {value!r}", field, line)
    num, _, den = value.strip().partition("/")
    try:
        num, den = int(num), int(den) if den else 1
    except ValueError:
        raise ParseError(f"not a fraction: {value!r}", field, line) from None
    if den <= 0:
        raise ParseError(f"denominator must be positive: {value!r}", field, line)
    if Fraction(num, den).denominator != den:
        raise ParseError(f"unreduced fraction {value!r}", field, line)
    if not 0 <= num < den:
        raise ParseError(f"angle out of range [0, 1): {value!r}", field, line)
    return Fraction(num, den)


def _graded(obj, field, line, minimum=None) -> dict:
    if not isinstance(obj, dict):
        raise ParseError("expected an object keyed by p", field, line)
    out = {}
    line = getattr(obj, "line", line)
    for key, value in obj.items():
        try:
            p = int(key)
        except ValueError:
            raise ParseError(f"p must be an integer string, got {key!r}", field, line) from None
        if p in out:
            raise ParseError(f"duplicate p {p}", field, line)
        out[p] = _int(value, field, line, minimum)
    return out


def _require(obj, key, line):
    if key not in obj:
        raise ParseError(f"missing field {key!r}", key, line)
    return obj[key]


def data_from_json(obj) -> ModuleData:
    if not isinstance(obj, dict):
        raise ParseError("a data document is a JSON object", line=1)
    line = getattr(obj, "line", None)
    known = {"points", "h", "delta", "delta_valid"}
    extra = sorted(set(obj) - known)
    if extra:
        raise ParseError(f"unknown field {extra[0]!r}", extra[0], line)
    raw_points = _require(obj, "points", line)
    if not isinstance(raw_points, list):
        raise ParseError("expected an array", "points", line)
    points = {}
    for raw in raw_points:
        pline = getattr(raw, "line", line)
        if not isinstance(raw, dict):
            raise ParseError("a point is a JSON object", "points", pline)
        loc = _require(raw, "location", pline)
        if not isinstance(loc, str):
            raise ParseError("location must be a string", "location", pline)
        try:
            where = Point.parse(loc)
        except HodgeError as exc:
            raise ParseError(str(exc), "location", pline) from None
        if where in points:
            raise ParseError(f"duplicate location {loc!r}", "location", pline)
        entries = {}
        nu = _require(raw, "nu", pline)
        if not isinstance(nu, list):
            raise ParseError("expected an array", "nu", pline)
        for e in nu:
            eline = getattr(e, "line", pline)
            if not isinstance(e, dict):
                raise ParseError("a nu entry is a JSON object", "nu", eline)
            gamma = _angle(_require(e, "gamma", eline), "gamma", eline)
            ell = _int(_require(e, "ell", eline), "ell", eline, 0)
            p = _int(_require(e, "p", eline), "p", eline)
            mult = _int(_require(e, "mult", eline), "mult", eline, 0)
            if (gamma, ell, p) in entries:
                raise ParseError(
                    f"duplicate entry (gamma={format_angle(gamma)}, ell={ell}, p={p})", "nu", eline
                )
            entries[(gamma, ell, p)] = mult
        points[where] = HodgeTable(entries)
    h = _graded(_require(obj, "h", line), "h", line, 0)
    delta = _graded(obj.get("delta", {}), "delta", line)
    valid = obj.get("delta_valid", False)
    if not isinstance(valid, bool):
        raise ParseError("expected true or false", "delta_valid", line)
    try:
        return ModuleData(points=points, h=h, delta=delta, delta_valid=valid)
    except HodgeError as exc:
        raise ParseError(str(exc), line=line) from None


def parse(text: str) -> ModuleData:
    return data_from_json(_load(text))


# --------------------------------------------------------------------------
# serialization


def _graded_json(mapping) -> dict:
    return {str(p): v for p, v in sorted(mapping.items())}


def data_to_json(data: ModuleData) -> dict:
    points = []
    for x, table in data.points.items():
        nu = [{"gamma": format_angle(g), "ell": l, "p": p, "mult": m} for (g, l, p), m in table.items()]
        points.append({"location": str(x), "nu": nu})
    out = {}
    if data.delta_valid:
        out["delta"] = _graded_json(data.delta)
    out["delta_valid"] = data.delta_valid
    out["h"] = _graded_json(data.h)
    out["points"] = points
    return out


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def serialize(data: ModuleData) -> str:
    return dumps(data_to_json(data))


def parameter_json(step) -> dict:
    if step.kind == "twist":
        tw = step.parameter
        return {
            "exponents": {str(x): format_angle(e) for x, e in tw.exponents.items()},
            "infinity_exponent": format_angle(tw.infinity_exponent),
        }
    return {"gamma0": format_angle(step.parameter.gamma0)}


def chain_to_json(chain) -> dict:
    steps = []
    for i, step in enumerate(chain.steps, 1):
        after = step.after
        item = {"index": i, "kind": step.kind, "parameter": parameter_json(step), "rank": after.rank,
                "h": _graded_json(after.h)}
        if after.delta_valid:
            item["delta"] = _graded_json(after.delta)
        steps.append(item)
    return {
        "rank_trace": chain.rank_trace(),
        "result": data_to_json(chain.result),
        "start": data_to_json(chain.start),
        "steps": steps,
    }


def write_atomic(path: str, text: str) -> None:
    """Write ``text`` to ``path`` so readers never see a partial file."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".hodgemc-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
