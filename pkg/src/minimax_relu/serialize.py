"""JSON files exchanged between the command-line steps.

Approximation file (``approx`` writes it; ``build-net`` and ``plot-data`` read it)::

    {
      "schema": "minimax-relu/approx@1",
      "function": {"kind": "builtin", "name": "exp", "domain": [0.0, 1.0]},
      "n": 2,
      "breakpoints": [x_0, ..., x_n],
      "node_values": [v_0, ..., v_n],
      "max_sew_gap": 1.1e-06,
      "segments": [{"lo", "hi", "slope", "intercept", "c", "d", "error"}, ...],
      "report": {"rounds", "per_round_gap", "final_errors", "mean_error",
                 "converged", "initial_gap", "stop_reason", "moves"},
      "bounds": {"n", "lower", "upper", "f2_min", "f2_max"},
      "config": {...run settings...}
    }

``function.kind`` is ``"builtin"`` (with ``name``) or ``"expr"`` (with ``expr``).

Network file (``build-net`` writes it; ``eval-net`` reads it)::

    {
      "schema": "minimax-relu/network@1",
      "architecture": "fixed_depth" | "fixed_width",
      "meta": {"n_segments", "hidden_neurons", "depth", "domain", ...},
      "function": {...as above, optional...},
      "layers": [{"in": m, "out": k, "weights": [[...] * m] * k, "biases": [...] * k}, ...]
    }

Weights are row-major (one list per output neuron). Floats are written with
Python's shortest round-trip repr, so they reload bit-for-bit.
"""

from __future__ import annotations

import json
import os
from typing import Optional, Tuple

import jsonschema

from .balancer import BalanceReport, PwlApproximation
from .bounds import BoundsReport
from .errors import SchemaError
from .functions import Interval, TargetFunction, builtin, from_expression
from .relu import Layer, ReluNetwork
from .segment import SegmentFit

__all__ = [
    "APPROX_SCHEMA", "NETWORK_SCHEMA", "function_to_dict", "function_from_dict",
    "approx_to_dict", "approx_from_dict", "network_to_dict", "network_from_dict",
    "write_json", "read_json",
]

APPROX_TAG = "minimax-relu/approx@1"
NETWORK_TAG = "minimax-relu/network@1"

_num = {"type": "number"}
_nums = {"type": "array", "items": _num}
_domain = {"type": "array", "items": _num, "minItems": 2, "maxItems": 2}

FUNCTION_SCHEMA = {
    "type": "object",
    "required": ["kind", "domain"],
    "properties": {
        "kind": {"enum": ["builtin", "expr"]},
        "name": {"type": "string"},
        "expr": {"type": "string"},
        "domain": _domain,
    },
}

APPROX_SCHEMA = {
    "type": "object",
    "required": ["schema", "function", "n", "breakpoints", "node_values",
                 "max_sew_gap", "segments", "report", "bounds"],
    "properties": {
        "schema": {"const": APPROX_TAG},
        "function": FUNCTION_SCHEMA,
        "n": {"type": "integer", "minimum": 1},
        "breakpoints": _nums,
        "node_values": _nums,
        "max_sew_gap": _num,
        "segments": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["lo", "hi", "slope", "intercept", "c", "d", "error"],
                "properties": {k: _num for k in ("lo", "hi", "slope", "intercept", "c", "d", "error")},
            },
        },
        "report": {
            "type": "object",
            "required": ["rounds", "per_round_gap", "final_errors", "mean_error", "converged"],
            "properties": {
                "rounds": {"type": "integer", "minimum": 0},
                "per_round_gap": _nums,
                "final_errors": _nums,
                "mean_error": _num,
                "converged": {"type": "boolean"},
            },
        },
        "bounds": {
            "type": "object",
            "required": ["n", "lower", "upper", "f2_min", "f2_max"],
            "properties": {k: _num for k in ("lower", "upper", "f2_min", "f2_max")},
        },
    },
}

NETWORK_SCHEMA = {
    "type": "object",
    "required": ["schema", "architecture", "meta", "layers"],
    "properties": {
        "schema": {"const": NETWORK_TAG},
        "architecture": {"enum": ["fixed_depth", "fixed_width"]},
        "meta": {"type": "object", "required": ["n_segments", "hidden_neurons", "depth"]},
        "function": FUNCTION_SCHEMA,
        "layers": {
            "type": "array",
            "minItems": 2,
            "items": {
                "type": "object",
                "required": ["in", "out", "weights", "biases"],
                "properties": {
                    "in": {"type": "integer", "minimum": 1},
                    "out": {"type": "integer", "minimum": 1},
                    "weights": {"type": "array", "items": _nums},
                    "biases": _nums,
                },
            },
        },
    },
}


def _validate(data, schema, what):
    try:
        jsonschema.validate(data, schema)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"invalid {what} file at {path}: {exc.message}") from None


def function_to_dict(f: TargetFunction) -> dict:
    kind, value = f.source
    dom = [f.domain.lo, f.domain.hi]
    if kind == "builtin":
        return {"kind": "builtin", "name": value, "domain": dom}
    if kind == "expr":
        return {"kind": "expr", "expr": value, "domain": dom}
    raise SchemaError(f"function {f.name!r} has no serializable source")


def function_from_dict(data: dict) -> TargetFunction:
    _validate(data, FUNCTION_SCHEMA, "function")
    domain = Interval(*data["domain"])
    if data["kind"] == "builtin":
        if "name" not in data:
            raise SchemaError("builtin function entry lacks 'name'")
        return builtin(data["name"], domain)
    if "expr" not in data:
        raise SchemaError("expression function entry lacks 'expr'")
    return from_expression(data["expr"], domain)


def approx_to_dict(f: TargetFunction, pwl: PwlApproximation, report: BalanceReport,
                   bounds: BoundsReport, config: Optional[dict] = None) -> dict:
    return {
        "schema": APPROX_TAG,
        "function": function_to_dict(f),
        "n": pwl.n,
        "breakpoints": list(pwl.breakpoints),
        "node_values": list(pwl.node_values),
        "max_sew_gap": pwl.max_sew_gap,
        "segments": [s.to_dict() for s in pwl.segments],
        "report": {
            "rounds": report.rounds,
            "per_round_gap": list(report.per_round_gap),
            "final_errors": list(report.final_errors),
            "mean_error": report.mean_error,
            "converged": report.converged,
            "initial_gap": report.initial_gap,
            "stop_reason": report.stop_reason,
            "moves": report.moves,
        },
        "bounds": bounds.to_dict(),
        "config": dict(config or {}),
    }


def approx_from_dict(data: dict) -> Tuple[PwlApproximation, BalanceReport, BoundsReport, dict]:
    """Inverse of :func:`approx_to_dict`; the last item is the raw function entry."""
    _validate(data, APPROX_SCHEMA, "approximation")
    n = data["n"]
    if len(data["segments"]) != n or len(data["breakpoints"]) != n + 1 or len(data["node_values"]) != n + 1:
        raise SchemaError(f"approximation file sizes do not match n={n}")
    try:
        segments = tuple(SegmentFit.from_dict(s) for s in data["segments"])
    except ValueError as exc:
        raise SchemaError(f"bad segment entry: {exc}") from None
    bps = [s.interval.lo for s in segments] + [segments[-1].interval.hi]
    if bps != [float(b) for b in data["breakpoints"]]:
        raise SchemaError("segment intervals disagree with breakpoints")
    pwl = PwlApproximation(segments, tuple(float(v) for v in data["node_values"]),
                           float(data["max_sew_gap"]))
    r = data["report"]
    report = BalanceReport(
        rounds=r["rounds"], per_round_gap=list(r["per_round_gap"]),
        final_errors=list(r["final_errors"]), mean_error=r["mean_error"],
        converged=r["converged"], initial_gap=r.get("initial_gap", 0.0),
        stop_reason=r.get("stop_reason", ""), moves=r.get("moves", 0),
    )
    b = data["bounds"]
    bounds = BoundsReport(n=int(b["n"]), lower=b["lower"], upper=b["upper"],
                          f2_min=b["f2_min"], f2_max=b["f2_max"])
    return pwl, report, bounds, data["function"]


def network_to_dict(net: ReluNetwork, function: Optional[dict] = None) -> dict:
    out = {
        "schema": NETWORK_TAG,
        "architecture": net.architecture,
        "meta": dict(net.meta),
    }
    if function is not None:
        out["function"] = function
    out["layers"] = [
        {"in": layer.n_in, "out": layer.n_out,
         "weights": layer.weights.tolist(), "biases": layer.biases.tolist()}
        for layer in net.layers
    ]
    return out


def network_from_dict(data: dict) -> Tuple[ReluNetwork, Optional[dict]]:
    _validate(data, NETWORK_SCHEMA, "network")
    layers = []
    for k, entry in enumerate(data["layers"]):
        w, b = entry["weights"], entry["biases"]
        if len(w) != entry["out"] or any(len(row) != entry["in"] for row in w) or len(b) != entry["out"]:
            raise SchemaError(f"layer {k} dimensions do not match its in/out fields")
        layers.append(Layer(w, b))
    try:
        net = ReluNetwork(tuple(layers), data["architecture"], dict(data["meta"]))
    except ValueError as exc:
        raise SchemaError(str(exc)) from None
    return net, data.get("function")


def write_json(path, data: dict) -> None:
    text = json.dumps(data, indent=2, allow_nan=False) + "\n"
    with open(os.fspath(path), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def read_json(path) -> dict:
    with open(os.fspath(path), encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: not valid JSON ({exc})") from None
