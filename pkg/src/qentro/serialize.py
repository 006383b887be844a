"""JSON encodings for matrices, channels, families and ensembles.

Complex entries are encoded as [re, im] pairs and matrices as row-major
arrays of rows. Matrix payloads round-trip exactly (shortest-repr floats);
scalar report values are rendered with 12 significant digits by the CLI
renderer so that identical runs produce identical bytes.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .capacity import ConstraintSet, Ensemble
from .channels import KrausOperation
from .continuity import AnalyticKrausFamily, NormLaw, RankLaw
from .entropy import is_infinite
from .errors import ParseError
from .operators import HermitianOperator, PositiveOperator


def matrix_to_json(matrix: np.ndarray) -> list:
    m = np.asarray(matrix, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(data) -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise ParseError("matrix must be a non-empty array of rows")
    width = None
    rows = []
    for row in data:
        if not isinstance(row, list):
            raise ParseError("matrix rows must be arrays")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"ragged matrix: row of length {len(row)} vs {width}")
        entries = []
        for cell in row:
            if isinstance(cell, (int, float)) and not isinstance(cell, bool):
                entries.append(complex(cell))
            elif (
                isinstance(cell, list)
                and len(cell) == 2
                and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in cell)
            ):
                entries.append(complex(cell[0], cell[1]))
            else:
                raise ParseError(f"matrix entry {cell!r} is not a number or [re, im] pair")
        rows.append(entries)
    return np.array(rows, dtype=complex)


def state_from_json(data) -> PositiveOperator:
    payload = data.get("matrix", data) if isinstance(data, dict) else data
    try:
        return PositiveOperator.from_matrix(matrix_from_json(payload))
    except ParseError:
        raise
    except Exception as exc:  # validation errors propagate with context
        raise type(exc)(f"state: {exc}") from exc


def channel_to_json(phi: KrausOperation) -> dict:
    return {
        "dim_in": phi.dim_in,
        "dim_out": phi.dim_out,
        "kraus": [matrix_to_json(k) for k in phi.kraus],
    }


def channel_from_json(data) -> KrausOperation:
    if not isinstance(data, dict):
        raise ParseError("channel JSON must be an object")
    for key in ("dim_in", "dim_out", "kraus"):
        if key not in data:
            raise ParseError(f"channel JSON missing field {key!r}")
    kraus = [matrix_from_json(k) for k in data["kraus"]]
    phi = KrausOperation(kraus)
    if phi.dim_in != data["dim_in"] or phi.dim_out != data["dim_out"]:
        raise ParseError(
            f"declared dims {data['dim_in']}->{data['dim_out']} do not match "
            f"Kraus shapes {phi.dim_in}->{phi.dim_out}"
        )
    return phi


def family_from_json(data) -> AnalyticKrausFamily:
    if not isinstance(data, dict) or "norm_law" not in data:
        raise ParseError("family JSON must be an object with a norm_law")
    nl = data["norm_law"]
    if not isinstance(nl, dict) or "kind" not in nl:
        raise ParseError("norm_law must carry a kind")
    try:
        norm = NormLaw(
            kind=str(nl["kind"]),
            c=float(nl.get("c", 1.0)),
            alpha=float(nl.get("alpha", 0.0)),
            beta=float(nl.get("beta", 0.0)),
        )
        rl = data.get("rank_law", {"kind": "constant", "d": 1})
        rank = RankLaw(
            kind=str(rl.get("kind", "constant")),
            d=int(rl.get("d", 1)),
            n=int(rl.get("n", 0)),
        )
        flags = frozenset(data.get("orthogonality", []))
        return AnalyticKrausFamily(norm, rank, flags)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"malformed family JSON: {exc}") from exc


def family_to_json(family: AnalyticKrausFamily) -> dict:
    norm = {"kind": family.norm_law.kind, "c": family.norm_law.c}
    if family.norm_law.kind == "log_power":
        norm["alpha"] = family.norm_law.alpha
    if family.norm_law.kind == "power":
        norm["beta"] = family.norm_law.beta
    rank = {"kind": family.rank_law.kind}
    if family.rank_law.kind == "constant":
        rank["d"] = family.rank_law.d
    else:
        rank["n"] = family.rank_law.n
    return {
        "norm_law": norm,
        "rank_law": rank,
        "orthogonality": sorted(family.orthogonality),
    }


def ensemble_to_json(ens: Ensemble) -> dict:
    return {
        "parts": [
            {"weight": float(w), "state": matrix_to_json(s.matrix)} for w, s in ens.parts
        ]
    }


def ensemble_from_json(data) -> Ensemble:
    if not isinstance(data, dict) or "parts" not in data:
        raise ParseError("ensemble JSON must be an object with parts")
    parts = []
    for part in data["parts"]:
        if not isinstance(part, dict) or "weight" not in part or "state" not in part:
            raise ParseError("ensemble parts need weight and state fields")
        parts.append(
            (float(part["weight"]), PositiveOperator.from_matrix(matrix_from_json(part["state"])))
        )
    return Ensemble(tuple(parts))


def constraint_from_json(data) -> ConstraintSet:
    if data is None:
        return ConstraintSet.unconstrained()
    if not isinstance(data, dict) or "kind" not in data:
        raise ParseError("constraint JSON must carry a kind")
    kind = data["kind"]
    if kind == "unconstrained":
        return ConstraintSet.unconstrained()
    if kind == "mean_observable":
        if "observable" not in data or "bound" not in data:
            raise ParseError("mean_observable constraint needs observable and bound")
        return ConstraintSet.mean_observable(
            HermitianOperator(matrix_from_json(data["observable"])), float(data["bound"])
        )
    if kind == "fixed_barycenter":
        if "state" not in data:
            raise ParseError("fixed_barycenter constraint needs a state")
        return ConstraintSet.fixed_barycenter(
            PositiveOperator.from_matrix(matrix_from_json(data["state"]))
        )
    raise ParseError(f"unknown constraint kind {kind!r}")


def states_from_json(data) -> list[PositiveOperator]:
    """List of states from either {'states': [...]} or a bare array of matrices."""
    payload = data.get("states", data) if isinstance(data, dict) else data
    if not isinstance(payload, list) or not payload:
        raise ParseError("expected a non-empty array of matrices")
    return [PositiveOperator.from_matrix(matrix_from_json(mat)) for mat in payload]


def load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc


# --- deterministic report rendering -----------------------------------------


def _render_scalar(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if is_infinite(value):
        return '"infinity"'
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if math.isnan(x):
            return '"nan"'
        if math.isinf(x):
            return '"infinity"' if x > 0 else '"-infinity"'
        return format(x, ".12g")
    if isinstance(value, str):
        return json.dumps(value)
    raise TypeError(f"cannot render {type(value)} in a report")


def render_report(obj, indent: int = 0) -> str:
    """Canonical JSON text: insertion-ordered keys, 12-significant-digit floats.

    Exception: nested raw matrices from :func:`matrix_to_json` are emitted
    with full-precision floats so channel/state payloads round-trip exactly.
    """
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        lines = [
            f"{inner}{json.dumps(str(key))}: {render_report(val, indent + 1)}"
            for key, val in obj.items()
        ]
        return "{\n" + ",\n".join(lines) + f"\n{pad}" + "}"
    if isinstance(obj, _ExactMatrix):
        return json.dumps(obj.payload)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        rendered = [render_report(v, indent + 1) for v in obj]
        if all(not isinstance(v, (dict, list, tuple, _ExactMatrix)) for v in obj):
            return "[" + ", ".join(rendered) + "]"
        lines = [f"{inner}{r}" for r in rendered]
        return "[\n" + ",\n".join(lines) + f"\n{pad}" + "]"
    return _render_scalar(obj)


class _ExactMatrix:
    """Wrapper marking a matrix payload for exact float rendering."""

    __slots__ = ("payload",)

    def __init__(self, payload):
        self.payload = payload


def exact(payload) -> _ExactMatrix:
    return _ExactMatrix(payload)


def render_csv(header: list[str], rows: list[tuple]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(
            ",".join(
                format(float(v), ".12g")
                if isinstance(v, (float, np.floating))
                else str(v)
                for v in row
            )
        )
    return "\n".join(lines) + "\n"
