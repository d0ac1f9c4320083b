"""JSON encoding of points, arcs, maps and straightening results.

Exact numbers are written as ``"p/q"`` strings and floats as JSON numbers, so
exact data never passes through floating point.
"""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .geometry import Arc, CirclePoint
from .pac import Affine, FlowChart, PacMap, Piece


class FormatError(ValueError):
    pass


def num_to_json(x):
    if isinstance(x, float):
        return x
    return str(Fraction(x))


def num_from_json(v, where: str = "value"):
    if isinstance(v, bool):
        raise FormatError(f"{where}: expected a number, got {v!r}")
    if isinstance(v, float):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise FormatError(f"{where}: bad rational {v!r}") from e
    raise FormatError(f"{where}: expected a number, got {v!r}")


def point_to_json(p: CirclePoint) -> dict:
    return {"pos": num_to_json(p.pos), "len": num_to_json(p.length)}


def arc_to_json(a: Arc) -> dict:
    return {"start": point_to_json(a.start), "length": num_to_json(a.length),
            "incl_start": a.incl_start, "incl_end": a.incl_end}


def arc_from_json(obj: dict, where: str = "arc") -> Arc:
    try:
        start = obj["start"]
        p = CirclePoint(num_from_json(start["pos"], f"{where}.start.pos"),
                        num_from_json(start["len"], f"{where}.start.len"))
        return Arc(p, num_from_json(obj["length"], f"{where}.length"),
                   bool(obj.get("incl_start", True)), bool(obj.get("incl_end", False)))
    except (KeyError, TypeError) as e:
        raise FormatError(f"{where}: missing field {e}") from e


def transform_to_json(T) -> dict:
    if isinstance(T, Affine):
        return {"kind": "affine", "slope": num_to_json(T.slope), "offset": num_to_json(T.offset)}
    return {"kind": "flowchart", "r": float(T.r), "a": float(T.a), "t": float(T.t),
            "shift": num_to_json(T.shift)}


def transform_from_json(obj: dict, where: str = "transform"):
    kind = obj.get("kind")
    if kind == "affine":
        return Affine(num_from_json(obj["slope"], f"{where}.slope"), num_from_json(obj["offset"], f"{where}.offset"))
    if kind == "flowchart":
        return FlowChart(num_from_json(obj["r"], f"{where}.r"), num_from_json(obj["a"], f"{where}.a"),
                         num_from_json(obj["t"], f"{where}.t"),
                         num_from_json(obj.get("shift", "0"), f"{where}.shift"))
    raise FormatError(f"{where}: unknown transform kind {kind!r}")


def map_to_json(f: PacMap) -> dict:
    pieces = []
    for p in f.pieces:
        arc = Arc(CirclePoint(p.start, f.source[p.comp]), p.length)
        pieces.append({"component": p.comp, "arc": arc_to_json(arc), "target_component": p.target,
                       "transform": transform_to_json(p.transform)})
    return {"source": [num_to_json(x) for x in f.source],
            "target": [num_to_json(x) for x in f.target],
            "pieces": pieces}


def map_from_json(obj: dict, normalize: bool = True) -> PacMap:
    try:
        source = [num_from_json(x, "source") for x in _as_list(obj["source"])]
        target = [num_from_json(x, "target") for x in _as_list(obj["target"])]
        pieces = []
        for k, item in enumerate(obj["pieces"]):
            where = f"pieces[{k}]"
            arc = arc_from_json(item["arc"], f"{where}.arc")
            comp = int(item.get("component", 0))
            # the lift of a piece starts at the arc start, in [0, L)
            pieces.append(Piece(comp, arc.start.pos, arc.length, int(item.get("target_component", 0)),
                                transform_from_json(item["transform"], f"{where}.transform")))
    except (KeyError, TypeError) as e:
        raise FormatError(f"missing field {e}") from e
    f = PacMap(tuple(source), tuple(target), tuple(pieces))
    if normalize:
        from .pac import normalize as _norm, validate
        rep = validate(f)
        if not rep.ok:
            raise FormatError("; ".join(f"{v.kind}: {v.detail}" for v in rep.violations))
        f = _norm(f)
    return f


def _as_list(v):
    return v if isinstance(v, list) else [v]


def dumps_map(f: PacMap) -> str:
    return json.dumps(map_to_json(f), indent=2)


def load_map(path) -> PacMap:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}") from e
    return map_from_json(obj)


def save_map(f: PacMap, path) -> None:
    Path(path).write_text(dumps_map(f) + "\n")


def result_to_json(res) -> dict:
    """Straightening result with 0-based indices."""
    jm, od = res.jump_maps, res.orbits
    return {
        "B": [num_to_json(b) for b in res.cuts.points],
        "delta_B": num_to_json(res.cuts.delta),
        "stable_from_q": list(res.cuts.stable_from),
        "t_q": num_to_json(jm.t_q),
        "sigma1": list(jm.sigma1), "tau1": list(jm.tau1),
        "sigma2": list(jm.sigma2), "tau2": list(jm.tau2),
        "sigma": list(jm.sigma), "tau": list(jm.tau),
        "orbits": [list(o) for o in od.orbits],
        "representatives": list(od.representatives),
        "L": sorted(od.L), "S": sorted(od.S),
        "lambda": [num_to_json(x) for x in res.domain],
        "f": map_to_json(res.conjugator),
        "verification": {
            "ok": res.report.ok,
            "tol": res.report.tol,
            "max_residual": res.report.max_residual,
            "checks": [{"t": num_to_json(c.t), "invariant": c.invariant, "residuals": list(c.residuals)}
                       for c in res.report.checks],
        },
        "notes": list(res.notes),
    }
