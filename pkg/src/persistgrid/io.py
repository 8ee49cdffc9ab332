"""JSON serialization for modules, rectangle lists, line embeddings, and
candy modules.

Scalars travel as exact strings ("3/4") over the rationals and as residue
integers over prime fields, so files round-trip without precision loss.
"""

from __future__ import annotations

import json
from collections import Counter

from .constructions import CandyModule
from .fields import Field
from .grid import AxisEmbedding, GridBox, PersModule, vadd, _unit
from .linalg import Matrix
from .rectangles import RectDecomp, Rectangle


class FormatError(ValueError):
    """Malformed or inconsistent input file."""


def _require(obj, keys, what):
    for k in keys:
        if k not in obj:
            raise FormatError(f"{what} is missing the field {k!r}")


def field_to_json(f: Field) -> str:
    return f.to_json()


def field_from_json(tag) -> Field:
    try:
        return Field.from_json(tag)
    except (ValueError, TypeError, AttributeError) as e:
        raise FormatError(str(e))


# ---------------------------------------------------------------------------
# PMOD


def pmod_to_json(M: PersModule) -> dict:
    f = M.field
    dims = [M.dim(v) for v in M.box.vertices()]
    steps = []
    for (v, k) in sorted(M.steps, key=lambda vk: (vk[0], vk[1])):
        m = M.steps[(v, k)]
        if m.nrows == 0 or m.ncols == 0:
            continue
        steps.append({
            "v": list(v),
            "axis": k,
            "matrix": [[f.fmt(x) for x in row] for row in m.rows],
        })
    return {
        "field": f.to_json(),
        "n": M.n,
        "lo": list(M.box.lo),
        "hi": list(M.box.hi),
        "dims": dims,
        "steps": steps,
    }


def pmod_from_json(obj: dict) -> PersModule:
    _require(obj, ("field", "n", "lo", "hi", "dims", "steps"), "PMOD")
    f = field_from_json(obj["field"])
    n = obj["n"]
    if len(obj["lo"]) != n or len(obj["hi"]) != n:
        raise FormatError("lo/hi length disagrees with n")
    try:
        box = GridBox(tuple(obj["lo"]), tuple(obj["hi"]))
    except ValueError as e:
        raise FormatError(str(e))
    verts = list(box.vertices())
    if len(obj["dims"]) != len(verts):
        raise FormatError(f"dims array has {len(obj['dims'])} entries, box has {len(verts)} vertices")
    dims = {}
    for v, d in zip(verts, obj["dims"]):
        if not isinstance(d, int) or d < 0:
            raise FormatError(f"bad dimension {d!r} at {v}")
        if d:
            dims[v] = d
    steps = {}
    for rec in obj["steps"]:
        _require(rec, ("v", "axis", "matrix"), "step record")
        v = tuple(rec["v"])
        k = rec["axis"]
        if not (isinstance(k, int) and 0 <= k < n):
            raise FormatError(f"bad axis {k!r}")
        w = vadd(v, _unit(n, k))
        if not box.contains(v) or not box.contains(w):
            raise FormatError(f"step at {v} axis {k} leaves the box")
        try:
            rows = [[f.parse(x) for x in row] for row in rec["matrix"]]
        except (ValueError, TypeError, ZeroDivisionError) as e:
            raise FormatError(f"bad scalar in step at {v} axis {k}: {e}")
        m = Matrix(f, rows) if rows and rows[0] else Matrix.zero(f, len(rows), 0)
        if m.nrows != dims.get(w, 0) or m.ncols != dims.get(v, 0):
            raise FormatError(f"step at {v} axis {k} has shape {m.nrows}x{m.ncols}, "
                              f"expected {dims.get(w, 0)}x{dims.get(v, 0)}")
        steps[(v, k)] = m
    # steps between two positive-dimension vertices may not be omitted
    for v in dims:
        for k in range(n):
            w = vadd(v, _unit(n, k))
            if box.contains(w) and w in dims and (v, k) not in steps:
                raise FormatError(f"missing step at {v} axis {k}")
    M = PersModule(f, box, dims, steps)
    rep = M.validate()
    if not rep:
        raise FormatError(f"module is not commutative: {rep.message}")
    return M


# ---------------------------------------------------------------------------
# RECTS


def rects_to_json(R: RectDecomp) -> dict:
    counts = Counter((r.b, r.d) for r in R.summands)
    return {
        "field": R.field.to_json(),
        "n": R.n,
        "lo": list(R.box.lo),
        "hi": list(R.box.hi),
        "rects": [
            {"b": list(b), "d": list(d), "mult": m}
            for (b, d), m in sorted(counts.items())
        ],
    }


def barcode_to_json(field: Field, bc: Counter) -> dict:
    n = len(next(iter(bc))[0]) if bc else 1
    return {
        "field": field.to_json(),
        "n": n,
        "rects": [
            {"b": list(b), "d": list(d), "mult": m}
            for (b, d), m in sorted(bc.items())
        ],
    }


def rects_from_json(obj: dict) -> RectDecomp:
    _require(obj, ("field", "n", "rects"), "RECTS")
    f = field_from_json(obj["field"])
    n = obj["n"]
    rects = []
    for rec in obj["rects"]:
        _require(rec, ("b", "d"), "rectangle record")
        b, d = tuple(rec["b"]), tuple(rec["d"])
        if len(b) != n or len(d) != n:
            raise FormatError(f"rectangle {rec} has the wrong dimension")
        mult = rec.get("mult", 1)
        if not isinstance(mult, int) or mult < 1:
            raise FormatError(f"bad multiplicity {mult!r}")
        try:
            rects.extend([Rectangle(b, d)] * mult)
        except ValueError as e:
            raise FormatError(str(e))
    if not rects:
        raise FormatError("empty rectangle list")
    if "lo" in obj and "hi" in obj:
        box = GridBox(tuple(obj["lo"]), tuple(obj["hi"]))
    else:
        box = GridBox(
            tuple(min(r.b[k] for r in rects) for k in range(n)),
            tuple(max(r.d[k] for r in rects) for k in range(n)),
        )
    try:
        return RectDecomp(f, box, rects)
    except ValueError as e:
        raise FormatError(str(e))


# ---------------------------------------------------------------------------
# LINE and candy


def line_to_json(L: AxisEmbedding) -> dict:
    return L.to_json()


def line_from_json(obj: dict) -> AxisEmbedding:
    _require(obj, ("axis_maps", "insert_axis"), "LINE")
    try:
        return AxisEmbedding.from_json(obj)
    except (ValueError, KeyError, TypeError) as e:
        raise FormatError(f"bad line embedding: {e}")


def candy_to_json(C: CandyModule) -> dict:
    out = {
        "module": pmod_to_json(C.module),
        "ul": list(C.ul),
        "lr": list(C.lr),
    }
    if C.line is not None:
        out["line"] = line_to_json(C.line)
    return out


def candy_from_json(obj: dict) -> CandyModule:
    _require(obj, ("module", "ul", "lr"), "candy")
    M = pmod_from_json(obj["module"])
    ul, lr = tuple(obj["ul"]), tuple(obj["lr"])
    if len(ul) != M.n or len(lr) != M.n:
        raise FormatError("corner coordinates have the wrong dimension")
    line = line_from_json(obj["line"]) if "line" in obj else None
    return CandyModule(M, ul, lr, line)


# ---------------------------------------------------------------------------
# files


def load(path: str) -> dict:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise FormatError(f"{path} is not valid JSON: {e}")
    if not isinstance(obj, dict):
        raise FormatError(f"{path}: expected a JSON object")
    return obj


def dump(obj: dict, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1, sort_keys=True)
        fh.write("\n")
