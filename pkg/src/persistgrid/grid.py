"""Persistence modules on finite boxes of Z^n and morphisms between them.

A module stores one dimension per vertex and one matrix per unit-step arrow;
all other internal maps are composites along the lexicographically smallest
monotone path, which commutativity makes canonical.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field as dc_field

from .fields import Field
from .linalg import Matrix

MAX_VERTICES_ENV = "PMOD_MAX_VERTICES"
DEFAULT_MAX_VERTICES = 100_000


def max_vertices() -> int:
    return int(os.environ.get(MAX_VERTICES_ENV, DEFAULT_MAX_VERTICES))


@dataclass(frozen=True)
class GridBox:
    """A product of integer intervals [lo_k, hi_k] in Z^n."""

    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo, hi = tuple(self.lo), tuple(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if len(lo) != len(hi):
            raise ValueError("lo and hi have different lengths")
        if any(a > b for a, b in zip(lo, hi)):
            raise ValueError(f"empty box: lo={lo} hi={hi}")
        if self.count > max_vertices():
            raise ValueError(f"box with {self.count} vertices exceeds the cap {max_vertices()}")

    @property
    def n(self) -> int:
        return len(self.lo)

    @property
    def count(self) -> int:
        c = 1
        for a, b in zip(self.lo, self.hi):
            c *= b - a + 1
        return c

    def contains(self, v) -> bool:
        return all(a <= x <= b for x, a, b in zip(v, self.lo, self.hi))

    def contains_box(self, other: "GridBox") -> bool:
        return self.contains(other.lo) and self.contains(other.hi)

    def vertices(self):
        """All vertices in lexicographic order."""
        def rec(prefix, k):
            if k == self.n:
                yield tuple(prefix)
                return
            for x in range(self.lo[k], self.hi[k] + 1):
                yield from rec(prefix + [x], k + 1)

        yield from rec([], 0)

    @staticmethod
    def hull(boxes: list["GridBox"]) -> "GridBox":
        lo = tuple(min(b.lo[k] for b in boxes) for k in range(boxes[0].n))
        hi = tuple(max(b.hi[k] for b in boxes) for k in range(boxes[0].n))
        return GridBox(lo, hi)


def _unit(n: int, k: int) -> tuple:
    return tuple(1 if i == k else 0 for i in range(n))


def vadd(v, w) -> tuple:
    return tuple(a + b for a, b in zip(v, w))


def vsub(v, w) -> tuple:
    return tuple(a - b for a, b in zip(v, w))


def vle(v, w) -> bool:
    return all(a <= b for a, b in zip(v, w))


class PersModule:
    """A persistence module confined to a finite box.

    dims holds only the vertices with positive dimension; steps holds only
    arrows between two such vertices.  Everything outside is zero.
    """

    __slots__ = ("field", "box", "dims", "steps", "layer_rects")

    def __init__(self, field: Field, box: GridBox, dims: dict, steps: dict):
        self.field = field
        self.box = box
        self.dims = {v: d for v, d in dims.items() if d > 0}
        self.steps = {}
        for v in self.dims:
            if not box.contains(v):
                raise ValueError(f"vertex {v} outside box")
        for (v, k), mat in steps.items():
            w = vadd(v, _unit(box.n, k))
            if self.dim(v) == 0 or self.dim(w) == 0:
                continue
            if mat.nrows != self.dim(w) or mat.ncols != self.dim(v):
                raise ValueError(f"step at ({v}, axis {k}) has shape {mat.nrows}x{mat.ncols}, want {self.dim(w)}x{self.dim(v)}")
            self.steps[(v, k)] = mat
        # missing arrows between positive-dimension vertices default to zero
        self.layer_rects = None  # optional per-layer rectangle structure, set by stack()

    @property
    def n(self) -> int:
        return self.box.n

    def dim(self, v) -> int:
        return self.dims.get(tuple(v), 0)

    def step(self, v, k) -> Matrix:
        v = tuple(v)
        w = vadd(v, _unit(self.n, k))
        m = self.steps.get((v, k))
        if m is not None:
            return m
        return Matrix.zero(self.field, self.dim(w), self.dim(v))

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def support(self):
        return set(self.dims)

    def is_zero(self) -> bool:
        return not self.dims

    def arrows(self):
        """All in-box unit arrows between positive-dimension vertices."""
        for v in self.dims:
            for k in range(self.n):
                w = vadd(v, _unit(self.n, k))
                if self.box.contains(w) and self.dim(w) > 0:
                    yield v, k, w

    def composite(self, x, y) -> Matrix:
        """The internal map M(x <= y), composed along a canonical path."""
        x, y = tuple(x), tuple(y)
        if not vle(x, y):
            raise ValueError(f"{x} is not <= {y}")
        if self.dim(x) == 0 or self.dim(y) == 0:
            return Matrix.zero(self.field, self.dim(y), self.dim(x))
        # lexicographically smallest vertex sequence: raise the last axis first
        acc = Matrix.identity(self.field, self.dim(x))
        cur = x
        for k in range(self.n - 1, -1, -1):
            while cur[k] < y[k]:
                acc = self.step(cur, k) @ acc
                cur = vadd(cur, _unit(self.n, k))
                if acc.is_zero():
                    return Matrix.zero(self.field, self.dim(y), self.dim(x))
        return acc

    def __eq__(self, other):
        if not isinstance(other, PersModule):
            return NotImplemented
        if self.field != other.field or self.box != other.box or self.dims != other.dims:
            return False
        keys = set(self.steps) | set(other.steps)
        return all(self.step(v, k) == other.step(v, k) for v, k in keys)

    def __repr__(self):
        return f"PersModule({self.field}, box={self.box.lo}..{self.box.hi}, total_dim={self.total_dim()})"

    def translate(self, t) -> "PersModule":
        t = tuple(t)
        box = GridBox(vadd(self.box.lo, t), vadd(self.box.hi, t))
        dims = {vadd(v, t): d for v, d in self.dims.items()}
        steps = {(vadd(v, t), k): m for (v, k), m in self.steps.items()}
        return PersModule(self.field, box, dims, steps)

    def validate(self) -> "ValidationReport":
        """Check shapes and every commutativity square."""
        for (v, k), m in self.steps.items():
            w = vadd(v, _unit(self.n, k))
            if m.nrows != self.dim(w) or m.ncols != self.dim(v):
                return ValidationReport(False, f"shape mismatch at ({v}, axis {k})", v)
        for v in self.dims:
            for j in range(self.n):
                for k in range(j + 1, self.n):
                    vj = vadd(v, _unit(self.n, j))
                    vk = vadd(v, _unit(self.n, k))
                    vjk = vadd(vj, _unit(self.n, k))
                    if not self.box.contains(vjk):
                        continue
                    lhs = self.step(vj, k) @ self.step(v, j)
                    rhs = self.step(vk, j) @ self.step(v, k)
                    if lhs != rhs:
                        return ValidationReport(False, f"commutativity fails on the square at {v}, axes ({j}, {k})", v)
        return ValidationReport(True, "ok", None)


@dataclass
class ValidationReport:
    ok: bool
    message: str
    vertex: tuple | None

    def __bool__(self):
        return self.ok


class ModMorphism:
    """A natural transformation, one matrix per vertex (zero ones omitted)."""

    __slots__ = ("source", "target", "comps")

    def __init__(self, source: PersModule, target: PersModule, comps: dict):
        if source.field != target.field:
            raise ValueError("source and target over different fields")
        if source.box != target.box:
            raise ValueError("source and target on different boxes")
        self.source = source
        self.target = target
        self.comps = {}
        for v, m in comps.items():
            v = tuple(v)
            if m.nrows != target.dim(v) or m.ncols != source.dim(v):
                raise ValueError(f"component at {v} has shape {m.nrows}x{m.ncols}, want {target.dim(v)}x{source.dim(v)}")
            if not m.is_zero():
                self.comps[v] = m

    @property
    def field(self) -> Field:
        return self.source.field

    def comp(self, v) -> Matrix:
        v = tuple(v)
        m = self.comps.get(v)
        if m is not None:
            return m
        return Matrix.zero(self.field, self.target.dim(v), self.source.dim(v))

    @staticmethod
    def identity(M: PersModule) -> "ModMorphism":
        return ModMorphism(M, M, {v: Matrix.identity(M.field, d) for v, d in M.dims.items()})

    @staticmethod
    def zero(source: PersModule, target: PersModule) -> "ModMorphism":
        return ModMorphism(source, target, {})

    def validate(self) -> ValidationReport:
        # every arrow with source dim > 0 at the tail and target dim > 0 at the
        # head constrains f; in particular source dim 0 at the head still
        # forces N(v -> w) . f_v = 0
        for v in self.source.dims:
            for k in range(self.source.n):
                w = vadd(v, _unit(self.source.n, k))
                if not self.source.box.contains(w) or self.target.dim(w) == 0:
                    continue
                if self.target.step(v, k) @ self.comp(v) != self.comp(w) @ self.source.step(v, k):
                    return ValidationReport(False, f"naturality fails on the arrow ({v}, axis {k})", v)
        return ValidationReport(True, "ok", None)

    def compose(self, other: "ModMorphism") -> "ModMorphism":
        """self after other."""
        if other.target is not self.source and other.target != self.source:
            raise ValueError("composition mismatch")
        verts = set(self.comps) & set(other.comps)
        return ModMorphism(other.source, self.target, {v: self.comp(v) @ other.comp(v) for v in verts})

    def __add__(self, other: "ModMorphism") -> "ModMorphism":
        verts = set(self.comps) | set(other.comps)
        return ModMorphism(self.source, self.target, {v: self.comp(v) + other.comp(v) for v in verts})

    def scale(self, c) -> "ModMorphism":
        return ModMorphism(self.source, self.target, {v: m.scale(c) for v, m in self.comps.items()})

    def __eq__(self, other):
        if not isinstance(other, ModMorphism):
            return NotImplemented
        if self.source != other.source or self.target != other.target:
            return False
        for v in set(self.comps) | set(other.comps):
            if self.comp(v) != other.comp(v):
                return False
        return True

    def is_pointwise_injective(self) -> bool:
        return all(self.comp(v).rank() == d for v, d in self.source.dims.items())

    def is_pointwise_surjective(self) -> bool:
        return all(self.comp(v).rank() == d for v, d in self.target.dims.items())

    def is_invertible(self) -> bool:
        if set(self.source.dims) != set(self.target.dims):
            return False
        if any(self.source.dim(v) != self.target.dim(v) for v in self.source.dims):
            return False
        return all(self.comp(v).is_invertible() for v in self.source.dims)

    def inverse(self) -> "ModMorphism":
        return ModMorphism(self.target, self.source, {v: self.comp(v).inverse() for v in self.source.dims})


# ---------------------------------------------------------------------------
# hyperplane embeddings


class AxisEmbedding:
    """A monotone injective map Z^n -> Z^{n+1}.

    Per-axis strictly increasing maps (affine with scale >= 1, or an explicit
    increasing table) plus one inserted constant coordinate.
    """

    def __init__(self, axis_maps: list, insert_pos: int, insert_value: int):
        # each axis map is ("affine", scale, offset) or ("table", start, values)
        self.axis_maps = []
        for am in axis_maps:
            if am[0] == "affine":
                _, scale, offset = am
                if scale < 1:
                    raise ValueError("affine axis map needs scale >= 1")
                self.axis_maps.append(("affine", int(scale), int(offset)))
            elif am[0] == "table":
                _, start, values = am
                values = [int(x) for x in values]
                if any(a >= b for a, b in zip(values, values[1:])):
                    raise ValueError("table axis map must be strictly increasing")
                self.axis_maps.append(("table", int(start), values))
            else:
                raise ValueError(f"unknown axis map {am!r}")
        self.insert_pos = insert_pos
        self.insert_value = insert_value
        if not (0 <= insert_pos <= len(self.axis_maps)):
            raise ValueError("insert position out of range")

    @property
    def n(self) -> int:
        return len(self.axis_maps)

    @staticmethod
    def layer(n: int, pos: int, value: int) -> "AxisEmbedding":
        """Identity on all axes, inserting a constant coordinate."""
        return AxisEmbedding([("affine", 1, 0)] * n, pos, value)

    def _apply_axis(self, k: int, x: int) -> int:
        am = self.axis_maps[k]
        if am[0] == "affine":
            return am[1] * x + am[2]
        start, values = am[1], am[2]
        i = x - start
        if not (0 <= i < len(values)):
            raise ValueError(f"{x} outside the table domain of axis {k}")
        return values[i]

    def apply(self, x) -> tuple:
        y = [self._apply_axis(k, xi) for k, xi in enumerate(x)]
        y.insert(self.insert_pos, self.insert_value)
        return tuple(y)

    def axis_preimage_range(self, k: int, lo: int, hi: int):
        """Largest integer range mapping into [lo, hi] on axis k, or None."""
        am = self.axis_maps[k]
        if am[0] == "affine":
            scale, offset = am[1], am[2]
            a = -(-(lo - offset) // scale)  # ceil
            b = (hi - offset) // scale
            return (a, b) if a <= b else None
        start, values = am[1], am[2]
        xs = [start + i for i, v in enumerate(values) if lo <= v <= hi]
        if not xs:
            return None
        return (min(xs), max(xs))

    def preimage_box(self, box: GridBox) -> GridBox | None:
        if self.insert_pos >= box.n or not (box.lo[self.insert_pos] <= self.insert_value <= box.hi[self.insert_pos]):
            return None
        lo, hi = [], []
        outer = [i for i in range(box.n) if i != self.insert_pos]
        for k, bi in enumerate(outer):
            r = self.axis_preimage_range(k, box.lo[bi], box.hi[bi])
            if r is None:
                return None
            lo.append(r[0])
            hi.append(r[1])
        return GridBox(tuple(lo), tuple(hi))

    def translate(self, t) -> "AxisEmbedding":
        """Compose with a translation by t of the target Z^{n+1}."""
        if len(t) != self.n + 1:
            raise ValueError("translation length must match the target dimension")
        outer = [ti for i, ti in enumerate(t) if i != self.insert_pos]
        maps = []
        for am, off in zip(self.axis_maps, outer):
            if am[0] == "affine":
                maps.append(("affine", am[1], am[2] + off))
            else:
                maps.append(("table", am[1], [x + off for x in am[2]]))
        return AxisEmbedding(maps, self.insert_pos, self.insert_value + t[self.insert_pos])

    def to_json(self) -> dict:
        maps = []
        for am in self.axis_maps:
            if am[0] == "affine":
                maps.append({"scale": am[1], "offset": am[2]})
            else:
                maps.append({"table": am[2], "start": am[1]})
        return {"axis_maps": maps, "insert_axis": {"pos": self.insert_pos, "value": self.insert_value}}

    @staticmethod
    def from_json(obj: dict) -> "AxisEmbedding":
        maps = []
        for am in obj["axis_maps"]:
            if "scale" in am:
                maps.append(("affine", am["scale"], am["offset"]))
            else:
                maps.append(("table", am.get("start", 0), am["table"]))
        ins = obj["insert_axis"]
        return AxisEmbedding(maps, ins["pos"], ins["value"])

    def __eq__(self, other):
        return (
            isinstance(other, AxisEmbedding)
            and self.axis_maps == other.axis_maps
            and self.insert_pos == other.insert_pos
            and self.insert_value == other.insert_value
        )


# ---------------------------------------------------------------------------
# the four core constructions on modules


def restrict(M: PersModule, L: AxisEmbedding, source_box: GridBox | None = None) -> PersModule:
    """Pull M back along the hyperplane embedding L."""
    if L.n != M.n - 1:
        raise ValueError(f"embedding from dimension {L.n} does not target dimension {M.n}")
    if source_box is None:
        source_box = L.preimage_box(M.box)
        if source_box is None:
            raise ValueError("the embedding misses the module box entirely")
    dims = {}
    for x in source_box.vertices():
        y = L.apply(x)
        if not M.box.contains(y):
            raise ValueError(f"image {y} of {x} escapes the module box")
        d = M.dim(y)
        if d:
            dims[x] = d
    steps = {}
    n = source_box.n
    for x in dims:
        for k in range(n):
            x2 = vadd(x, _unit(n, k))
            if source_box.contains(x2) and x2 in dims:
                steps[(x, k)] = M.composite(L.apply(x), L.apply(x2))
    return PersModule(M.field, source_box, dims, steps)


def pad(M: PersModule, target: GridBox) -> PersModule:
    """View M on a larger box, zero outside (padding by zeros)."""
    if not target.contains_box(M.box):
        raise ValueError("target box does not contain the module box")
    return PersModule(M.field, target, dict(M.dims), dict(M.steps))


def pad_morphism(f: ModMorphism, target: GridBox) -> ModMorphism:
    return ModMorphism(pad(f.source, target), pad(f.target, target), dict(f.comps))


def stack(layers: list[PersModule], links: list[ModMorphism], height_lo: int = 0) -> PersModule:
    """Assemble an (n+1)D module from n-D layers and connecting morphisms.

    Layer i sits at last coordinate height_lo + i; links[i] maps layer i to
    layer i+1.
    """
    if not layers:
        raise ValueError("need at least one layer")
    if len(links) != len(layers) - 1:
        raise ValueError("need exactly one link per adjacent layer pair")
    base = layers[0]
    for L in layers[1:]:
        if L.box != base.box or L.field != base.field:
            raise ValueError("layers must share box and field")
    for i, f in enumerate(links):
        if f.source != layers[i] or f.target != layers[i + 1]:
            raise ValueError(f"link {i} does not connect layers {i} -> {i + 1}")
    n = base.n
    box = GridBox(base.box.lo + (height_lo,), base.box.hi + (height_lo + len(layers) - 1,))
    dims = {}
    steps = {}
    for i, L in enumerate(layers):
        h = height_lo + i
        for v, d in L.dims.items():
            dims[v + (h,)] = d
        for (v, k), m in L.steps.items():
            steps[(v + (h,), k)] = m
        if i + 1 < len(layers):
            f = links[i]
            for v in L.dims:
                if layers[i + 1].dim(v) > 0:
                    steps[(v + (h,), n)] = f.comp(v)
    out = PersModule(base.field, box, dims, steps)
    return out


def direct_sum(M: PersModule, N: PersModule) -> PersModule:
    if M.box != N.box or M.field != N.field:
        raise ValueError("direct sum needs matching box and field")
    dims = {}
    for v in set(M.dims) | set(N.dims):
        dims[v] = M.dim(v) + N.dim(v)
    steps = {}
    n = M.n
    for v in dims:
        for k in range(n):
            w = vadd(v, _unit(n, k))
            if M.box.contains(w) and dims.get(w, 0) > 0:
                steps[(v, k)] = Matrix.block_diag(M.field, [M.step(v, k), N.step(v, k)])
    return PersModule(M.field, M.box, dims, steps)


def dualize(M: PersModule) -> PersModule:
    """The linear dual on the reversed box: coordinates flip, matrices transpose."""
    c = vadd(M.box.lo, M.box.hi)
    box = M.box
    n = M.n
    dims = {vsub(c, v): d for v, d in M.dims.items()}
    steps = {}
    for (v, k), m in M.steps.items():
        w = vadd(v, _unit(n, k))
        # arrow v -> w dualizes to (c - w) -> (c - v)
        steps[(vsub(c, w), k)] = m.transpose()
    return PersModule(M.field, box, dims, steps)


def dualize_morphism(f: ModMorphism) -> ModMorphism:
    """Dual of f: A -> B is a morphism dualize(B) -> dualize(A)."""
    A, B = f.source, f.target
    c = vadd(A.box.lo, A.box.hi)
    return ModMorphism(dualize(B), dualize(A), {vsub(c, v): m.transpose() for v, m in f.comps.items()})


def slice_layers(M: PersModule) -> tuple[list[PersModule], list[ModMorphism]]:
    """Split M along its last axis into layers and connecting morphisms."""
    n = M.n
    if n < 2:
        raise ValueError("slice_layers needs n >= 2")
    h_lo, h_hi = M.box.lo[-1], M.box.hi[-1]
    layers = []
    for h in range(h_lo, h_hi + 1):
        layers.append(restrict(M, AxisEmbedding.layer(n - 1, n - 1, h)))
    links = []
    for i, h in enumerate(range(h_lo, h_hi)):
        comps = {}
        for v in layers[i].dims:
            if layers[i + 1].dim(v) > 0:
                comps[v] = M.step(v + (h,), n - 1)
        links.append(ModMorphism(layers[i], layers[i + 1], comps))
    return layers, links
