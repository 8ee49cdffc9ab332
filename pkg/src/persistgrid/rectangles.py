"""Rectangle modules, canonical homomorphisms, the matrix formalism, and
1D barcodes / explicit interval decompositions.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .fields import Field
from .grid import GridBox, ModMorphism, PersModule, vadd, vle, vsub
from .linalg import Matrix


@dataclass(frozen=True)
class Rectangle:
    """I[b, d]: the field on the box [b, d], identities inside, zero outside."""

    b: tuple
    d: tuple

    def __post_init__(self):
        b, d = tuple(self.b), tuple(self.d)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)
        if len(b) != len(d) or not vle(b, d):
            raise ValueError(f"bad rectangle [{b}, {d}]")

    @property
    def n(self) -> int:
        return len(self.b)

    def contains(self, v) -> bool:
        return vle(self.b, v) and vle(v, self.d)

    def translate(self, t) -> "Rectangle":
        return Rectangle(vadd(self.b, t), vadd(self.d, t))


def canonical_hom_dim(A: Rectangle, B: Rectangle) -> int:
    """dim Hom(I[A], I[B]): 1 iff B.b <= A.b, B.d <= A.d and A.b <= B.d."""
    if A.n != B.n:
        raise ValueError("rectangles of different dimensions")
    return 1 if vle(B.b, A.b) and vle(B.d, A.d) and vle(A.b, B.d) else 0


def hom_leq(A: Rectangle, B: Rectangle) -> bool:
    """The relation A <= B iff a nonzero morphism A -> B exists."""
    return canonical_hom_dim(A, B) == 1


class RectDecomp:
    """An ordered formal direct sum of rectangles inside a box.

    Order matters: matrix-formalism entries are indexed by it.
    """

    def __init__(self, field: Field, box: GridBox, summands: list[Rectangle]):
        self.field = field
        self.box = box
        self.summands = list(summands)
        for r in self.summands:
            if r.n != box.n:
                raise ValueError("rectangle dimension does not match box")
            if not (box.contains(r.b) and box.contains(r.d)):
                raise ValueError(f"rectangle [{r.b}, {r.d}] escapes box {box.lo}..{box.hi}")

    def __len__(self):
        return len(self.summands)

    def __eq__(self, other):
        return (
            isinstance(other, RectDecomp)
            and self.field == other.field
            and self.box == other.box
            and self.summands == other.summands
        )

    def __repr__(self):
        return f"RectDecomp({self.field}, {[(r.b, r.d) for r in self.summands]})"

    @property
    def n(self) -> int:
        return self.box.n

    def on_box(self, box: GridBox) -> "RectDecomp":
        return RectDecomp(self.field, box, self.summands)

    def indices_at(self, v) -> list[int]:
        return [i for i, r in enumerate(self.summands) if r.contains(v)]

    def barcode(self) -> Counter:
        return Counter((r.b, r.d) for r in self.summands)

    def dualize(self) -> "RectDecomp":
        c = vadd(self.box.lo, self.box.hi)
        return RectDecomp(self.field, self.box, [Rectangle(vsub(c, r.d), vsub(c, r.b)) for r in self.summands])

    def translate(self, t) -> "RectDecomp":
        box = GridBox(vadd(self.box.lo, t), vadd(self.box.hi, t))
        return RectDecomp(self.field, box, [r.translate(t) for r in self.summands])


def rect_to_module(R: RectDecomp) -> PersModule:
    """The persistence module of a rectangle decomposition.

    The basis at each vertex lists the summands containing it, in summand
    order; steps are the induced 0/1 matrices.
    """
    field = R.field
    n = R.n
    dims = {}
    at: dict[tuple, list[int]] = {}
    for i, r in enumerate(R.summands):
        sub = GridBox(r.b, r.d)
        for v in sub.vertices():
            at.setdefault(v, []).append(i)
    for v, idxs in at.items():
        dims[v] = len(idxs)
    steps = {}
    one = field.one
    for v, idxs in at.items():
        for k in range(n):
            w = vadd(v, tuple(1 if i == k else 0 for i in range(n)))
            widx = at.get(w)
            if not R.box.contains(w) or not widx:
                continue
            m = Matrix.zero(field, len(widx), len(idxs))
            pos_w = {s: j for j, s in enumerate(widx)}
            for col, s in enumerate(idxs):
                j = pos_w.get(s)
                if j is not None:
                    m.rows[j][col] = one
            steps[(v, k)] = m
    return PersModule(field, R.box, dims, steps)


class FormalMatrix:
    """A morphism between rectangle-decomposable modules, one scalar per
    canonical homomorphism.  Entry (j, i) multiplies summand_i(source) ->
    summand_j(target); it must be zero when that hom space is zero.
    """

    def __init__(self, source: RectDecomp, target: RectDecomp, entries):
        if source.field != target.field:
            raise ValueError("field mismatch")
        if source.box != target.box:
            raise ValueError("box mismatch")
        self.source = source
        self.target = target
        self.entries = [list(r) for r in entries]
        if len(self.entries) != len(target) or any(len(r) != len(source) for r in self.entries):
            raise ValueError("entry grid shape mismatch")
        for j, row in enumerate(self.entries):
            for i, c in enumerate(row):
                if c != 0 and canonical_hom_dim(source.summands[i], target.summands[j]) == 0:
                    raise ValueError(f"nonzero entry ({j}, {i}) where the hom space is zero")

    @property
    def field(self) -> Field:
        return self.source.field

    @staticmethod
    def diagonal(source: RectDecomp, target: RectDecomp) -> "FormalMatrix":
        if len(source) != len(target):
            raise ValueError("diagonal needs equal summand counts")
        f = source.field
        ent = [[f.one if i == j else f.zero for i in range(len(source))] for j in range(len(target))]
        return FormalMatrix(source, target, ent)

    @staticmethod
    def ones_column(source: RectDecomp, target: RectDecomp) -> "FormalMatrix":
        if len(source) != 1:
            raise ValueError("ones_column needs a single source summand")
        f = source.field
        return FormalMatrix(source, target, [[f.one] for _ in range(len(target))])

    def compose(self, other: "FormalMatrix") -> "FormalMatrix":
        """self after other, in the formal calculus.

        A product of two nonzero canonical homs A -> B -> C is the canonical
        hom A -> C when A.b <= C.d, and the zero morphism otherwise; the
        formal product must drop those vanishing terms.
        """
        if other.target is not self.source and other.target != self.source:
            raise ValueError("composition mismatch")
        f = self.field
        src, mid, tgt = other.source, self.source, self.target
        out = [[f.zero] * len(src) for _ in range(len(tgt))]
        for j in range(len(tgt)):
            for k in range(len(mid)):
                a = self.entries[j][k]
                if a == 0:
                    continue
                for i in range(len(src)):
                    b = other.entries[k][i]
                    if b == 0:
                        continue
                    if vle(src.summands[i].b, tgt.summands[j].d):
                        out[j][i] = f.add(out[j][i], f.mul(a, b))
        return FormalMatrix(src, tgt, out)


def realize(F: FormalMatrix, check: bool = True) -> ModMorphism:
    """Assemble the actual natural transformation of a formal matrix."""
    src_mod = rect_to_module(F.source)
    tgt_mod = rect_to_module(F.target)
    f = F.field
    comps = {}
    for v in src_mod.dims:
        if tgt_mod.dim(v) == 0:
            continue
        sidx = F.source.indices_at(v)
        tidx = F.target.indices_at(v)
        m = Matrix.zero(f, len(tidx), len(sidx))
        for col, i in enumerate(sidx):
            for row, j in enumerate(tidx):
                c = F.entries[j][i]
                if c == 0:
                    continue
                # canonical hom summand_i -> summand_j is supported on [b_i, d_j]
                if vle(F.source.summands[i].b, v) and vle(v, F.target.summands[j].d):
                    m.rows[row][col] = c
        comps[v] = m
    phi = ModMorphism(src_mod, tgt_mod, comps)
    if check:
        rep = phi.validate()
        if not rep:
            raise AssertionError(f"realized formal matrix is not natural: {rep.message}")
    return phi


# ---------------------------------------------------------------------------
# 1D barcodes


def barcode_1d(M: PersModule) -> Counter:
    """Barcode of a 1D module by rank inclusion-exclusion.

    mult[b, d] = r(b,d) - r(b-1,d) - r(b,d+1) + r(b-1,d+1), where r(x,y) is
    the rank of M(x <= y) and r vanishes outside the box.
    """
    if M.n != 1:
        raise ValueError("barcode_1d needs a 1D module")
    lo, hi = M.box.lo[0], M.box.hi[0]
    r = {}
    for x in range(lo, hi + 1):
        acc = Matrix.identity(M.field, M.dim((x,)))
        r[(x, x)] = acc.rank()
        for y in range(x + 1, hi + 1):
            acc = M.step((y - 1,), 0) @ acc
            r[(x, y)] = acc.rank()

    def rk(x, y):
        if x < lo or y > hi:
            return 0
        return r[(x, y)]

    bars = Counter()
    for b in range(lo, hi + 1):
        for d in range(b, hi + 1):
            m = rk(b, d) - rk(b - 1, d) - rk(b, d + 1) + rk(b - 1, d + 1)
            if m < 0:
                raise AssertionError("negative barcode multiplicity")
            if m > 0:
                bars[((b,), (d,))] = m
    return bars


class _Chain:
    __slots__ = ("birth", "death", "vecs")

    def __init__(self, birth: int, vec: list):
        self.birth = birth
        self.death = None
        self.vecs = {birth: vec}


def interval_decompose_1d(M: PersModule):
    """Explicit interval decomposition of a 1D module.

    Returns (decomp, iso) where iso: rect_to_module(decomp) -> M is a
    pointwise invertible morphism.  Summands are ordered by (birth, death,
    creation order), deterministically.
    """
    if M.n != 1:
        raise ValueError("interval decomposition needs a 1D module")
    f = M.field
    lo, hi = M.box.lo[0], M.box.hi[0]
    active: list[_Chain] = []
    done: list[_Chain] = []

    def reduce_vec(vec, accepted, chain, x):
        """Reduce vec against accepted (pivot, chain) pairs, applying the same
        operations to the whole stored chain so the chain property survives."""
        for piv, other in accepted:
            c = vec[piv]
            if c == 0:
                continue
            ov = other.vecs[x]
            vec = [f.sub(a, f.mul(c, b)) for a, b in zip(vec, ov)]
            if chain is not None:
                for y in range(chain.birth, x):
                    cv, ovy = chain.vecs[y], other.vecs[y]
                    chain.vecs[y] = [f.sub(a, f.mul(c, b)) for a, b in zip(cv, ovy)]
        return vec

    for x in range(lo, hi + 1):
        d = M.dim((x,))
        accepted: list[tuple[int, _Chain]] = []
        survivors: list[_Chain] = []
        if x > lo and active:
            A = M.step((x - 1,), 0)
            # elder rule: older births reduce younger ones
            for chain in sorted(active, key=lambda c: c.birth):
                img = A.mul_vec(chain.vecs[x - 1]) if d else [f.zero] * 0
                vec = reduce_vec(list(img), accepted, chain, x) if d else []
                piv = next((i for i, a in enumerate(vec) if a != 0), None)
                if piv is None:
                    chain.death = x - 1
                    done.append(chain)
                else:
                    inv = f.inv(vec[piv])
                    if inv != f.one:
                        vec = [f.mul(inv, a) for a in vec]
                        for y in range(chain.birth, x):
                            chain.vecs[y] = [f.mul(inv, a) for a in chain.vecs[y]]
                    chain.vecs[x] = vec
                    accepted.append((piv, chain))
                    survivors.append(chain)
        elif active:
            survivors = active
        active = survivors
        # new chains born at x complete the basis
        for r in range(d):
            vec = [f.zero] * d
            vec[r] = f.one
            vec = reduce_vec(vec, accepted, None, x)
            piv = next((i for i, a in enumerate(vec) if a != 0), None)
            if piv is None:
                continue
            if vec[piv] != f.one:
                inv = f.inv(vec[piv])
                vec = [f.mul(inv, a) for a in vec]
            chain = _Chain(x, vec)
            accepted.append((piv, chain))
            active.append(chain)
    for chain in active:
        chain.death = hi
        done.append(chain)

    done.sort(key=lambda c: (c.birth, c.death, id(c)))
    order = sorted(range(len(done)), key=lambda i: (done[i].birth, done[i].death))
    chains = [done[i] for i in order]
    decomp = RectDecomp(f, M.box, [Rectangle((c.birth,), (c.death,)) for c in chains])
    canon = rect_to_module(decomp)
    comps = {}
    for v in canon.dims:
        x = v[0]
        alive = [c for c in chains if c.birth <= x <= c.death]
        cols = [c.vecs[x] for c in alive]
        comps[v] = Matrix(f, [[cols[j][i] for j in range(len(cols))] for i in range(M.dim(v))])
    iso = ModMorphism(canon, M, comps)
    return decomp, iso
