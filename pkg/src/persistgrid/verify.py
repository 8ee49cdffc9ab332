"""Certification: endomorphism algebras, indecomposability, isomorphism
certificates, and the constructive two-row decomposition.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .fields import Field
from .grid import GridBox, ModMorphism, PersModule, direct_sum, slice_layers, stack, vle
from .homspace import Context, HomSpace
from .linalg import Matrix, Poly, coprime_split, minimal_polynomial
from .rectangles import FormalMatrix, RectDecomp, realize, rect_to_module

# exhaustive endomorphism enumeration is attempted when |F|^end_dim stays
# below this; it makes finite-field verdicts conclusive in both directions
EXHAUSTIVE_CAP = 4096


def hom_basis(M: PersModule, N: PersModule, ctx: Context | None = None) -> list[ModMorphism]:
    ctx = ctx or Context()
    H = ctx.hom(M, N)
    out = []
    for b in H.basis:
        g = H.materialize(b)
        rep = g.validate()
        if not rep:
            raise AssertionError(f"hom basis element fails naturality: {rep.message}")
        out.append(g)
    return out


@dataclass
class EndAlgebra:
    """End(M) with structure constants over a fixed basis."""

    module: PersModule
    space: HomSpace
    mult_table: list  # mult_table[i][j][k]: coefficient of e_k in e_i . e_j
    identity: list

    @property
    def dim(self) -> int:
        return self.space.dim

    def basis_morphisms(self) -> list[ModMorphism]:
        return self.space.basis_morphisms()


def end_algebra(M: PersModule, ctx: Context | None = None) -> EndAlgebra:
    ctx = ctx or Context()
    E = ctx.hom(M, M)
    ident = E.coords_in_basis(E.express(ModMorphism.identity(M)))
    if ident is None:
        raise AssertionError("identity endomorphism outside the computed basis")
    table = []
    for bi in E.basis:
        row = []
        for bj in E.basis:
            prod = ctx.compose(M, M, M, bi, bj)
            coords = E.coords_in_basis(prod)
            if coords is None:
                raise AssertionError("product of endomorphisms escapes the basis span")
            row.append(coords)
        table.append(row)
    return EndAlgebra(M, E, table, ident)


def end_dim(M: PersModule, ctx: Context | None = None) -> int:
    return (ctx or Context()).hom(M, M).dim


def local_dim(M: PersModule, ctx: Context | None = None) -> int:
    """dim End(M)/rad over the rationals, via the trace-form radical.

    In characteristic zero rad(A) = {x : tr(L_x L_y) = 0 for all y}, so the
    semisimple quotient dimension is the rank of the trace Gram matrix.
    A value of 1 certifies that End(M) is local, hence M indecomposable.
    """
    if not M.field.is_rational:
        raise ValueError("local_dim needs characteristic zero; the trace-form radical is not sound over a prime field")
    alg = end_algebra(M, ctx)
    f = M.field
    d = alg.dim
    lefts = []
    for i in range(d):
        L = Matrix.zero(f, d, d)
        for j in range(d):
            for k in range(d):
                L.rows[k][j] = alg.mult_table[i][j][k]
        lefts.append(L)
    gram = Matrix.zero(f, d, d)
    for i in range(d):
        for j in range(d):
            P = lefts[i] @ lefts[j]
            gram.rows[i][j] = sum((P.rows[t][t] for t in range(d)), f.zero)
    return gram.rank()


# ---------------------------------------------------------------------------
# splitting


INDECOMPOSABLE = "IndecomposableCertified"
DECOMPOSABLE = "DecomposableCertified"
INCONCLUSIVE = "Inconclusive"


@dataclass
class IndecVerdict:
    status: str
    reason: str
    end_dim: int
    local_dim: int | None = None
    summands: tuple | None = None  # (M1, M2) when decomposable
    iso: ModMorphism | None = None  # direct_sum(M1, M2) -> M

    @property
    def conclusive(self) -> bool:
        return self.status != INCONCLUSIVE

    def to_json(self) -> dict:
        out = {"status": self.status, "reason": self.reason, "end_dim": self.end_dim}
        if self.local_dim is not None:
            out["local_dim"] = self.local_dim
        if self.summands is not None:
            A, B = self.summands
            out["witness"] = {
                "summand_dims": [
                    {str(v): d for v, d in sorted(A.dims.items())},
                    {str(v): d for v, d in sorted(B.dims.items())},
                ]
            }
        return out


def _endo_min_poly(a: ModMorphism) -> Poly:
    """Minimal polynomial of an endomorphism: lcm over the vertex blocks."""
    f = a.field
    m = None
    for v in a.source.dims:
        mv = minimal_polynomial(a.comp(v))
        m = mv if m is None else m.lcm(mv)
    return m if m is not None else Poly(f, [f.zero, f.one])


def _split_along(M: PersModule, a: ModMorphism, g: Poly, h: Poly):
    """M = ker g(a) + ker h(a) vertexwise; returns (M1, M2, iso) or None.

    Requires g, h coprime with g.h a multiple of the minimal polynomial, so
    the kernels are complementary submodules.
    """
    f = M.field
    P = {}
    split_dim = {}
    for v, d in M.dims.items():
        av = a.comp(v)
        K1 = g.eval_matrix(av).nullspace()
        K2 = h.eval_matrix(av).nullspace()
        if K1.ncols + K2.ncols != d:
            return None
        P[v] = Matrix.hstack([K1, K2])
        if not P[v].is_invertible():
            return None
        split_dim[v] = K1.ncols
    if all(split_dim[v] == 0 for v in M.dims) or all(split_dim[v] == M.dims[v] for v in M.dims):
        return None  # one side vanished everywhere: trivial split
    dims1 = {v: split_dim[v] for v in M.dims}
    dims2 = {v: M.dims[v] - split_dim[v] for v in M.dims}
    steps1, steps2 = {}, {}
    for v, k, w in M.arrows():
        B = P[w].inverse() @ (M.step(v, k) @ P[v])
        d1v, d1w = split_dim[v], split_dim[w]
        # kernels of coprime factors are invariant, so B must be block diagonal
        for r in range(d1w):
            for c in range(d1v, M.dims[v]):
                if B.rows[r][c] != 0:
                    return None
        for r in range(d1w, M.dims[w]):
            for c in range(d1v):
                if B.rows[r][c] != 0:
                    return None
        steps1[(v, k)] = B.submatrix(range(d1w), range(d1v))
        steps2[(v, k)] = B.submatrix(range(d1w, M.dims[w]), range(d1v, M.dims[v]))
    M1 = PersModule(f, M.box, dims1, steps1)
    M2 = PersModule(f, M.box, dims2, steps2)
    if M1.is_zero() or M2.is_zero():
        return None
    iso = ModMorphism(direct_sum(M1, M2), M, {v: P[v] for v in M.dims})
    rep = iso.validate()
    if not rep or not iso.is_invertible():
        return None
    return M1, M2, iso


def _try_element(M: PersModule, a: ModMorphism, rng):
    mp = _endo_min_poly(a)
    gh = coprime_split(mp, rng)
    if gh is not None:
        got = _split_along(M, a, gh[0], gh[1])
        if got is not None:
            return got
    # Fitting fallback: a neither nilpotent nor invertible splits M into
    # ker a^N and im a^N, N = total dimension; here im a^N = ker rem(a) with
    # mp = x^k . rem, rem(0) != 0
    f = M.field
    if mp.coeffs and mp.coeffs[0] == 0:
        rem = mp
        k = 0
        while not rem.is_zero() and rem.coeffs[0] == 0:
            rem = Poly(f, rem.coeffs[1:])
            k += 1
        if k > 0 and rem.degree > 0:
            N = max(M.total_dim(), 1)
            xN = Poly(f, [f.zero] * N + [f.one])
            got = _split_along(M, a, xN, rem)
            if got is not None:
                return got
    return None


def try_split(M: PersModule, seed: int = 0, trials: int = 24, ctx: Context | None = None) -> IndecVerdict:
    """Certify M indecomposable or produce an explicit nontrivial splitting.

    Conclusive when end_dim = 1, when the trace-form quotient has dimension 1
    (rationals), when a splitting element is found, or when the endomorphism
    algebra over a small finite field can be enumerated exhaustively.
    """
    ctx = ctx or Context()
    if M.is_zero():
        return IndecVerdict(INCONCLUSIVE, "zero module", 0)
    E = ctx.hom(M, M)
    ed = E.dim
    if ed == 1:
        return IndecVerdict(INDECOMPOSABLE, "end_dim = 1", ed)
    ld = None
    if M.field.is_rational:
        ld = local_dim(M, ctx)
        if ld == 1:
            return IndecVerdict(INDECOMPOSABLE, "local endomorphism ring: dim End/rad = 1", ed, ld)
    rng = random.Random(seed)
    f = M.field
    if not f.is_rational and f.p ** ed <= EXHAUSTIVE_CAP:
        # walk every endomorphism; any nontrivial idempotent has minimal
        # polynomial x(x-1) and would be split, so finishing clean is a proof
        coeffs = [f.zero] * ed
        while True:
            i = 0
            while i < ed and coeffs[i] == f.of(f.p - 1):
                coeffs[i] = f.zero
                i += 1
            if i == ed:
                break
            coeffs[i] = f.add(coeffs[i], f.one)
            amb: dict = {}
            for c, b in zip(coeffs, E.basis):
                if c == 0:
                    continue
                for k, v in b.items():
                    amb[k] = f.add(amb.get(k, f.zero), f.mul(c, v))
            a = E.materialize({k: v for k, v in amb.items() if v != 0})
            got = _try_element(M, a, rng)
            if got is not None:
                return IndecVerdict(DECOMPOSABLE, "splitting endomorphism found", ed, ld, (got[0], got[1]), got[2])
        return IndecVerdict(INDECOMPOSABLE, "exhaustive endomorphism enumeration found no idempotent", ed, ld)
    for t in range(trials):
        amb = E.random_element(rng)
        if not amb:
            continue
        a = E.materialize(amb)
        got = _try_element(M, a, rng)
        if got is not None:
            if ld == 1:
                raise AssertionError("splitting found despite local evidence")
            return IndecVerdict(DECOMPOSABLE, "splitting endomorphism found", ed, ld, (got[0], got[1]), got[2])
    return IndecVerdict(INCONCLUSIVE, f"no splitting element after {trials} trials", ed, ld)


# ---------------------------------------------------------------------------
# isomorphism certificates


@dataclass
class IsoReport:
    isomorphic: bool | None  # None: no certificate found, not a proof
    witness: ModMorphism | None
    reason: str

    def to_json(self) -> dict:
        return {
            "isomorphic": self.isomorphic,
            "reason": self.reason,
            "has_witness": self.witness is not None,
        }


def iso_certificate(M: PersModule, N: PersModule, seed: int = 0, trials: int = 30, ctx: Context | None = None) -> IsoReport:
    """Search for a pointwise invertible natural transformation M -> N.

    Complete in 1D (barcode comparison); for n >= 2, absence of a witness
    after the trials is not a proof of non-isomorphism, except through the
    dimension-function obstruction.
    """
    if M.field != N.field or M.box != N.box:
        raise ValueError("iso certificate needs matching box and field")
    ctx = ctx or Context()
    if dict(M.dims) != dict(N.dims):
        return IsoReport(False, None, "dimension functions differ")
    if M.is_zero():
        return IsoReport(True, ModMorphism.zero(M, N), "both zero")
    if M.n == 1:
        DM, isoM, _ = ctx.decomp1(M)
        DN, isoN, _ = ctx.decomp1(N)
        if DM.barcode() != DN.barcode():
            return IsoReport(False, None, "barcodes differ")
        invM = isoM.inverse()
        F = realize(FormalMatrix.diagonal(DM, DN), check=False)
        phi = isoN.compose(F).compose(invM)
        return IsoReport(True, phi, "matching barcodes")
    H = ctx.hom(M, N)
    rng = random.Random(seed)
    for t in range(trials):
        amb = H.random_element(rng)
        if not amb:
            continue
        phi = H.materialize(amb)
        if phi.is_invertible():
            return IsoReport(True, phi, f"random hom-span element invertible (trial {t})")
    return IsoReport(None, None, f"no invertible element found in {trials} trials")


# ---------------------------------------------------------------------------
# two-row decomposition


@dataclass
class TwoRowSplit:
    summands: list  # three PersModules on the original box
    iso: ModMorphism  # direct_sum of the three -> M
    gap: tuple


def find_gap(M: PersModule) -> tuple | None:
    """A zero vertex lying between two nonzero vertices, if any."""
    for y in sorted(M.box.vertices()):
        if M.dim(y) > 0:
            continue
        below = any(vle(x, y) for x in M.dims)
        above = any(vle(y, z) for z in M.dims)
        if below and above:
            return y
    return None


def decompose_two_rows(M: PersModule, y: tuple | None = None, ctx: Context | None = None) -> TwoRowSplit:
    """Constructive decomposition of a module on an m x 2 grid with a gap.

    Interval-decompose both rows and sort the intervals into three groups on
    each row so the connecting morphism is block diagonal: with the gap at
    column y0 on the lower row, lower intervals split by position (deaths
    left of y0 / empty / births right of y0) and upper intervals by death
    (< y0 / = y0 / > y0); with the gap on the upper row the dual rule splits
    upper intervals by position and lower intervals by birth.
    """
    if M.n != 2 or M.box.hi[1] - M.box.lo[1] != 1:
        raise ValueError("decompose_two_rows needs a module on an m x 2 box")
    if y is None:
        y = find_gap(M)
        if y is None:
            raise ValueError("no zero vertex between nonzero vertices")
    y = tuple(y)
    if M.dim(y) != 0:
        raise ValueError(f"vertex {y} is not a gap")
    if not (any(vle(x, y) for x in M.dims) and any(vle(y, z) for z in M.dims)):
        raise ValueError(f"vertex {y} is not between nonzero vertices")
    ctx = ctx or Context()
    rows, links = ctx.layers(M)
    L, U = rows
    link = links[0]
    DL, isoL, _ = ctx.decomp1(L)
    DU, isoU, _ = ctx.decomp1(U)
    y0 = y[0]
    lower = y[1] == M.box.lo[1]

    def group_of(r, is_upper):
        b, d = r.b[0], r.d[0]
        if lower:
            if not is_upper:
                if d < y0:
                    return 1
                if b > y0:
                    return 3
                raise AssertionError("lower interval crosses the gap")
            return 1 if d < y0 else (2 if d == y0 else 3)
        if is_upper:
            if d < y0:
                return 1
            if b > y0:
                return 3
            raise AssertionError("upper interval crosses the gap")
        return 1 if b < y0 else (2 if b == y0 else 3)

    gL = [group_of(r, False) for r in DL.summands]
    gU = [group_of(r, True) for r in DU.summands]
    coords = ctx.express(L, U, link)
    for (i, j), c in coords.items():
        if gL[i] != gU[j]:
            raise AssertionError("connecting morphism is not block diagonal over the grouping")
    f = M.field
    h0 = M.box.lo[1]
    summands = []
    for g in (1, 2, 3):
        li = [i for i in range(len(DL)) if gL[i] == g]
        ui = [j for j in range(len(DU)) if gU[j] == g]
        subL = RectDecomp(f, L.box, [DL.summands[i] for i in li])
        subU = RectDecomp(f, U.box, [DU.summands[j] for j in ui])
        ent = [[coords.get((i, j), f.zero) for i in li] for j in ui]
        ml = rect_to_module(subL)
        mu = rect_to_module(subU)
        sub_link = realize(FormalMatrix(subL, subU, ent), check=False)
        summands.append(stack([ml, mu], [sub_link], height_lo=h0))
    total = direct_sum(direct_sum(summands[0], summands[1]), summands[2])
    # the direct-sum basis at a vertex lists group 1 then 2 then 3 survivors;
    # map each back through the row isomorphisms
    comps = {}
    for row_idx, (D, iso_row) in enumerate(((DL, isoL), (DU, isoU))):
        grp = gL if row_idx == 0 else gU
        h = h0 + row_idx
        row_mod = rows[row_idx]
        for v in row_mod.dims:
            present = D.indices_at(v)
            ordering = [i for g in (1, 2, 3) for i in present if grp[i] == g]
            src = iso_row.comp(v)
            m = Matrix.zero(f, row_mod.dim(v), len(ordering))
            for col, i in enumerate(ordering):
                c0 = present.index(i)
                for r in range(row_mod.dim(v)):
                    m.rows[r][col] = src.rows[r][c0]
            comps[v + (h,)] = m
    iso = ModMorphism(total, M, comps)
    rep = iso.validate()
    if not rep:
        raise AssertionError(f"two-row isomorphism fails naturality: {rep.message}")
    if not iso.is_invertible():
        raise AssertionError("two-row isomorphism is not invertible")
    if sum(1 for s in summands if not s.is_zero()) < 2:
        raise AssertionError("two-row decomposition came out trivial")
    return TwoRowSplit(summands, iso, y)


# ---------------------------------------------------------------------------
# candy checks


@dataclass
class CandyReport:
    ok: bool
    messages: list

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {"ok": self.ok, "messages": self.messages}


def check_candy(M: PersModule, ul: tuple, lr: tuple, ctx: Context | None = None) -> CandyReport:
    """Corner dimensions 1, corner positions at the support's bounding box
    (ul: smallest in the leading coordinates, largest in the last; lr: the
    opposite), and a scalar endomorphism ring.
    """
    ctx = ctx or Context()
    msgs = []
    ok = True
    if M.is_zero():
        return CandyReport(False, ["zero module"])
    n = M.n
    support = list(M.dims)
    exp_ul = tuple(min(v[k] for v in support) for k in range(n - 1)) + (max(v[-1] for v in support),)
    exp_lr = tuple(max(v[k] for v in support) for k in range(n - 1)) + (min(v[-1] for v in support),)
    if tuple(ul) != exp_ul:
        ok = False
        msgs.append(f"upper-left corner {tuple(ul)} != bounding position {exp_ul}")
    if tuple(lr) != exp_lr:
        ok = False
        msgs.append(f"lower-right corner {tuple(lr)} != bounding position {exp_lr}")
    for name, c in (("upper-left", tuple(ul)), ("lower-right", tuple(lr))):
        if M.dim(c) != 1:
            ok = False
            msgs.append(f"{name} corner has dimension {M.dim(c)}, want 1")
    ed = end_dim(M, ctx)
    if ed != 1:
        ok = False
        msgs.append(f"end_dim = {ed}, want 1")
    if ok:
        msgs.append("ok")
    return CandyReport(ok, msgs)
