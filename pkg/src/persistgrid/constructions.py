"""Builders realizing a module as a hyperplane restriction of a taller
indecomposable: the four-layer stack over rectangle decompositions, its
five-layer extension via projective covers (and the dual via injective
envelopes), candy wrapping and concatenation, and the three/four-layer
minimal variants.

The input copy always sits at height 0 of the stacking axis, so every
returned embedding inserts the constant 0 as the last coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .covers import injective_envelope, projective_cover
from .grid import (AxisEmbedding, GridBox, ModMorphism, PersModule, dualize, pad,
                   pad_morphism, restrict, stack, vadd, vsub)
from .linalg import Matrix
from .rectangles import FormalMatrix, RectDecomp, Rectangle, realize, rect_to_module


@dataclass
class BuildResult:
    M: PersModule
    line: AxisEmbedding
    layer_count: int
    meta: dict = dc_field(default_factory=dict)


@dataclass
class CandyModule:
    """A stacked module with one-dimensional corner handles.

    ul minimizes every coordinate except the last (maximized); lr is the
    opposite.  line, when present, recovers the wrapped input.
    """

    module: PersModule
    ul: tuple
    lr: tuple
    line: AxisEmbedding | None = None


@dataclass
class StringResult:
    candy: CandyModule
    embeddings: list  # one AxisEmbedding per input, in order


# ---------------------------------------------------------------------------
# separate-and-shift / verticalize / cone


def separate_and_shift(V: RectDecomp) -> list:
    """Distinct shifted deaths d' with d'_j >= d_j, (b_j + d'_j)/2 <= d'_i
    for all pairs, and b_j + d'_j even in every component.

    Deterministic rule: C = (largest coordinate appearing in V) + 2m, then
    d'_j = C + 2j per component, bumped by 1 where needed for parity.
    """
    if not V.summands:
        raise ValueError("empty rectangle decomposition")
    m = len(V)
    n = V.n
    C = max(max(max(r.b), max(r.d)) for r in V.summands) + 2 * m
    out = []
    for j, r in enumerate(V.summands, start=1):
        base = C + 2 * j
        out.append(tuple(base + ((r.b[k] + base) % 2) for k in range(n)))
    return out


def verticalize(V: RectDecomp, dprime: list) -> tuple:
    """mu = componentwise max of (b_i + d'_i)/2 and births b'_i = 2 mu - d'_i."""
    n = V.n
    for r, dp in zip(V.summands, dprime):
        if any((r.b[k] + dp[k]) % 2 for k in range(n)):
            raise ValueError("parity guarantee violated: b + d' must be even componentwise")
    mu = tuple(max((r.b[k] + dp[k]) // 2 for r, dp in zip(V.summands, dprime)) for k in range(n))
    bprime = [tuple(2 * mu[k] - dp[k] for k in range(n)) for dp in dprime]
    return mu, bprime


def cone(bprime: list, dprime: list) -> Rectangle:
    n = len(bprime[0])
    return Rectangle(
        tuple(max(b[k] for b in bprime) for k in range(n)),
        tuple(max(d[k] for d in dprime) for k in range(n)),
    )


def _hull_box(rects: list, extra: list = ()) -> GridBox:
    pts = [r.b for r in rects] + [r.d for r in rects] + list(extra)
    n = len(pts[0])
    return GridBox(
        tuple(min(p[k] for p in pts) for k in range(n)),
        tuple(max(p[k] for p in pts) for k in range(n)),
    )


def _s_chain(V: RectDecomp):
    """The four rectangle layers I_V -> Vbar -> V' -> V with formal links."""
    dprime = separate_and_shift(V)
    mu, bprime = verticalize(V, dprime)
    iv = cone(bprime, dprime)
    box = GridBox.hull([
        _hull_box(V.summands + [iv] + [Rectangle(b, d) for b, d in zip(bprime, dprime)]),
        V.box,
    ])
    d_iv = RectDecomp(V.field, box, [iv])
    d_bar = RectDecomp(V.field, box, [Rectangle(b, d) for b, d in zip(bprime, dprime)])
    d_pr = RectDecomp(V.field, box, [Rectangle(r.b, d) for r, d in zip(V.summands, dprime)])
    d_v = V.on_box(box)
    links = [
        FormalMatrix.ones_column(d_iv, d_bar),
        FormalMatrix.diagonal(d_bar, d_pr),
        FormalMatrix.diagonal(d_pr, d_v),
    ]
    meta = {"dprime": dprime, "mu": mu, "bprime": bprime, "cone": iv}
    return [d_iv, d_bar, d_pr, d_v], links, meta


def build_S(V: RectDecomp) -> BuildResult:
    """Four layers I_V -> Vbar -> V' -> V stacked, V at height 0."""
    decomps, links, meta = _s_chain(V)
    layers = [rect_to_module(d) for d in decomps]
    morphs = [realize(f, check=False) for f in links]
    M = stack(layers, morphs, height_lo=-3)
    line = AxisEmbedding.layer(V.n, V.n, 0)
    meta["decomps"] = decomps
    meta["source_box"] = decomps[0].box
    return BuildResult(M, line, 4, meta)


def build_S_prime(V: PersModule) -> BuildResult:
    """Five layers: the four-layer stack on a projective cover R of V,
    with the cover surjection p: R ->> V appended; V at height 0."""
    if V.is_zero():
        raise ValueError("zero module")
    cov = projective_cover(V)
    decomps, links, meta = _s_chain(cov.decomp)
    box = GridBox.hull([decomps[0].box, V.box])
    layers = [rect_to_module(d.on_box(box)) for d in decomps] + [pad(V, box)]
    morphs = [realize(f, check=False) for f in links]
    # realized links live on the chain's own hull box; repad onto the joint box
    morphs = [ModMorphism(layers[i], layers[i + 1], m.comps) for i, m in enumerate(morphs)]
    morphs.append(ModMorphism(layers[3], layers[4], cov.morphism.comps))
    M = stack(layers, morphs, height_lo=-4)
    line = AxisEmbedding.layer(V.n, V.n, 0)
    meta.update({"decomps": decomps, "source_box": V.box, "cover": cov})
    return BuildResult(M, line, 5, meta)


def build_S_dprime(V: PersModule) -> BuildResult:
    """The dual five layers V -> T -> T' -> Tbar -> I_T, V at height 0.

    Computed by dualizing the primal stack of the dual module, then
    translating the result so the V copy comes back to V's own coordinates.
    """
    if V.is_zero():
        raise ValueError("zero module")
    prim = build_S_prime(dualize(V))
    Md = dualize(prim.M)
    H = Md.box
    cH = tuple(H.lo[k] + H.hi[k] for k in range(V.n))
    cV = vadd(V.box.lo, V.box.hi)
    t = tuple(cV[k] - cH[k] for k in range(V.n)) + (4,)
    M = Md.translate(t)
    line = AxisEmbedding.layer(V.n, V.n, 0)
    return BuildResult(M, line, 5, {"source_box": V.box})


def candy_wrap(V: PersModule) -> CandyModule:
    """Nine layers I_R -> Rbar -> R' -> R -> V -> T -> T' -> Tbar -> I_T."""
    if V.is_zero():
        raise ValueError("cannot wrap the zero module")
    prim = build_S_prime(V)  # heights -4..0
    dual = build_S_dprime(V)  # heights 0..4
    n = V.n
    H = GridBox.hull([
        GridBox(prim.M.box.lo[:n], prim.M.box.hi[:n]),
        GridBox(dual.M.box.lo[:n], dual.M.box.hi[:n]),
    ])
    box = GridBox(H.lo + (-4,), H.hi + (4,))
    dims = dict(prim.M.dims)
    steps = dict(prim.M.steps)
    for v, d in dual.M.dims.items():
        if v[-1] == 0:
            if dims.get(v) != d:
                raise AssertionError("primal and dual stacks disagree on the shared layer")
        else:
            dims[v] = d
    for (v, k), m in dual.M.steps.items():
        if v[-1] >= 0 and not (v[-1] == 0 and k < n):
            steps[(v, k)] = m
    M = PersModule(V.field, box, dims, steps)
    support = list(M.dims)
    ul = tuple(min(v[k] for v in support) for k in range(n)) + (4,)
    lr = tuple(max(v[k] for v in support) for k in range(n)) + (-4,)
    return CandyModule(M, ul, lr, AxisEmbedding.layer(n, n, 0))


def _concat(A: CandyModule, B: CandyModule):
    MA, MB = A.module, B.module
    if MA.field != MB.field:
        raise ValueError("concatenation needs a common field")
    if MA.n != MB.n:
        raise ValueError("concatenation needs a common ambient dimension")
    N = MA.n
    if N < 2:
        raise ValueError("concatenation needs at least two dimensions")
    e_snd = tuple(1 if i == N - 2 else 0 for i in range(N))
    e_last = tuple(1 if i == N - 1 else 0 for i in range(N))
    # align lr(A) with ul(B), then push B one step down and one step right
    t = vadd(vsub(A.lr, B.ul), vsub(e_snd, e_last))
    B2 = MB.translate(t)
    x = vsub(A.lr, e_last)
    dims = dict(MA.dims)
    for v, d in B2.dims.items():
        if v in dims:
            raise AssertionError("candy supports overlap after translation")
        dims[v] = d
    steps = dict(MA.steps)
    steps.update(B2.steps)
    # joining handle: a copy of B's top layer shifted one step back along the
    # second-to-last axis, mapped identically onto that layer, with its corner
    # x = ul(B2) - e_{N-2} = lr(A) - e_{N-1} also mapped onto lr(A).  In 2D the
    # shift stays inside the top layer and only the single vertex x is new;
    # in higher dimensions a lone vertex cannot commute with the top layer's
    # sideways arrows, so the whole shifted copy is needed.
    h_top = vadd(B.ul, t)[-1]
    tops = [w for w in B2.dims if w[-1] == h_top]
    fresh = {}
    for w in tops:
        u = vsub(w, e_snd)
        if u in dims:
            continue
        fresh[u] = w
        dims[u] = B2.dim(w)
    if x not in fresh:
        raise AssertionError("joining vertex collides with a candy support")
    for u, w in fresh.items():
        steps[(u, N - 2)] = Matrix.identity(MA.field, dims[u])
        for k in range(N - 1):
            if k == N - 2:
                continue
            uk = vadd(u, tuple(1 if i == k else 0 for i in range(N)))
            if uk in dims:
                steps[(u, k)] = B2.step(w, k)
    steps[(x, N - 1)] = Matrix.identity(MA.field, dims[x])  # x -> lr(A)
    box = GridBox.hull([MA.box, B2.box, GridBox(x, x)])
    M = PersModule(MA.field, box, dims, steps)
    rep = M.validate()
    if not rep:
        raise AssertionError(f"concatenation broke commutativity: {rep.message}")
    return CandyModule(M, A.ul, vadd(B.lr, t)), t


def concat(A: CandyModule, B: CandyModule) -> CandyModule:
    return _concat(A, B)[0]


def string_candies(mods: list) -> StringResult:
    """Wrap each module and fold concat left to right, tracking where each
    input's restriction line lands."""
    if not mods:
        raise ValueError("need at least one module")
    candies = [candy_wrap(m) for m in mods]
    cur = candies[0]
    embeds = [candies[0].line]
    for c in candies[1:]:
        cur, t = _concat(cur, c)
        embeds.append(c.line.translate(t))
    return StringResult(cur, embeds)


# ---------------------------------------------------------------------------
# three-layer and four-layer minimal constructions


def _greedy_points(windows: list) -> list:
    """Pairwise distinct integers, one per window, earliest deadline first."""
    order = sorted(range(len(windows)), key=lambda i: (windows[i][1], windows[i][0], i))
    taken = set()
    out = [None] * len(windows)
    for i in order:
        lo, hi = windows[i]
        t = lo
        while t in taken:
            t += 1
        if t > hi:
            raise AssertionError("greedy point selection ran out of room")
        taken.add(t)
        out[i] = t
    return out


def min3_rect(V: RectDecomp) -> BuildResult:
    """Three layers I'_V -> V'' -> V~ with distinct first coordinates.

    The first axis is refined by the scale s = 2(m+1): each summand becomes
    the window [s b1, s d1] there (simple summands with b1 = d1 inflate to
    [s b1 - m, s b1 + m]), the refined births b'_i take pairwise distinct
    first coordinates inside their windows, and deaths d'_i = D + (m - rank)
    on the first axis keep the interleaved ordering that makes endomorphisms
    of V'' diagonal.  The line samples first coordinates at multiples of s.
    """
    if not V.summands:
        raise ValueError("empty rectangle decomposition")
    m = len(V)
    n = V.n
    s = 2 * (m + 1)
    windows = []
    for r in V.summands:
        b1, d1 = r.b[0], r.d[0]
        if b1 == d1:
            windows.append((s * b1 - m, s * b1 + m))
        else:
            windows.append((s * b1, s * d1))
    ts = _greedy_points(windows)
    order = sorted(range(m), key=lambda i: ts[i])
    tilde = [Rectangle((windows[i][0],) + r.b[1:], (windows[i][1],) + r.d[1:])
             for i, r in ((i, V.summands[i]) for i in order)]
    D = tuple(max(r.d[k] for r in tilde) for k in range(n))
    bprime = [(ts[i],) + V.summands[i].b[1:] for i in order]
    dprime = [(D[0] + (m - rank),) + D[1:] for rank in range(1, m + 1)]
    vpp = [Rectangle(b, d) for b, d in zip(bprime, dprime)]
    iv = cone(bprime, dprime)
    scaled = GridBox((s * V.box.lo[0],) + V.box.lo[1:], (s * V.box.hi[0],) + V.box.hi[1:])
    box = GridBox.hull([_hull_box(tilde + vpp + [iv]), scaled])
    d_iv = RectDecomp(V.field, box, [iv])
    d_vpp = RectDecomp(V.field, box, vpp)
    d_tilde = RectDecomp(V.field, box, tilde)
    layers = [rect_to_module(d) for d in (d_iv, d_vpp, d_tilde)]
    morphs = [
        realize(FormalMatrix.ones_column(d_iv, d_vpp), check=False),
        realize(FormalMatrix.diagonal(d_vpp, d_tilde), check=False),
    ]
    M = stack(layers, morphs, height_lo=-2)
    maps = [("affine", s, 0)] + [("affine", 1, 0)] * (n - 1)
    line = AxisEmbedding(maps, n, 0)
    meta = {
        "s": s,
        "windows": [windows[i] for i in order],
        "bprime": bprime,
        "dprime": dprime,
        "decomps": [d_iv, d_vpp, d_tilde],
        "order": order,
        "source_box": V.box,
    }
    return BuildResult(M, line, 3, meta)


def min3(V: RectDecomp) -> BuildResult:
    """The 1D three-layer construction (min3_rect specialized to n = 1)."""
    if V.n != 1:
        raise ValueError("min3 takes a 1D decomposition; use min3_rect for higher dimensions")
    return min3_rect(V)


def _stretch_first(V: PersModule, s: int) -> PersModule:
    """Pullback of V along (y1, rest) -> (floor(y1/s), rest)."""
    n = V.n
    box = GridBox((s * V.box.lo[0],) + V.box.lo[1:], (s * V.box.hi[0] + s - 1,) + V.box.hi[1:])

    def down(y):
        return (y[0] // s,) + y[1:]

    dims = {}
    for v, d in V.dims.items():
        for r in range(s * v[0], s * v[0] + s):
            dims[(r,) + v[1:]] = d
    steps = {}
    f = V.field
    for y in dims:
        x = down(y)
        y1 = vadd(y, tuple(1 if i == 0 else 0 for i in range(n)))
        if box.contains(y1) and y1 in dims:
            steps[(y, 0)] = Matrix.identity(f, dims[y]) if y1[0] // s == x[0] else V.step(x, 0)
        for k in range(1, n):
            yk = vadd(y, tuple(1 if i == k else 0 for i in range(n)))
            if box.contains(yk) and yk in dims:
                steps[(y, k)] = V.step(x, k)
    return PersModule(f, box, dims, steps)


def gen4(V: PersModule) -> BuildResult:
    """Four layers I'_R -> R'' -> R~ -> V~ for a general module V.

    R is a projective cover of V.  To let the cover surjection live on the
    refined first axis, both R and V are stretched by pulling back along
    (y1, rest) -> (floor(y1/s), rest): a rectangle [b, d] becomes the window
    [s b1, s d1 + s - 1], wide enough that no inflation is ever needed, and
    p becomes p composed with the stretch.  Sampling first coordinates at
    multiples of s recovers p and V exactly.
    """
    if V.is_zero():
        raise ValueError("zero module")
    cov = projective_cover(V)
    m = len(cov.decomp)
    n = V.n
    s = 2 * (m + 1)
    windows = [(s * r.b[0], s * r.d[0] + s - 1) for r in cov.decomp.summands]
    ts = _greedy_points(windows)
    order = sorted(range(m), key=lambda i: ts[i])
    tilde = [Rectangle((windows[i][0],) + r.b[1:], (windows[i][1],) + r.d[1:])
             for i, r in ((i, cov.decomp.summands[i]) for i in order)]
    D = tuple(max(r.d[k] for r in tilde) for k in range(n))
    bprime = [(ts[i],) + cov.decomp.summands[i].b[1:] for i in order]
    dprime = [(D[0] + (m - rank),) + D[1:] for rank in range(1, m + 1)]
    rpp = [Rectangle(b, d) for b, d in zip(bprime, dprime)]
    iv = cone(bprime, dprime)
    VG = _stretch_first(V, s)
    box = GridBox.hull([_hull_box(tilde + rpp + [iv]), VG.box])
    d_iv = RectDecomp(V.field, box, [iv])
    d_rpp = RectDecomp(V.field, box, rpp)
    d_tilde = RectDecomp(V.field, box, tilde)
    layers = [rect_to_module(d) for d in (d_iv, d_rpp, d_tilde)] + [pad(VG, box)]
    morphs = [
        realize(FormalMatrix.ones_column(d_iv, d_rpp), check=False),
        realize(FormalMatrix.diagonal(d_rpp, d_tilde), check=False),
    ]
    morphs = [ModMorphism(layers[i], layers[i + 1], mph.comps) for i, mph in enumerate(morphs)]
    # stretched cover surjection: at y it is p at floor(y), columns permuted
    # into the rank order used for the rectangle layers
    f = V.field
    comps = {}
    for y in layers[2].dims:
        x = (y[0] // s,) + y[1:]
        if VG.dim(y) == 0:
            continue
        alive = [j for j in range(m) if tilde[j].contains(y)]
        src = cov.morphism.comp(x)
        src_cols = cov.decomp.indices_at(x)
        mat = Matrix.zero(f, VG.dim(y), len(alive))
        for c, j in enumerate(alive):
            orig = order[j]
            c0 = src_cols.index(orig)
            for r in range(VG.dim(y)):
                mat.rows[r][c] = src.rows[r][c0]
        comps[y] = mat
    morphs.append(ModMorphism(layers[2], layers[3], comps))
    M = stack(layers, morphs, height_lo=-3)
    maps = [("affine", s, 0)] + [("affine", 1, 0)] * (n - 1)
    line = AxisEmbedding(maps, n, 0)
    meta = {
        "s": s,
        "windows": [windows[i] for i in order],
        "bprime": bprime,
        "dprime": dprime,
        "decomps": [d_iv, d_rpp, d_tilde],
        "source_box": V.box,
        "cover": cov,
    }
    return BuildResult(M, line, 4, meta)
