"""Morphism spaces between persistence modules, computed recursively.

For 1D modules, Hom is spanned by canonical homomorphisms between interval
summands, so elements have exact sparse coordinates ("ambient coordinates"
indexed by allowed summand pairs).  For nD modules both sides are sliced
into layers along the last axis; a morphism is a tuple of layer morphisms
subject to one commutation constraint per adjacent pair, solved as a sparse
linear system over the layer hom bases.  Ambient coordinates at level n are
layer-tagged level n-1 coordinates, so elements stay sparse dicts all the
way down and composition never touches a vertex-by-vertex matrix.
"""

from __future__ import annotations

from collections import defaultdict

from .grid import ModMorphism, PersModule, slice_layers, vle
from .linalg import Matrix, nullspace_sparse
from .rectangles import FormalMatrix, hom_leq, interval_decompose_1d, realize


class Context:
    """Shared caches for a batch of hom computations.

    Keys are object identities; cached values keep the modules alive so ids
    cannot be recycled underneath us.
    """

    def __init__(self):
        self._decomps = {}
        self._layers = {}
        self._homs = {}

    # -- cached structure ----------------------------------------------

    def decomp1(self, M: PersModule):
        """(decomp, iso, iso_inverse) for a 1D module."""
        got = self._decomps.get(id(M))
        if got is not None:
            return got[1:]
        decomp, iso = interval_decompose_1d(M)
        entry = (M, decomp, iso, iso.inverse())
        self._decomps[id(M)] = entry
        return entry[1:]

    def layers(self, M: PersModule):
        got = self._layers.get(id(M))
        if got is not None:
            return got[1:]
        layers, links = slice_layers(M)
        entry = (M, layers, links)
        self._layers[id(M)] = entry
        return entry[1:]

    def hom(self, M: PersModule, N: PersModule) -> "HomSpace":
        got = self._homs.get((id(M), id(N)))
        if got is not None:
            return got
        hs = HomSpace(M, N, self)
        self._homs[(id(M), id(N))] = hs
        return hs

    # -- the ambient-coordinate calculus -------------------------------

    def express(self, M: PersModule, N: PersModule, g: ModMorphism) -> dict:
        """Ambient coordinates of a natural transformation g: M -> N."""
        if M.is_zero() or N.is_zero():
            return {}
        f = M.field
        if M.n == 1:
            DM, isoM, _ = self.decomp1(M)
            DN, _, invN = self.decomp1(N)
            h = invN.compose(g).compose(isoM)
            out = {}
            for i, A in enumerate(DM.summands):
                cols = DM.indices_at(A.b)
                rows = DN.indices_at(A.b)
                col = cols.index(i)
                mat = h.comp(A.b)
                for j, B in enumerate(DN.summands):
                    if not hom_leq(A, B):
                        continue
                    c = mat.rows[rows.index(j)][col]
                    if c != 0:
                        out[(i, j)] = c
            return out
        Ms, _ = self.layers(M)
        Ns, _ = self.layers(N)
        h0 = M.box.lo[-1]
        out = {}
        for i in range(len(Ms)):
            comps = {v: g.comp(v + (h0 + i,)) for v in Ms[i].dims if Ns[i].dim(v) > 0}
            gi = ModMorphism(Ms[i], Ns[i], comps)
            for leaf, c in self.express(Ms[i], Ns[i], gi).items():
                out[(i, leaf)] = c
        return out

    def materialize(self, M: PersModule, N: PersModule, x: dict) -> ModMorphism:
        """The natural transformation with the given ambient coordinates."""
        f = M.field
        if M.is_zero() or N.is_zero():
            return ModMorphism.zero(M, N)
        if M.n == 1:
            DM, isoM, _ = self.decomp1(M)
            DN, isoN, _ = self.decomp1(N)
            invM = self._decomps[id(M)][3]
            entries = [[f.zero] * len(DM) for _ in range(len(DN))]
            for (i, j), c in x.items():
                entries[j][i] = c
            F = realize(FormalMatrix(DM, DN, entries), check=False)
            return isoN.compose(F).compose(invM)
        Ms, _ = self.layers(M)
        Ns, _ = self.layers(N)
        h0 = M.box.lo[-1]
        per = defaultdict(dict)
        for (i, leaf), c in x.items():
            per[i][leaf] = c
        comps = {}
        for i in range(len(Ms)):
            gi = self.materialize(Ms[i], Ns[i], per.get(i, {}))
            for v, m in gi.comps.items():
                comps[v + (h0 + i,)] = m
        return ModMorphism(M, N, comps)

    def compose(self, L: PersModule, M: PersModule, N: PersModule, x: dict, y: dict) -> dict:
        """Ambient coordinates of (x: M -> N) after (y: L -> M)."""
        if not x or not y:
            return {}
        f = L.field
        if L.n == 1:
            DL = self.decomp1(L)[0]
            DN = self.decomp1(N)[0]
            by_mid = defaultdict(list)
            for (j, k), c in x.items():
                by_mid[j].append((k, c))
            out = {}
            for (i, j), b in y.items():
                for k, c in by_mid.get(j, ()):
                    # a composite through two canonical homs vanishes unless
                    # the source birth still precedes the target death
                    if vle(DL.summands[i].b, DN.summands[k].d):
                        key = (i, k)
                        out[key] = f.add(out.get(key, f.zero), f.mul(c, b))
            return {k: v for k, v in out.items() if v != 0}
        Ls, _ = self.layers(L)
        Ms, _ = self.layers(M)
        Ns, _ = self.layers(N)
        xs = defaultdict(dict)
        ys = defaultdict(dict)
        for (i, leaf), c in x.items():
            xs[i][leaf] = c
        for (i, leaf), c in y.items():
            ys[i][leaf] = c
        out = {}
        for i in set(xs) & set(ys):
            for leaf, c in self.compose(Ls[i], Ms[i], Ns[i], xs[i], ys[i]).items():
                out[(i, leaf)] = c
        return out


class HomSpace:
    """A basis of Hom(M, N) in ambient coordinates."""

    def __init__(self, M: PersModule, N: PersModule, ctx: Context | None = None):
        if M.field != N.field:
            raise ValueError("hom between modules over different fields")
        if M.box != N.box:
            raise ValueError("hom between modules on different boxes")
        self.M = M
        self.N = N
        self.ctx = ctx if ctx is not None else Context()
        self.basis = self._build()

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _build(self) -> list[dict]:
        M, N, ctx = self.M, self.N, self.ctx
        f = M.field
        if M.is_zero() or N.is_zero():
            return []
        if M.n == 1:
            DM = ctx.decomp1(M)[0]
            DN = ctx.decomp1(N)[0]
            return [
                {(i, j): f.one}
                for i, A in enumerate(DM.summands)
                for j, B in enumerate(DN.summands)
                if hom_leq(A, B)
            ]
        Ms, lMs = ctx.layers(M)
        Ns, lNs = ctx.layers(N)
        h = len(Ms)
        spaces = [ctx.hom(Ms[i], Ns[i]) for i in range(h)]
        offsets = []
        total = 0
        for sp in spaces:
            offsets.append(total)
            total += sp.dim
        if total == 0:
            return []
        lM_expr = [ctx.express(Ms[i], Ms[i + 1], lMs[i]) for i in range(h - 1)]
        lN_expr = [ctx.express(Ns[i], Ns[i + 1], lNs[i]) for i in range(h - 1)]
        rows: list[dict] = []
        for i in range(h - 1):
            # constraint: link_N . f_i = f_{i+1} . link_M in Hom(M_i, N_{i+1})
            per_leaf: dict = defaultdict(dict)
            for b_idx, b in enumerate(spaces[i].basis):
                z = ctx.compose(Ms[i], Ns[i], Ns[i + 1], lN_expr[i], b)
                for leaf, c in z.items():
                    per_leaf[leaf][offsets[i] + b_idx] = c
            for b_idx, b in enumerate(spaces[i + 1].basis):
                z = ctx.compose(Ms[i], Ms[i + 1], Ns[i + 1], b, lM_expr[i])
                col = offsets[i + 1] + b_idx
                for leaf, c in z.items():
                    row = per_leaf[leaf]
                    row[col] = f.sub(row.get(col, f.zero), c)
            rows.extend(per_leaf.values())
        sols = nullspace_sparse(rows, total, f)
        basis = []
        for sol in sols:
            amb: dict = {}
            for col, c in sol.items():
                i = 0
                while i + 1 < h and offsets[i + 1] <= col:
                    i += 1
                for leaf, v in spaces[i].basis[col - offsets[i]].items():
                    key = (i, leaf)
                    amb[key] = f.add(amb.get(key, f.zero), f.mul(c, v))
            basis.append({k: v for k, v in amb.items() if v != 0})
        return basis

    # -- element operations --------------------------------------------

    def express(self, g: ModMorphism) -> dict:
        return self.ctx.express(self.M, self.N, g)

    def materialize(self, x: dict) -> ModMorphism:
        return self.ctx.materialize(self.M, self.N, x)

    def basis_morphisms(self) -> list[ModMorphism]:
        return [self.materialize(b) for b in self.basis]

    def coords_in_basis(self, x: dict):
        """Coefficients of x over the basis, or None if x is outside the span."""
        f = self.M.field
        keys = sorted({k for b in self.basis for k in b} | set(x), key=repr)
        pos = {k: i for i, k in enumerate(keys)}
        A = Matrix.zero(f, len(keys), self.dim)
        for j, b in enumerate(self.basis):
            for k, c in b.items():
                A.rows[pos[k]][j] = c
        rhs = Matrix.zero(f, len(keys), 1)
        for k, c in x.items():
            rhs.rows[pos[k]][0] = c
        sol = A.solve(rhs)
        if sol is None:
            return None
        return [sol.rows[j][0] for j in range(self.dim)]

    def random_element(self, rng) -> dict:
        f = self.M.field
        out: dict = {}
        for b in self.basis:
            c = f.rand(rng)
            if c == 0:
                continue
            for k, v in b.items():
                out[k] = f.add(out.get(k, f.zero), f.mul(c, v))
        return {k: v for k, v in out.items() if v != 0}


def hom_dim(M: PersModule, N: PersModule, ctx: Context | None = None) -> int:
    return HomSpace(M, N, ctx).dim


def end_dim(M: PersModule, ctx: Context | None = None) -> int:
    return hom_dim(M, M, ctx)
