"""Dense exact matrices and univariate polynomials over a `Field`.

Everything here is deterministic and exact: Gaussian elimination with the
first nonzero pivot, no pivoting heuristics that depend on magnitudes.
"""

from __future__ import annotations

from .fields import Field


class Matrix:
    """A dense rows x cols matrix with entries in a common field."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, rows):
        self.field = field
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        for r in self.rows:
            if len(r) != self.ncols:
                raise ValueError("ragged rows")

    @staticmethod
    def zero(field: Field, nrows: int, ncols: int) -> "Matrix":
        z = field.zero
        m = Matrix.__new__(Matrix)
        m.field, m.nrows, m.ncols = field, nrows, ncols
        m.rows = [[z] * ncols for _ in range(nrows)]
        return m

    @staticmethod
    def identity(field: Field, n: int) -> "Matrix":
        m = Matrix.zero(field, n, n)
        one = field.one
        for i in range(n):
            m.rows[i][i] = one
        return m

    @staticmethod
    def from_ints(field: Field, rows) -> "Matrix":
        return Matrix(field, [[field.of(x) for x in r] for r in rows])

    def copy(self) -> "Matrix":
        return Matrix(self.field, self.rows)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.field, self.nrows, self.ncols, tuple(map(tuple, self.rows))))

    def __repr__(self):
        return f"Matrix({self.field}, {self.rows})"

    def is_zero(self) -> bool:
        z = self.field.zero
        return all(x == z for r in self.rows for x in r)

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "Matrix") -> "Matrix":
        f = self.field
        return Matrix(f, [[f.add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        f = self.field
        return Matrix(f, [[f.sub(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, c) -> "Matrix":
        f = self.field
        return Matrix(f, [[f.mul(c, a) for a in r] for r in self.rows])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
        f = self.field
        out = Matrix.zero(f, self.nrows, other.ncols)
        orows = other.rows
        for i, arow in enumerate(self.rows):
            acc = out.rows[i]
            for k, a in enumerate(arow):
                if a == 0:
                    continue
                brow = orows[k]
                for j, b in enumerate(brow):
                    if b != 0:
                        acc[j] = f.add(acc[j], f.mul(a, b))
        return out

    def mul_vec(self, v: list) -> list:
        f = self.field
        out = []
        for row in self.rows:
            s = f.zero
            for a, b in zip(row, v):
                if a != 0 and b != 0:
                    s = f.add(s, f.mul(a, b))
            out.append(s)
        return out

    def transpose(self) -> "Matrix":
        out = Matrix.zero(self.field, self.ncols, self.nrows)
        for i, row in enumerate(self.rows):
            for j, v in enumerate(row):
                out.rows[j][i] = v
        return out

    @staticmethod
    def hstack(mats: list["Matrix"]) -> "Matrix":
        mats = [m for m in mats]
        if not mats:
            raise ValueError("nothing to stack")
        f = mats[0].field
        nrows = mats[0].nrows
        rows = [[] for _ in range(nrows)]
        for m in mats:
            if m.nrows != nrows:
                raise ValueError("row count mismatch")
            for i in range(nrows):
                rows[i].extend(m.rows[i])
        return Matrix(f, rows) if rows else Matrix.zero(f, 0, sum(m.ncols for m in mats))

    @staticmethod
    def vstack(mats: list["Matrix"]) -> "Matrix":
        if not mats:
            raise ValueError("nothing to stack")
        f = mats[0].field
        ncols = mats[0].ncols
        rows = []
        for m in mats:
            if m.ncols != ncols:
                raise ValueError("column count mismatch")
            rows.extend(m.rows)
        out = Matrix.__new__(Matrix)
        out.field, out.nrows, out.ncols = f, len(rows), ncols
        out.rows = [list(r) for r in rows]
        return out

    @staticmethod
    def block_diag(field: Field, mats: list["Matrix"]) -> "Matrix":
        nr = sum(m.nrows for m in mats)
        nc = sum(m.ncols for m in mats)
        out = Matrix.zero(field, nr, nc)
        r0 = c0 = 0
        for m in mats:
            for i in range(m.nrows):
                out.rows[r0 + i][c0 : c0 + m.ncols] = list(m.rows[i])
            r0 += m.nrows
            c0 += m.ncols
        return out

    def submatrix(self, row_idx, col_idx) -> "Matrix":
        return Matrix(self.field, [[self.rows[i][j] for j in col_idx] for i in row_idx])

    # -- elimination ---------------------------------------------------

    def rref(self) -> tuple["Matrix", list[int]]:
        """Reduced row echelon form and the list of pivot columns."""
        f = self.field
        rows = [list(r) for r in self.rows]
        pivots = []
        pr = 0
        for pc in range(self.ncols):
            pivot_row = None
            for i in range(pr, self.nrows):
                if rows[i][pc] != 0:
                    pivot_row = i
                    break
            if pivot_row is None:
                continue
            rows[pr], rows[pivot_row] = rows[pivot_row], rows[pr]
            inv = f.inv(rows[pr][pc])
            if inv != f.one:
                rows[pr] = [f.mul(inv, x) for x in rows[pr]]
            prow = rows[pr]
            for i in range(self.nrows):
                if i == pr:
                    continue
                c = rows[i][pc]
                if c != 0:
                    ri = rows[i]
                    for j in range(pc, self.ncols):
                        if prow[j] != 0:
                            ri[j] = f.sub(ri[j], f.mul(c, prow[j]))
            pivots.append(pc)
            pr += 1
            if pr == self.nrows:
                break
        return Matrix(f, rows), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> "Matrix":
        """Basis of the right kernel, one column per free variable.

        The free variable of each column is set to 1, in increasing column
        order, which makes the output deterministic.
        """
        f = self.field
        R, pivots = self.rref()
        pivset = set(pivots)
        free = [j for j in range(self.ncols) if j not in pivset]
        cols = []
        for fv in free:
            x = [f.zero] * self.ncols
            x[fv] = f.one
            for r, pc in enumerate(pivots):
                # row r reads: x[pc] + sum_{j free} R[r][j] x[j] = 0
                x[pc] = f.neg(R.rows[r][fv])
            cols.append(x)
        if not cols:
            return Matrix.zero(f, self.ncols, 0)
        return Matrix(f, [list(r) for r in zip(*cols)])

    def column_space_pivot_rows(self) -> list[int]:
        """Rows holding pivots in the column echelon form (= pivot cols of Aᵀ)."""
        return self.transpose().rref()[1]

    def solve(self, b: "Matrix"):
        """One exact solution X of self @ X = b, or None if inconsistent."""
        f = self.field
        aug = Matrix.hstack([self, b])
        R, pivots = aug.rref()
        for pc in pivots:
            if pc >= self.ncols:
                return None
        X = Matrix.zero(f, self.ncols, b.ncols)
        for r, pc in enumerate(pivots):
            for j in range(b.ncols):
                X.rows[pc][j] = R.rows[r][self.ncols + j]
        return X

    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("inverse of a non-square matrix")
        X = self.solve(Matrix.identity(self.field, self.nrows))
        if X is None or self.rank() != self.nrows:
            raise ValueError("matrix is singular")
        return X

    def is_invertible(self) -> bool:
        return self.nrows == self.ncols and self.rank() == self.nrows


def rank(A: Matrix) -> int:
    return A.rank()


def solve_nullspace(A: Matrix) -> Matrix:
    return A.nullspace()


def nullspace_sparse(rows: list[dict], ncols: int, field: Field) -> list[dict]:
    """Kernel basis of a sparse matrix given as dict-rows {col: value}.

    Pivots are chosen column by column (among rows whose leading unknown is
    the column, the sparsest wins), which keeps banded systems banded.
    Returns sparse vectors {col: value}, free columns in increasing order.
    """
    f = field
    work = [dict((c, v) for c, v in r.items() if v != 0) for r in rows]
    work = [r for r in work if r]
    col_rows: dict[int, set[int]] = {}
    for i, r in enumerate(work):
        for c in r:
            col_rows.setdefault(c, set()).add(i)
    pivot_of_col: dict[int, int] = {}
    used_rows: set[int] = set()
    for col in range(ncols):
        cand = [i for i in col_rows.get(col, ()) if i not in used_rows]
        if not cand:
            continue
        pi = min(cand, key=lambda i: (len(work[i]), i))
        prow = work[pi]
        inv = f.inv(prow[col])
        if inv != f.one:
            for c in list(prow):
                prow[c] = f.mul(inv, prow[c])
        for i in list(col_rows[col]):
            if i == pi:
                continue
            r = work[i]
            c0 = r.get(col)
            if c0 is None or c0 == 0:
                continue
            for c, v in prow.items():
                nv = f.sub(r.get(c, f.zero), f.mul(c0, v))
                if nv == 0:
                    if c in r:
                        del r[c]
                        col_rows[c].discard(i)
                else:
                    if c not in r:
                        col_rows.setdefault(c, set()).add(i)
                    r[c] = nv
        pivot_of_col[col] = pi
        used_rows.add(pi)
    basis = []
    for col in range(ncols):
        if col in pivot_of_col:
            continue
        x = {col: f.one}
        for pc, pi in pivot_of_col.items():
            v = work[pi].get(col)
            if v is not None and v != 0:
                x[pc] = f.neg(v)
        basis.append(x)
    return basis


# ---------------------------------------------------------------------------
# univariate polynomials


class Poly:
    """Univariate polynomial, coefficients low degree first, trimmed."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs):
        self.field = field
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = cs

    @staticmethod
    def from_ints(field: Field, coeffs) -> "Poly":
        return Poly(field, [field.of(c) for c in coeffs])

    @staticmethod
    def x(field: Field) -> "Poly":
        return Poly(field, [field.zero, field.one])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, Poly) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field, tuple(self.coeffs)))

    def __repr__(self):
        return f"Poly({self.field}, {self.coeffs})"

    def __add__(self, other: "Poly") -> "Poly":
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + [f.zero] * (n - len(self.coeffs))
        b = other.coeffs + [f.zero] * (n - len(other.coeffs))
        return Poly(f, [f.add(x, y) for x, y in zip(a, b)])

    def __sub__(self, other: "Poly") -> "Poly":
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + [f.zero] * (n - len(self.coeffs))
        b = other.coeffs + [f.zero] * (n - len(other.coeffs))
        return Poly(f, [f.sub(x, y) for x, y in zip(a, b)])

    def __mul__(self, other: "Poly") -> "Poly":
        f = self.field
        if self.is_zero() or other.is_zero():
            return Poly(f, [])
        out = [f.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b != 0:
                    out[i + j] = f.add(out[i + j], f.mul(a, b))
        return Poly(f, out)

    def scale(self, c) -> "Poly":
        f = self.field
        return Poly(f, [f.mul(c, a) for a in self.coeffs])

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        f = self.field
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(self.coeffs) - len(other.coeffs)
        if dq < 0:
            return Poly(f, []), Poly(f, rem)
        q = [f.zero] * (dq + 1)
        lead_inv = f.inv(other.coeffs[-1])
        for k in range(dq, -1, -1):
            c = f.mul(rem[k + other.degree], lead_inv)
            if c != 0:
                q[k] = c
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = f.sub(rem[k + j], f.mul(c, b))
        return Poly(f, q), Poly(f, rem)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.coeffs[-1]))

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def lcm(self, other: "Poly") -> "Poly":
        if self.is_zero() or other.is_zero():
            return Poly(self.field, [])
        g = self.gcd(other)
        return ((self * other) // g).monic()

    def derivative(self) -> "Poly":
        f = self.field
        return Poly(f, [f.mul(f.of(i), c) for i, c in enumerate(self.coeffs)][1:])

    def eval_scalar(self, x):
        f = self.field
        acc = f.zero
        for c in reversed(self.coeffs):
            acc = f.add(f.mul(acc, x), c)
        return acc

    def eval_matrix(self, A: Matrix) -> Matrix:
        f = self.field
        n = A.nrows
        acc = Matrix.zero(f, n, n)
        for c in reversed(self.coeffs):
            acc = acc @ A
            if c != 0:
                for i in range(n):
                    acc.rows[i][i] = f.add(acc.rows[i][i], c)
        return acc

    def powmod(self, e: int, mod: "Poly") -> "Poly":
        f = self.field
        result = Poly(f, [f.one])
        base = self % mod
        while e:
            if e & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            e >>= 1
        return result


def minimal_polynomial(A: Matrix) -> Poly:
    """Monic minimal polynomial, by lcm of Krylov annihilators of e_1, e_2, ...

    Verified by evaluation before returning.
    """
    if A.nrows != A.ncols:
        raise ValueError("minimal polynomial of a non-square matrix")
    f = A.field
    n = A.nrows
    m = Poly(f, [f.one])
    for i in range(n):
        if m.degree >= n:
            break
        e = [f.zero] * n
        e[i] = f.one
        # v = m(A) e_i; annihilator of v is minpoly(e_i) / gcd(minpoly(e_i), m)
        v = e
        acc = [f.zero] * n
        for c in reversed(m.coeffs):
            acc = A.mul_vec(acc)
            if c != 0:
                acc = [f.add(a, f.mul(c, b)) for a, b in zip(acc, v)]
        v = acc
        if all(x == 0 for x in v):
            continue
        # grow the Krylov chain of v until dependency; track coordinates
        echelon: list[tuple[int, list, list]] = []  # (pivot, vec, coords)
        chain = []
        w = v
        k = 0
        q = None
        while True:
            vec = list(w)
            coords = [f.zero] * (n + 1)
            coords[k] = f.one
            for piv, evec, ecoords in echelon:
                c = vec[piv]
                if c != 0:
                    vec = [f.sub(a, f.mul(c, b)) for a, b in zip(vec, evec)]
                    coords = [f.sub(a, f.mul(c, b)) for a, b in zip(coords, ecoords)]
            piv = next((j for j, x in enumerate(vec) if x != 0), None)
            if piv is None:
                # sum_j coords[j] A^j v = 0 except the leading term sign
                q = Poly(f, coords[: k + 1]).monic()
                break
            inv = f.inv(vec[piv])
            if inv != f.one:
                vec = [f.mul(inv, x) for x in vec]
                coords = [f.mul(inv, x) for x in coords]
            echelon.append((piv, vec, coords))
            chain.append(w)
            w = A.mul_vec(w)
            k += 1
        m = (m * q).monic()
    if not m.eval_matrix(A).is_zero():
        raise AssertionError("minimal polynomial failed verification")
    return m


# ---------------------------------------------------------------------------
# factorization support for coprime splitting


def _factor_squarefree_fp(f: Poly, rng) -> list[Poly]:
    """Irreducible factors of a squarefree monic polynomial over F_p."""
    field = f.field
    p = field.p
    out = []
    x = Poly.x(field)
    h = x
    rest = f
    d = 0
    while rest.degree > 2 * (d + 1) - 1 and rest.degree > 0:
        d += 1
        h = h.powmod(p, rest)
        g = (h - x).gcd(rest)
        if g.degree > 0:
            out.extend(_equal_degree_split(g, d, rng))
            rest = (rest // g).monic()
            h = h % rest
    if rest.degree > 0:
        out.append(rest.monic())
    return out


def _equal_degree_split(g: Poly, d: int, rng) -> list[Poly]:
    """Cantor-Zassenhaus: split g into its degree-d irreducible factors."""
    field = g.field
    p = field.p
    if g.degree == d:
        return [g.monic()]
    while True:
        r = Poly(field, [field.of(rng.randrange(p)) for _ in range(g.degree)])
        if r.degree < 1:
            continue
        if p == 2:
            t = Poly(field, [])
            acc = r % g
            for _ in range(d):
                t = (t + acc) % g
                acc = (acc * acc) % g
        else:
            t = r.powmod((p**d - 1) // 2, g) - Poly(field, [field.one])
        s = t.gcd(g)
        if 0 < s.degree < g.degree:
            return _equal_degree_split(s, d, rng) + _equal_degree_split((g // s).monic(), d, rng)


def factor_fp(f: Poly, rng=None) -> list[tuple[Poly, int]]:
    """Full irreducible factorization over F_p (monic factors, multiplicity)."""
    import random

    field = f.field
    if field.is_rational:
        raise ValueError("factor_fp needs a prime field")
    if rng is None:
        rng = random.Random(0)
    f = f.monic()
    if f.degree < 1:
        return []
    p = field.p
    deriv = f.derivative()
    if deriv.is_zero():
        # f(x) = g(x^p) = g(x)^p over F_p
        g = Poly(field, f.coeffs[::p])
        return [(irr, mult * p) for irr, mult in factor_fp(g, rng)]
    sqfree = (f // f.gcd(deriv)).monic()
    irreducibles = _factor_squarefree_fp(sqfree, rng)
    out = []
    for irr in sorted(irreducibles, key=lambda q: (q.degree, q.coeffs)):
        mult = 0
        rest = f
        while True:
            quo, rem = rest.divmod(irr)
            if not rem.is_zero():
                break
            mult += 1
            rest = quo
        out.append((irr, mult))
    return out


def _yun_squarefree_q(f: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm over Q: f = lc * prod a_i^i with a_i squarefree, coprime."""
    field = f.field
    f = f.monic()
    d = f.derivative()
    a = f.gcd(d)
    b = f // a
    c = d // a
    out = []
    i = 1
    while b.degree > 0:
        delta = (c - b.derivative())
        g = b.gcd(delta) if not delta.is_zero() else b
        if g.degree > 0:
            out.append((g.monic(), i))
        b2 = b // g if g.degree > 0 else b
        c2 = (delta // g) if g.degree > 0 else delta
        b, c = b2, c2
        i += 1
    return out


def _rational_roots(f: Poly) -> list:
    """All rational roots of f (over Q), each listed once, sorted."""
    from fractions import Fraction

    field = f.field
    if f.degree < 1:
        return []
    # clear denominators
    denom = 1
    for c in f.coeffs:
        denom = denom * c.denominator // _gcd_int(denom, c.denominator)
    ints = [int(c * denom) for c in f.coeffs]
    while ints and ints[0] == 0:
        ints = ints[1:]  # factor x out; 0 handled separately by caller's gcd
    roots = set()
    if not ints:
        return []
    if len(ints) < len(f.coeffs):
        roots.add(Fraction(0))
    a0, an = abs(ints[0]), abs(ints[-1])
    for p in _divisors(a0):
        for q in _divisors(an):
            for cand in (Fraction(p, q), Fraction(-p, q)):
                if f.eval_scalar(cand) == 0:
                    roots.add(cand)
    return sorted(roots)


def _gcd_int(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _divisors(n: int) -> list[int]:
    n = abs(n)
    if n == 0:
        return [1]
    out = set()
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.add(d)
            out.add(n // d)
        d += 1
    return sorted(out)


def coprime_split(f: Poly, rng=None):
    """A factorization f = g*h with gcd(g, h) = 1 and both of degree >= 1.

    Over a prime field this is complete (full factorization, primary parts
    grouped).  Over Q only squarefree structure and rational roots are used,
    so None means "no split found", not "f is primary".
    """
    if f.is_zero():
        raise ValueError("coprime split of the zero polynomial")
    if f.degree < 1:
        raise ValueError("coprime split needs degree >= 1")
    field = f.field
    f = f.monic()
    if not field.is_rational:
        facts = factor_fp(f, rng)
        if len(facts) < 2:
            return None
        irr, mult = facts[0]
        g = Poly(field, [field.one])
        for _ in range(mult):
            g = g * irr
        h = (f // g).monic()
        return g, h
    # rationals: pieces are (x - r)^i per rational root plus the rootless
    # remainder of each Yun part
    pieces = []
    for part, i in _yun_squarefree_q(f):
        rem = part
        for r in _rational_roots(part):
            lin = Poly(field, [field.neg(r), field.one])
            rem = rem // lin
            piece = Poly(field, [field.one])
            for _ in range(i):
                piece = piece * lin
            pieces.append(piece)
        if rem.degree > 0:
            piece = Poly(field, [field.one])
            for _ in range(i):
                piece = piece * rem
            pieces.append(piece)
    if len(pieces) < 2:
        return None
    g = pieces[0]
    h = (f // g).monic()
    if not g.gcd(h).degree == 0:
        raise AssertionError("coprime split produced non-coprime parts")
    return g, h
