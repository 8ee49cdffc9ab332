import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from persistgrid.fields import Field
from persistgrid.linalg import (Matrix, Poly, coprime_split, factor_fp,
                                minimal_polynomial, nullspace_sparse)

Q = Field.rationals()
F2 = Field.prime(2)
F5 = Field.prime(5)

small_int = st.integers(min_value=-4, max_value=4)


def rand_matrix(field, rng, nr, nc, lo=-3, hi=3):
    m = Matrix.zero(field, nr, nc)
    for r in range(nr):
        for c in range(nc):
            m.rows[r][c] = field.of(rng.randint(lo, hi))
    return m


def test_basic_arithmetic():
    a = Matrix.from_ints(Q, [[1, 2], [3, 4]])
    b = Matrix.from_ints(Q, [[0, 1], [1, 0]])
    assert (a @ b) == Matrix.from_ints(Q, [[2, 1], [4, 3]])
    assert (a + b - b) == a
    assert a.transpose().transpose() == a


def test_rank_and_inverse():
    a = Matrix.from_ints(Q, [[1, 2], [2, 4]])
    assert a.rank() == 1
    b = Matrix.from_ints(Q, [[1, 1], [0, 1]])
    assert b.is_invertible()
    assert b @ b.inverse() == Matrix.identity(Q, 2)
    assert not a.is_invertible()


def test_solve():
    a = Matrix.from_ints(Q, [[2, 0], [0, 3]])
    rhs = Matrix.from_ints(Q, [[1], [1]])
    x = a.solve(rhs)
    assert a @ x == rhs
    # inconsistent system
    sing = Matrix.from_ints(Q, [[1, 1], [1, 1]])
    assert sing.solve(Matrix.from_ints(Q, [[0], [1]])) is None


@given(st.integers(0, 2**31), st.integers(1, 4), st.integers(1, 4))
@settings(max_examples=60, deadline=None)
def test_nullspace_property(seed, nr, nc):
    rng = random.Random(seed)
    for f in (Q, F5):
        a = rand_matrix(f, rng, nr, nc)
        ns = a.nullspace()
        assert ns.nrows == nc
        assert a.rank() + ns.ncols == nc
        if ns.ncols:
            assert (a @ ns).is_zero()


@given(st.integers(0, 2**31), st.integers(1, 5), st.integers(1, 6))
@settings(max_examples=60, deadline=None)
def test_nullspace_sparse_matches_dense(seed, nrows, ncols):
    rng = random.Random(seed)
    for f in (Q, F2):
        dense = rand_matrix(f, rng, nrows, ncols, lo=-1, hi=1)
        rows = []
        for r in range(nrows):
            row = {c: dense.rows[r][c] for c in range(ncols) if dense.rows[r][c] != 0}
            rows.append(row)
        sols = nullspace_sparse(rows, ncols, f)
        assert len(sols) == ncols - dense.rank()
        for sol in sols:
            vec = [sol.get(c, f.zero) for c in range(ncols)]
            assert all(x == f.zero for x in dense.mul_vec(vec))
        # solutions are linearly independent
        mat = Matrix.zero(f, ncols, len(sols))
        for j, sol in enumerate(sols):
            for c, v in sol.items():
                mat.rows[c][j] = v
        assert mat.rank() == len(sols)


def test_poly_divmod_gcd():
    x = Poly.x(Q)
    f = (x - Poly.from_ints(Q, [1])) * (x - Poly.from_ints(Q, [2]))
    q, r = f.divmod(x - Poly.from_ints(Q, [1]))
    assert r.is_zero()
    assert q == (x - Poly.from_ints(Q, [2]))
    g = f.gcd((x - Poly.from_ints(Q, [2])) * (x - Poly.from_ints(Q, [3])))
    assert g.monic() == (x - Poly.from_ints(Q, [2]))


def test_minimal_polynomial():
    a = Matrix.from_ints(Q, [[0, 1], [0, 0]])
    mp = minimal_polynomial(a)
    assert mp == Poly.from_ints(Q, [0, 0, 1])  # x^2
    ident = Matrix.identity(Q, 3)
    assert minimal_polynomial(ident) == Poly.from_ints(Q, [-1, 1])  # x - 1
    diag = Matrix.from_ints(Q, [[1, 0], [0, 2]])
    assert minimal_polynomial(diag).degree == 2


def test_minimal_polynomial_annihilates():
    rng = random.Random(5)
    for f in (Q, F5):
        for _ in range(10):
            a = rand_matrix(f, rng, 3, 3)
            mp = minimal_polynomial(a)
            assert mp.eval_matrix(a).is_zero()


def test_factor_fp():
    x = Poly.x(F5)
    f = (x - Poly.from_ints(F5, [1])) * (x - Poly.from_ints(F5, [1])) * (x - Poly.from_ints(F5, [2]))
    factors = factor_fp(f, random.Random(0))
    assert sorted(e for _, e in factors) == [1, 2]
    prod = Poly.from_ints(F5, [1])
    for g, e in factors:
        for _ in range(e):
            prod = prod * g
    assert prod.monic() == f.monic()


def test_coprime_split_fp():
    x = Poly.x(F2)
    f = x * (x - Poly.from_ints(F2, [1]))
    out = coprime_split(f, random.Random(0))
    assert out is not None
    g, h = out
    assert (g * h).monic() == f.monic()
    assert g.gcd(h).degree == 0
    # powers of one irreducible cannot split
    assert coprime_split(x * x, random.Random(0)) is None


def test_coprime_split_q():
    x = Poly.x(Q)
    f = (x - Poly.from_ints(Q, [1])) * (x - Poly.from_ints(Q, [2]))
    out = coprime_split(f)
    assert out is not None
    g, h = out
    assert (g * h).monic() == f.monic()
    # x^2 + 1 has no rational root and is squarefree irreducible: inconclusive
    assert coprime_split(Poly.from_ints(Q, [1, 0, 1])) is None
