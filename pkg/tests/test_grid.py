import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from persistgrid import (AxisEmbedding, Field, GridBox, ModMorphism, PersModule,
                         Rectangle, RectDecomp, direct_sum, dualize, pad,
                         rect_to_module, restrict, stack)
from persistgrid.grid import pad_morphism, slice_layers
from persistgrid.linalg import Matrix
from persistgrid.sampling import rand_module

Q = Field.rationals()
F2 = Field.prime(2)


def interval_module(field, lo, hi, b, d):
    return rect_to_module(RectDecomp(field, GridBox((lo,), (hi,)), [Rectangle((b,), (d,))]))


class TestGridBox:
    def test_vertices_lexicographic(self):
        box = GridBox((0, 0), (1, 1))
        assert list(box.vertices()) == [(0, 0), (0, 1), (1, 0), (1, 1)]

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            GridBox((1,), (0,))

    def test_cap(self, monkeypatch):
        monkeypatch.setenv("PMOD_MAX_VERTICES", "10")
        with pytest.raises(ValueError):
            GridBox((0, 0), (10, 10))


class TestValidate:
    def test_rectangle_passes(self):
        assert rect_to_module(RectDecomp(Q, GridBox((0, 0), (2, 2)),
                                         [Rectangle((0, 0), (1, 2))])).validate()

    def test_broken_square_fails(self):
        # 2x2 box, all dims 1, three steps 1 and one step 0
        box = GridBox((0, 0), (1, 1))
        dims = {v: 1 for v in box.vertices()}
        one = Matrix.identity(Q, 1)
        zero = Matrix.zero(Q, 1, 1)
        steps = {((0, 0), 0): one, ((0, 0), 1): one, ((1, 0), 1): one, ((0, 1), 0): zero}
        rep = PersModule(Q, box, dims, steps).validate()
        assert not rep
        assert rep.vertex == (0, 0)

    def test_zero_module_passes(self):
        assert PersModule(Q, GridBox((0,), (3,)), {}, {}).validate()


class TestRestrictPadStack:
    def test_layer_embedding_recovers_layer(self):
        V = interval_module(Q, 0, 2, 1, 2)
        W = interval_module(Q, 0, 2, 0, 1)
        g = next(iter([ModMorphism(V, W, {(1,): Matrix.identity(Q, 1)})]))
        assert g.validate()
        M = stack([V, W], [g])
        for h, layer in ((0, V), (1, W)):
            R = restrict(M, AxisEmbedding.layer(1, 1, h))
            assert R.dims == layer.dims and R.steps == layer.steps

    def test_stack_of_identities_restricts_to_layer(self):
        V = interval_module(Q, 0, 2, 0, 2)
        ident = ModMorphism(V, V, {v: Matrix.identity(Q, 1) for v in V.dims})
        M = stack([V, V, V], [ident, ident])
        R = restrict(M, AxisEmbedding.layer(1, 1, 0))
        assert R.dims == V.dims

    def test_pad_then_restrict_back(self):
        V = interval_module(Q, 0, 1, 0, 1)
        big = pad(V, GridBox((-2,), (3,)))
        back = restrict(stack([big], []), AxisEmbedding.layer(1, 1, 0))
        assert back.dims == V.dims

    def test_pad_preserves_surjectivity(self):
        # pointwise-surjective morphism stays pointwise surjective after padding
        V = interval_module(Q, 0, 2, 0, 2)
        W = interval_module(Q, 0, 2, 0, 1)
        p = ModMorphism(V, W, {(0,): Matrix.identity(Q, 1), (1,): Matrix.identity(Q, 1)})
        assert p.validate()
        pp = pad_morphism(p, GridBox((-1,), (3,)))
        assert pp.validate()
        for v in pp.target.dims:
            assert pp.comp(v).rank() == pp.target.dim(v)

    def test_scaled_restriction_of_scaled_rectangle(self):
        # restriction with per-axis scale s maps I[sb, sd] back to I[b, d]
        s = 3
        M2 = stack([interval_module(Q, 0, 6, 0, 6)], [])
        L = AxisEmbedding([("affine", s, 0)], 1, 0)
        R = restrict(M2, L)
        assert sorted(R.dims) == [(0,), (1,), (2,)]
        assert all(m == Matrix.identity(Q, 1) for m in R.steps.values())


class TestDirectSumDual:
    def test_dims_add(self, rng):
        box = GridBox((0, 0), (2, 2))
        A = rand_module(rng, F2, box, max_dim=2)
        B = rand_module(rng, F2, box, max_dim=2)
        S = direct_sum(A, B)
        assert S.validate()
        for v in box.vertices():
            assert S.dim(v) == A.dim(v) + B.dim(v)

    def test_point_sum_example(self):
        M = rect_to_module(RectDecomp(Q, GridBox((0,), (1,)),
                                      [Rectangle((0,), (0,)), Rectangle((1,), (1,))]))
        assert M.dim((0,)) == 1 and M.dim((1,)) == 1
        assert M.step((0,), 0).is_zero()

    def test_dualize_involution(self, rng):
        box = GridBox((0, 0), (2, 1))
        M = rand_module(rng, F2, box, max_dim=2)
        D = dualize(dualize(M))
        assert D.dims == M.dims
        assert D.steps == M.steps


class TestSliceLayers:
    def test_roundtrip_with_stack(self, rng):
        box = GridBox((0,), (2,))
        A = rand_module(rng, F2, box, max_dim=2)
        B = rand_module(rng, F2, box, max_dim=2)
        from persistgrid.homspace import HomSpace
        hs = HomSpace(A, B)
        g = hs.materialize(hs.random_element(rng))
        M = stack([A, B], [g], height_lo=-1)
        layers, links = slice_layers(M)
        assert layers[0].dims == A.dims and layers[1].dims == B.dims
        assert links[0].comps == g.comps


class TestAxisEmbedding:
    def test_monotone_injective(self):
        L = AxisEmbedding([("affine", 2, 1), ("table", 0, [0, 3, 4])], 1, 7)
        assert L.apply((0, 0)) == (1, 7, 0)
        assert L.apply((2, 2)) == (5, 7, 4)
        pts = [L.apply((a, b)) for a in range(3) for b in range(3)]
        assert len(set(pts)) == len(pts)

    def test_table_must_increase(self):
        with pytest.raises(ValueError):
            AxisEmbedding([("table", 0, [0, 0])], 0, 0)

    def test_preimage_box(self):
        L = AxisEmbedding([("affine", 2, 0)], 1, 5)
        box = GridBox((0, 5), (7, 5))
        assert L.preimage_box(box) == GridBox((0,), (3,))
        assert L.preimage_box(GridBox((0, 0), (7, 4))) is None

    def test_json_roundtrip(self):
        L = AxisEmbedding([("affine", 2, -1), ("table", -1, [5, 9])], 2, 3)
        assert AxisEmbedding.from_json(L.to_json()) == L
