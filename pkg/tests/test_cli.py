import json

import pytest

from persistgrid import (Field, GridBox, Rectangle, RectDecomp, direct_sum,
                         rect_to_module)
from persistgrid.cli import main
from persistgrid.io import dump, pmod_to_json, rects_to_json
from persistgrid.sampling import rand_module, rand_two_rows_with_gap

Q = Field.rationals()
F2 = Field.prime(2)


@pytest.fixture
def rects_file(tmp_path):
    V = RectDecomp(Q, GridBox((0,), (1,)),
                   [Rectangle((0,), (1,)), Rectangle((1,), (1,))])
    p = str(tmp_path / "v.json")
    dump(rects_to_json(V), p)
    return p, V


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


class TestPipeline:
    def test_construct_restrict_barcode(self, tmp_path, rects_file, capsys):
        src, V = rects_file
        mod = str(tmp_path / "m.json")
        line = str(tmp_path / "l.json")
        out = str(tmp_path / "w.json")
        assert main(["construct", "--method", "min3", "--in", src,
                     "--out", mod, "--line-out", line]) == 0
        assert main(["restrict", "--in", mod, "--line", line, "--out", out]) == 0
        code, text, _ = run(capsys, ["barcode", "--in", out])
        assert code == 0
        bc = json.loads(text)
        assert {(tuple(r["b"]), tuple(r["d"])): r["mult"] for r in bc["rects"]} \
               == dict(V.barcode())

    def test_verify_indec_on_construction(self, tmp_path, rects_file, capsys):
        src, _ = rects_file
        mod = str(tmp_path / "m.json")
        assert main(["construct", "--method", "s4", "--in", src, "--out", mod]) == 0
        code, text, _ = run(capsys, ["verify", "indec", "--in", mod])
        assert code == 0
        assert json.loads(text)["status"] == "IndecomposableCertified"

    def test_candy_concat_string(self, tmp_path, rng, capsys):
        mods, paths = [], []
        for i in range(3):
            M = rand_module(rng, F2, GridBox((0,), (1,)), max_dim=1)
            p = str(tmp_path / f"v{i}.json")
            dump(pmod_to_json(M), p)
            mods.append(M)
            paths.append(p)
        a, b = str(tmp_path / "a.json"), str(tmp_path / "b.json")
        assert main(["construct", "--method", "candy", "--in", paths[0],
                     "--out", a]) == 0
        assert main(["construct", "--method", "candy", "--in", paths[1],
                     "--out", b]) == 0
        cat = str(tmp_path / "cat.json")
        assert main(["concat", "--a", a, "--b", b, "--out", cat]) == 0
        code, text, _ = run(capsys, ["verify", "candy", "--in", cat])
        assert code == 0
        manifest = str(tmp_path / "list.json")
        dump({"modules": paths}, manifest)
        strung = str(tmp_path / "s.json")
        assert main(["string", "--list", manifest, "--out", strung]) == 0
        obj = json.load(open(strung))
        assert len(obj["embeddings"]) == 3

    def test_hom_dim(self, tmp_path, capsys):
        box = GridBox((0,), (2,))
        both = rect_to_module(RectDecomp(Q, box, [Rectangle((0,), (1,)),
                                                  Rectangle((1,), (2,))]))
        p = str(tmp_path / "m.json")
        dump(pmod_to_json(both), p)
        code, text, _ = run(capsys, ["hom", "--a", p, "--b", p, "--basis"])
        assert code == 0
        obj = json.loads(text)
        assert obj["dim"] == 3
        assert len(obj["basis"]) == 3


class TestExitCodes:
    def test_decomposable_gives_1(self, tmp_path, rng, capsys):
        box = GridBox((0,), (1,))
        M = direct_sum(rect_to_module(RectDecomp(Q, box, [Rectangle((0,), (0,))])),
                       rect_to_module(RectDecomp(Q, box, [Rectangle((1,), (1,))])))
        p = str(tmp_path / "m.json")
        dump(pmod_to_json(M), p)
        code, text, _ = run(capsys, ["verify", "indec", "--in", p])
        assert code == 1
        assert json.loads(text)["status"] == "DecomposableCertified"

    def test_iso_false_gives_1(self, tmp_path, capsys):
        box = GridBox((0,), (1,))
        A = rect_to_module(RectDecomp(Q, box, [Rectangle((0,), (0,))]))
        B = rect_to_module(RectDecomp(Q, box, [Rectangle((0,), (1,))]))
        pa, pb = str(tmp_path / "a.json"), str(tmp_path / "b.json")
        dump(pmod_to_json(A), pa)
        dump(pmod_to_json(B), pb)
        assert main(["verify", "iso", "--in", pa, "--with", pb]) == 1

    def test_malformed_gives_2(self, tmp_path, capsys):
        p = str(tmp_path / "bad.json")
        open(p, "w").write("{broken")
        code, _, err = run(capsys, ["barcode", "--in", p])
        assert code == 2 and err.startswith("error:")

    def test_barcode_on_2d_gives_2(self, tmp_path, rng, capsys):
        M = rand_module(rng, Q, GridBox((0, 0), (1, 1)), max_dim=1)
        p = str(tmp_path / "m.json")
        dump(pmod_to_json(M), p)
        code, _, err = run(capsys, ["barcode", "--in", p])
        assert code == 2 and "1D" in err

    def test_field_mismatch_gives_2(self, tmp_path, rects_file, capsys):
        src, _ = rects_file
        code, _, err = run(capsys, ["barcode", "--in", src, "--field", "Fp:2"])
        # rects file over Q, declared field must match exactly
        assert code == 2

    def test_tworows_without_gap_gives_2(self, tmp_path, capsys):
        from persistgrid.grid import stack
        L = rect_to_module(RectDecomp(F2, GridBox((0,), (2,)),
                                      [Rectangle((0,), (2,))]))
        from persistgrid.grid import ModMorphism
        M = stack([L, L], [ModMorphism.zero(L, L)])
        p = str(tmp_path / "m.json")
        dump(pmod_to_json(M), p)
        code, _, err = run(capsys, ["verify", "tworows", "--in", p])
        assert code == 2

    def test_tworows_reports_split(self, tmp_path, rng, capsys):
        M = rand_two_rows_with_gap(rng, F2, max_width=4)
        p = str(tmp_path / "m.json")
        dump(pmod_to_json(M), p)
        code, text, _ = run(capsys, ["verify", "tworows", "--in", p])
        assert code == 0
        rep = json.loads(text)
        assert sum(rep["summand_dims"]) == sum(M.dims.values())


class TestDeterminism:
    def test_same_seed_same_output(self, tmp_path, rng, capsys):
        M = rand_module(rng, F2, GridBox((0,), (2,)), max_dim=2)
        p = str(tmp_path / "m.json")
        dump(pmod_to_json(M), p)
        outs = []
        for _ in range(2):
            code, text, _ = run(capsys, ["verify", "indec", "--in", p,
                                         "--seed", "7"])
            outs.append((code, text))
        assert outs[0] == outs[1]
