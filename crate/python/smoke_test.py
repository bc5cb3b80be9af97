"""Smoke test for the linkoid_py extension.

Build first:
    cargo build -p linkoid-py --features extension-module --release
then run this script from the repository root.
"""

import importlib.util
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "liblinkoid_py.so"
        if lib.exists():
            break
    else:
        sys.exit("liblinkoid_py.so not found; build the linkoid-py crate first")
    tmp = pathlib.Path(tempfile.mkdtemp())
    shutil.copy(lib, tmp / "linkoid_py.so")
    spec = importlib.util.spec_from_file_location("linkoid_py", tmp / "linkoid_py.so")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


def main():
    lk = load()

    trivial = lk.Diagram("surface S2\nT 1 1\nH 1 2\n")
    assert str(trivial.bracket()) == "l"

    trefoil = lk.Diagram.from_corpus("trefoil")
    assert trefoil.crossings == 3 and trefoil.writhe() == 3
    nb = trefoil.bracket(normalized=True)
    assert nb == lk.Poly.delta() * lk.Poly("A^-4+A^-12-A^-16")
    assert trefoil.mirror().bracket(normalized=True) == nb.mirror()
    assert trefoil.oracle_bracket() == trefoil.bracket()

    for seed in range(5):
        s = trefoil.scramble(moves=50, seed=seed)
        assert s.bracket(normalized=True) == nb

    l1, l2 = lk.Diagram.from_corpus("pair_l1"), lk.Diagram.from_corpus("pair_l2")
    assert l1.ordered_bracket(normalized=True) != l2.ordered_bracket(normalized=True)
    assert l1.bracket(normalized=True) == l2.bracket(normalized=True)
    assert l1.ordered_bracket().forget_pairs() == l1.bracket()

    k1 = lk.Diagram.from_corpus("collapse_k1")
    k2 = lk.Diagram.from_corpus("collapse_k2")
    assert k1.kbsm(normalized=True) != k2.kbsm(normalized=True)
    on_sphere = [(str(c), b) for c, b in k1.kbsm(normalized=True, sphere=True)]
    assert on_sphere == [(str(c), b) for c, b in k2.kbsm(normalized=True, sphere=True)]

    a, b, c = (lk.Diagram.from_corpus(f"theta_trefoil_{x}").tcol() for x in "abc")
    assert a == b and a != c

    theta = lk.Diagram.from_corpus("knotoid21").theta()
    assert "V vinf" in theta.to_text()
    schemes = lk.Diagram.from_corpus("knotoid21").tcol()
    assert len(schemes) == 6

    try:
        lk.Diagram("surface S2\nX 1 2\n")
    except lk.ParseError as e:
        assert "line 2" in str(e)
    else:
        raise AssertionError("bad input accepted")

    assert "trefoil" in lk.corpus_names()
    print("python smoke test passed")


if __name__ == "__main__":
    main()
