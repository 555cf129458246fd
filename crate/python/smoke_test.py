"""Smoke test for the gamma_forest extension module.

Imports an installed module if there is one (e.g. after
``pip install ./crates/python``). With ``--build`` it instead compiles the
extension with cargo and loads it from a temporary directory.
"""

import argparse
import importlib
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def build_and_stage():
    subprocess.run(
        ["cargo", "build", "--release", "-p", "gamma-forest-py", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    staging = Path(tempfile.mkdtemp(prefix="gamma_forest_"))
    shutil.copy(ROOT / "target" / "release" / "libgamma_forest.so", staging / "gamma_forest.so")
    sys.path.insert(0, str(staging))


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--build", action="store_true", help="build the extension with cargo first")
    args = parser.parse_args()
    if args.build:
        build_and_stage()
    gf = importlib.import_module("gamma_forest")

    assert gf.drake_polynomial(3) == [2, 5, 2]
    assert gf.descent_polynomial(4) == gf.drake_polynomial(4) == [6, 26, 26, 6]
    assert gf.gamma_closed_form(3) == [2, 1]
    assert gf.gamma_closed_form(5) == [24, 58, 9]
    assert gf.to_gamma_basis([2, 5, 2]) == [2, 1]
    assert gf.from_gamma_basis(2, [2, 1]) == [2, 5, 2]
    try:
        gf.to_gamma_basis([1, 2])
    except ValueError:
        pass
    else:
        raise AssertionError("non-palindromic input accepted")

    # coefficients are Python ints, so large n stays exact
    assert sum(gf.drake_polynomial(30)) == 30 ** 29

    assert gf.eulerian_polynomial(3) == [1, 4, 1]
    assert gf.eulerian_gamma_count(3) == [1, 2]
    for kind, n in [("ndrd_rdes", 5), ("ndnl_nlyn", 5), ("naas_aapair", 4), ("ntns_tnpair", 4)]:
        assert gf.distribution(kind, n) == [24, 58, 9], kind
    assert gf.bicolored_polynomial("combs", 3) == gf.bicolored_polynomial("lyndon", 3) == [2, 5, 2]

    assert gf.comb_type_expansion(3) == {(1, 1): 2, (2,): 1}
    direct = gf.f_mcomb_direct(3, 2)
    assert direct == {(2, 0): 2, (1, 1): 5, (0, 2): 2}
    assert gf.expand_in_variables(gf.comb_type_expansion(3), 2) == direct

    tree = gf.NormalizedTree("(1,(2,3))")
    assert (tree.n, tree.rdes(), tree.nlyn(), tree.comb_type()) == (3, 1, 0, [2])
    assert str(tree) == "(1,(2,3))"
    assert len(gf.NormalizedTree.all(5)) == 105

    words = gf.StirlingPermutation.all(2)
    table = [(str(w), w.tnpair(), w.aapair()) for w in words]
    assert table == [("1122", 0, 1), ("1221", 1, 0), ("2211", 0, 0)]
    try:
        gf.StirlingPermutation("11322344")
    except ValueError:
        pass
    else:
        raise AssertionError("non-Stirling word accepted")

    rooted = gf.RootedTree.from_prufer(3, 2, [2])
    assert rooted.edges() == [(2, 1), (2, 3)] and rooted.des() == 1
    assert sum(t.des() for t in gf.RootedTree.all(3)) == 5 + 2 * 2

    ok, report = gf.verify("gamma", 4)
    assert ok, report
    print("gamma_forest smoke test passed")


if __name__ == "__main__":
    main()
