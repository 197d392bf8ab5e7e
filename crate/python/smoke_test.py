"""Smoke test for the polychow extension module.

Uses an installed `polychow` if there is one, otherwise loads the library
built by `cargo build -p polychow-python` (release first, then debug).

    cargo build -p polychow-python
    python3 python/smoke_test.py
"""

import importlib.machinery
import importlib.util
import pathlib
import sys
from fractions import Fraction

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        import polychow  # noqa: F401

        return polychow
    except ImportError:
        pass
    for profile in ("release", "debug"):
        for suffix in ("so", "dylib", "dll"):
            lib = ROOT / "target" / profile / f"libpolychow.{suffix}"
            if not lib.exists():
                lib = ROOT / "target" / profile / f"polychow.{suffix}"
            if lib.exists():
                loader = importlib.machinery.ExtensionFileLoader("polychow", str(lib))
                spec = importlib.util.spec_from_file_location("polychow", lib, loader=loader)
                module = importlib.util.module_from_spec(spec)
                loader.exec_module(module)
                sys.modules["polychow"] = module
                return module
    sys.exit("polychow not built; run `cargo build -p polychow-python` first")


def main():
    pc = load()

    trap = pc.projected_hypersimplex(3, [1, 2, 2])
    assert trap.affine_dim == 2 and len(trap.vertices) == 4
    assert trap.contains([1, 1, 1]) and not trap.is_vertex([1, 1, 1])
    assert trap.has_edge([1, 2, 0], [1, 0, 2])
    assert pc.is_polymatroid_polytope(trap, 3, [1, 2, 2])

    assert pc.check_exchange([[1, 1, 1], [1, 2, 0]])
    assert not pc.check_exchange([[1, 2, 0], [1, 0, 2], [0, 1, 2], [0, 2, 1]])

    counts = {}
    for r in ([1, 1, 1, 1], [1, 1, 2], [2, 2]):
        counts[tuple(r)] = pc.secondary_polytope(2, 4, r)["count"]
    assert counts == {(1, 1, 1, 1): 3, (1, 1, 2): 8, (2, 2): 5}, counts
    paired = pc.secondary_polytope(2, 4, pair_order=True)
    assert paired["labels"] == ["x12", "x34", "x13", "x24", "x14", "x23"]
    assert sorted(paired["char_vectors"]) == [[2, 2, 2, 2, 4, 4], [2, 2, 4, 4, 2, 2], [4, 4, 2, 2, 2, 2]]
    assert len(paired["sigma"].lattice_points()) == 6

    m = [[1, 0, "1/2"], [0, 1, 3]]
    assert pc.plucker(m) == [Fraction(1), Fraction(3), Fraction(-1, 2)]
    mat = [[1, 0, 1, 2], [0, 1, 3, 4]]
    assert pc.orbit_polytope(mat, [1, 2, 1]).affine_dim == 2
    assert pc.support_polymatroid(pc.gale_dual(mat), [2, 2]) == pc.support_polymatroid(mat, [2, 2]).dual()
    assert pc.weight_multiplicity_index(mat, [2, 2]) == "1"

    u = pc.Matroid.uniform(2, 4)
    assert u.dual() == u and len(u.bases) == 6
    assert u.contract([0]) == pc.Matroid.uniform(1, 3)
    poly = u.project([1, 1, 2])
    assert poly.is_valid() and poly.dual().dual() == poly

    assert pc.volume_identity(3, [2, 1, 1, 1], 0, "+") == ("1", "1", True)

    report = pc.balanced_identity()
    assert report["quartic_divisible"] and report["printed_degree_mismatch"]

    outcomes = pc.verify_examples()
    failed = [o for o in outcomes if not o["passed"]]
    assert outcomes and not failed, failed

    try:
        pc.projected_hypersimplex(3, [0, 2])
    except pc.PolychowError:
        pass
    else:
        raise AssertionError("invalid blocks accepted")

    print(f"python smoke test: ok ({len(outcomes)} example checks)")


if __name__ == "__main__":
    main()
