"""Smoke test for the coremax_py extension module."""

import coremax_py as cm

MULTIBLOCK = """p cnf 6 12
1 0
-1 -2 0
2 0
-1 -5 0
-2 -5 0
3 0
-3 -4 0
4 0
-3 -5 0
-4 -5 0
5 6 0
5 -6 0
"""


def main():
    f = cm.Formula.from_dimacs(MULTIBLOCK)
    assert (f.num_vars, f.num_soft, len(f)) == (6, 12, 12)
    for algo in ["msu1", "msu2", "msu3", "linear", "brute"]:
        r = cm.solve(f, algo=algo, seed=1)
        assert (r.optimum, r.cost) == (9, 3), (algo, r)
        values = [lit > 0 for lit in r.model]
        assert f.evaluate(values) == (9, 3, 0)
        print(f"{algo}: optimum {r.optimum} in {int(r.stats['iterations'])} iterations")

    g = cm.Formula()
    g.add_hard([1])
    g.add_hard([-1])
    g.add_soft([2])
    try:
        cm.solve(g)
    except cm.HardClausesUnsat:
        pass
    else:
        raise AssertionError("expected HardClausesUnsat")

    ok, core = cm.sat(cm.Formula.from_dimacs("p cnf 2 3\n1 0\n-1 0\n2 0\n"), minimize=True)
    assert not ok and core == [0, 1]
    assert cm.encoding_size("atmost", 10_000, 1, "pairwise") == (49_995_000, 0)
    print("smoke test ok")


if __name__ == "__main__":
    main()
