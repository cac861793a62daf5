"""Smoke test for the `kempe` extension module. Run with pytest or directly."""

import itertools

import kempe


def prism():
    return kempe.Graph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)])


def cycle(n):
    return kempe.Graph(n, [(i, (i + 1) % n) for i in range(n)])


def test_graph_basics():
    g = prism()
    assert g.n == len(g) == 6
    assert len(g.edges()) == 9
    assert g.degree(0) == 3
    assert sorted(g.neighbors(0)) == [1, 2, 3]


def test_chain_and_apply():
    g = kempe.Graph(3, [(0, 1), (1, 2)])
    a = kempe.Coloring(2, [1, 2, 1])
    assert sorted(kempe.chain(g, a, 0, 2)) == [0, 1, 2]
    assert kempe.apply(g, a, 0, 2).colors == [2, 1, 2]


def test_every_method_round_trips():
    g = cycle(5)
    a = kempe.Coloring(3, [1, 2, 1, 2, 3])
    b = kempe.Coloring(3, [2, 3, 2, 3, 1])
    for method in ["lvm", "degenerate", "list", "mad", "treewidth", "delta"]:
        moves = kempe.recolor(g, a, b, 3, method=method)
        assert kempe.verify(g, a, moves) == b, method


def test_oracle_prism():
    r = kempe.oracle(prism(), 3)
    assert r.num_colorings == 12
    assert r.num_classes == 2
    assert sorted(r.class_sizes) == [6, 6]
    assert len(r.frozen) == 12


def test_kempe_path_matches_oracle_classes():
    g = prism()
    colorings = [
        kempe.Coloring(3, list(c))
        for c in itertools.product([1, 2, 3], repeat=6)
        if all(c[u] != c[v] for u, v in g.edges())
    ]
    a = colorings[0]
    reachable = [b for b in colorings if kempe.kempe_path(g, 3, a, b) is not None]
    assert len(reachable) == 6


def test_errors_surface_as_kempe_error():
    g = kempe.Graph(2, [(0, 1)])
    try:
        kempe.apply(g, kempe.Coloring(2, [1, 2]), 0, 1)
    except kempe.KempeError:
        pass
    else:
        raise AssertionError("degenerate move accepted")
    try:
        kempe.recolor(prism(), kempe.Coloring(3, [2, 3, 1, 1, 2, 3]), kempe.Coloring(3, [3, 1, 2, 1, 2, 3]), 3, method="delta")
    except kempe.KempeError as e:
        assert "ThreePrismExcluded" in str(e)
    else:
        raise AssertionError("prism accepted")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            fn()
            print("ok", name)
