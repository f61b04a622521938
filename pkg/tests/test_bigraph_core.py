import json
import random

import pytest

from linhyper import (
    BipartiteGraph,
    Hypergraph,
    classify,
    dual_failed_properties,
    enumerate_bigraphs,
    from_hypergraph,
    hyper_properties,
    new_degree_sequence,
    to_hypergraph,
)
from linhyper.errors import LoopPresent, NonConforming, WrongRightDegree

from support import naive_four_cycles


def test_from_edges_rejects_duplicates():
    with pytest.raises(ValueError):
        BipartiteGraph.from_edges(2, 1, [(0, 0), (0, 0)])


def test_degrees_and_edges(demo_graph):
    assert demo_graph.left_degrees() == (2, 3, 1, 2, 2, 2)
    assert demo_graph.right_degrees() == (3, 3, 3, 3)
    assert (1, 0) in demo_graph.edges() and len(demo_graph.edges()) == 12


def test_to_hypergraph(demo_graph):
    hg = to_hypergraph(demo_graph, 3)
    assert hg.edges == ((0, 1, 2), (0, 1, 3), (1, 4, 5), (3, 4, 5))
    assert hg.degrees() == (2, 3, 1, 2, 2, 2)

    empty = BipartiteGraph(4, 0, [])
    assert to_hypergraph(empty, 3).edges == ()

    with pytest.raises(WrongRightDegree):
        to_hypergraph(demo_graph, 4)


def test_to_hypergraph_two_disjoint_stars():
    # one conforming graph for six degree-1 vertices: two disjoint triples
    g = BipartiteGraph(6, 2, [0b000111, 0b111000])
    hg = to_hypergraph(g, 3)
    assert hg == Hypergraph(6, [(0, 1, 2), (3, 4, 5)])


def test_from_hypergraph_canonical_order(demo_graph):
    hg = Hypergraph(6, [(3, 4, 5), (1, 4, 5), (0, 1, 3), (0, 1, 2)])
    g = from_hypergraph(hg)
    assert g == demo_graph  # columns sorted lexicographically by edge

    single = from_hypergraph(Hypergraph(3, [(0, 1, 2)]))
    assert single.cols == (0b111,)

    with pytest.raises(LoopPresent):
        from_hypergraph(Hypergraph(3, [(0, 0, 1)]))


def test_round_trip_random_hypergraphs():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(4, 7)
        r = rng.choice((2, 3, 4))
        m = rng.randint(0, 4)
        edges = [tuple(sorted(rng.sample(range(n), r))) for _ in range(m)]
        hg = Hypergraph(n, edges)
        assert to_hypergraph(from_hypergraph(hg), r) == hg


def test_four_cycles(demo_graph):
    cycles = demo_graph.four_cycles()
    assert [(c.left_pair, c.right_pair) for c in cycles] == [
        ((0, 1), (0, 1)),
        ((4, 5), (2, 3)),
    ]
    assert demo_graph.has_four_cycle()

    square = BipartiteGraph(2, 2, [0b11, 0b11])
    assert len(square.four_cycles()) == 1

    forest = BipartiteGraph(4, 2, [0b0011, 0b1100])
    assert forest.four_cycles() == ()
    assert not forest.has_four_cycle()


def test_four_cycles_match_naive_scan():
    rng = random.Random(3)
    for _ in range(120):
        n = rng.randint(1, 8)
        m = rng.randint(1, 8)
        cols = [rng.getrandbits(n) for _ in range(m)]
        g = BipartiteGraph(n, m, cols)
        got = [(c.left_pair[0], c.left_pair[1], c.right_pair[0], c.right_pair[1]) for c in g.four_cycles()]
        assert sorted(got) == sorted(naive_four_cycles(g))
        assert g.has_four_cycle() == bool(got)


def test_has_copy(demo_graph):
    assert not demo_graph.has_copy(3, 2)
    assert demo_graph.has_copy(2, 2)
    k32 = BipartiteGraph(3, 2, [0b111, 0b111])
    assert k32.has_copy(3, 2)
    with pytest.raises(ValueError):
        demo_graph.has_copy(0, 1)


def test_distance(demo_graph):
    assert demo_graph.distance(("v", 2), ("e", 0)) == 1
    assert demo_graph.distance(("v", 2), ("v", 0)) == 2
    assert demo_graph.distance(("e", 1), ("e", 1)) == 0
    split = BipartiteGraph(2, 2, [0b01, 0b10])
    assert split.distance(("v", 0), ("v", 1)) is None
    with pytest.raises(ValueError):
        demo_graph.distance(("x", 0), ("v", 0))


def test_classify_demo(demo_graph, demo_ds):
    cls = classify(demo_graph, demo_ds)
    assert cls.d == 2
    assert cls.in_b0 and cls.in_bplus
    assert cls.failed_properties == frozenset()


def test_classify_repeated_columns():
    g = BipartiteGraph(3, 2, [0b111, 0b111])
    ds = new_degree_sequence((2, 2, 2), 3)
    cls = classify(g, ds)
    assert not cls.in_b0
    assert "i" in cls.failed_properties and not cls.in_bplus


def test_classify_acyclic():
    g = BipartiteGraph(6, 2, [0b000111, 0b111000])
    cls = classify(g, new_degree_sequence((1,) * 6, 3))
    assert cls.d == 0 and cls.in_bplus


def test_classify_nonconforming(demo_graph):
    with pytest.raises(NonConforming):
        classify(demo_graph, new_degree_sequence((1,) * 6, 3))


def test_hyper_properties(demo_graph):
    hg = to_hypergraph(demo_graph, 3)
    props = hyper_properties(hg)
    assert props.loops == 0
    assert props.double_links == ((0, 1), (4, 5))
    assert props.is_simple and not props.is_linear

    disjoint = Hypergraph(6, [(0, 1, 2), (3, 4, 5)])
    assert hyper_properties(disjoint).is_linear

    repeated = Hypergraph(3, [(0, 1, 2), (0, 1, 2)])
    props = hyper_properties(repeated)
    assert props.repeated_edges == 1 and not props.is_simple
    assert props.max_link_multiplicity == 2

    loopy = Hypergraph(3, [(0, 0, 1)])
    props = hyper_properties(loopy)
    assert props.loops == 1 and not props.is_simple and not props.is_linear


def test_duality_on_battery():
    """Bipartite property battery agrees with its hypergraph-side analogue."""
    from linhyper import canonical_battery

    checked = 0
    for ds in canonical_battery(max_n=6, max_space=12):
        n2 = ds.thresholds().n2

        def visitor(g):
            nonlocal checked
            cls = classify(g, ds)
            hg = to_hypergraph(g, ds.r)
            dual_failed = dual_failed_properties(hg, n2)
            assert cls.in_bplus == (not dual_failed), (ds.k, g.cols)
            if cls.in_bplus:
                assert cls.in_b0
                assert len(cls.four_cycles) == len(hyper_properties(hg).double_links)
            checked += 1

        enumerate_bigraphs(ds, visitor=visitor, max_space=12)
    assert checked > 4000


def test_graph_json_round_trip(demo_graph):
    blob = json.dumps(demo_graph.to_json_dict())
    again = BipartiteGraph.from_json_dict(json.loads(blob))
    assert again == demo_graph
    assert demo_graph.to_json_dict()["edges"][0] == [1, 1]  # 1-based


def test_hypergraph_json_round_trip():
    hg = Hypergraph(5, [(0, 1, 4), (1, 2, 3)])
    again = Hypergraph.from_json_dict(json.loads(json.dumps(hg.to_json_dict())))
    assert again == hg


def test_hypergraph_equality_is_multiset():
    a = Hypergraph(4, [(0, 1, 2), (0, 1, 3)])
    b = Hypergraph(4, [(0, 1, 3), (0, 1, 2)])
    assert a == b
    c = Hypergraph(4, [(0, 1, 2), (0, 1, 2)])
    assert a != c
