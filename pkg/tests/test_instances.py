"""Graphs, matroids, universes, decompositions, conversions, file formats."""

import json

import pytest

import naive
from septree import (
    Graph,
    GraphTreeDecomposition,
    GraphUniverse,
    Matroid,
    MatroidTreeDecomposition,
    check_rank_oracle,
    complete_graph,
    cycle_graph,
    matroid_decomp_to_stree,
    path_graph,
    star_size,
    stree_to_matroid_decomp,
    stree_to_treedecomp,
    treedecomp_to_stree,
)
from septree.instances import DecompTree, LinearRank, UniformRank, decomposition_from_dict
from septree.strees import STree, single_vertex_stree


def test_graph_normalizes_loops_and_duplicates():
    g = Graph(3, [(0, 1), (1, 0), (1, 1), (1, 2)])
    assert g.edges == ((0, 1), (1, 2))


def test_graph_rejects_out_of_range():
    with pytest.raises(ValueError):
        Graph(2, [(0, 2)])


def test_edge_list_parsing():
    g = Graph.from_text("3 2\n0 1\n1 2\n")
    assert g.n == 3 and g.edges == ((0, 1), (1, 2))
    with pytest.raises(ValueError):
        Graph.from_text("3 5\n0 1\n")


def test_dimacs_col_parsing():
    g = Graph.from_text("c a comment\np edge 4 2\ne 1 2\ne 3 4\n")
    assert g.n == 4 and g.edges == ((0, 1), (2, 3))


def test_graph_json_roundtrip(c4):
    assert Graph.from_dict(c4.to_dict()).edges == c4.edges


def test_universe_membership(p3):
    u = GraphUniverse(p3)
    assert u.is_separation((0b011, 0b110))
    assert not u.is_separation((0b001, 0b110))  # vertex 0 uncovered
    assert u.is_separation((0b111, 0b111))
    k3 = GraphUniverse(complete_graph(3))
    # the edge 0-2 crosses ({0,1},{1,2}) in K3
    assert not k3.is_separation((0b011, 0b110))


def test_all_separations_match_definition(small_universes):
    for u in small_universes:
        got = sorted(u.all_separations())
        want = sorted(
            (naive.mask_of(a), naive.mask_of(b))
            for a, b in naive.graph_separations(u.graph.n, u.graph.edges))
        assert got == want


def test_graphic_rank():
    r = Matroid.graphic(complete_graph(3)).rank
    assert r(0b111) == 2
    assert r(0b001) == 1
    assert check_rank_oracle(r).passed


def test_uniform_rank():
    r = UniformRank(1, 3)
    assert r(0b011) == 1
    assert check_rank_oracle(r).passed


def test_linear_rank_gf2():
    r = LinearRank([[1, 0, 1], [0, 1, 1]], 2)
    assert r(0b111) == 2
    assert r(0b100) == 1
    assert check_rank_oracle(r).passed
    with pytest.raises(ValueError):
        LinearRank([[1]], 11)


def test_matroid_json_roundtrip():
    for m in (Matroid.graphic(cycle_graph(4)), Matroid.uniform(2, 5),
              Matroid.linear([[1, 0], [1, 1]], 3)):
        m2 = Matroid.from_json(json.dumps(m.to_dict()))
        assert m2.size == m.size
        for x in range(m.full + 1):
            assert m2.rank(x) == m.rank(x)


def test_decomposition_validation(p3):
    good = GraphTreeDecomposition(DecompTree(2, [(0, 1)]), [0b011, 0b110])
    assert good.validate(p3).passed
    assert good.width == 1 and good.adhesion == 1

    uncovered_vertex = GraphTreeDecomposition(DecompTree(1, []), [0b011])
    rep = uncovered_vertex.validate(p3)
    assert not rep.passed and rep.witness["kind"] == "uncovered-vertices"

    uncovered_edge = GraphTreeDecomposition(
        DecompTree(2, [(0, 1)]), [0b011, 0b100])
    rep = uncovered_edge.validate(p3)
    assert not rep.passed and rep.witness["kind"] == "uncovered-edge"

    disconnected = GraphTreeDecomposition(
        DecompTree(3, [(0, 1), (1, 2)]), [0b011, 0b010, 0b111])
    rep = disconnected.validate(p3)
    assert not rep.passed and rep.witness["kind"] == "disconnected-occurrence"


def test_stree_to_treedecomp_single_edge(p3):
    u = GraphUniverse(p3)
    t = STree((0, 1), ((0, 1),),
              {(0, 1): (0b011, 0b110), (1, 0): (0b110, 0b011)})
    d = stree_to_treedecomp(t, u)
    assert d.bags == (0b011, 0b110)


def test_stree_to_treedecomp_single_vertex(p3):
    u = GraphUniverse(p3)
    d = stree_to_treedecomp(single_vertex_stree(), u)
    assert d.bags == (0b111,)


def test_stree_to_treedecomp_requires_tame(p3):
    u = GraphUniverse(p3)
    # the same separation entering vertex 1 twice is not a star
    t = STree((0, 1, 2), ((0, 1), (1, 2)),
              {(0, 1): (0b011, 0b110), (1, 0): (0b110, 0b011),
               (2, 1): (0b011, 0b110), (1, 2): (0b110, 0b011)},
              check=False)
    with pytest.raises(ValueError):
        stree_to_treedecomp(t, u)


def test_treedecomp_to_stree_p3(p3):
    d = GraphTreeDecomposition(DecompTree(2, [(0, 1)]), [0b011, 0b110])
    t = treedecomp_to_stree(d, p3)
    assert t.alpha[(0, 1)] == (0b011, 0b110)


def test_treedecomp_to_stree_c4(c4):
    d = GraphTreeDecomposition(DecompTree(2, [(0, 1)]), [0b0111, 0b1101])
    t = treedecomp_to_stree(d, c4)
    assert t.alpha[(0, 1)] == (0b0111, 0b1101)


def test_treedecomp_single_bag_roundtrip(k4):
    d = GraphTreeDecomposition(DecompTree(1, []), [0b1111])
    t = treedecomp_to_stree(d, k4)
    assert len(t.vertices) == 1 and not t.edges
    d2 = stree_to_treedecomp(t, GraphUniverse(k4))
    assert d2.bags == d.bags


def test_treedecomp_to_stree_rejects_invalid(p3):
    d = GraphTreeDecomposition(DecompTree(1, []), [0b011])
    with pytest.raises(ValueError):
        treedecomp_to_stree(d, p3)


def test_graph_roundtrip_adhesions(c4):
    d = GraphTreeDecomposition(DecompTree(2, [(0, 1)]), [0b0111, 0b1101])
    t = treedecomp_to_stree(d, c4)
    a, b = t.alpha[(0, 1)]
    # adjacent bags meet exactly in the label's two sides
    assert d.bags[0] & d.bags[1] == a & b


def test_matroid_single_vertex_width():
    m = Matroid.graphic(complete_graph(3))
    d = MatroidTreeDecomposition(DecompTree(1, []), [0, 0, 0])
    assert d.bag_width(0, m) == 2
    assert d.width(m) == 2
    t = matroid_decomp_to_stree(d, m)
    assert len(t.vertices) == 1
    assert star_size(t.star(0), m.rank) == 2


def test_matroid_two_vertex_split():
    # {e01} against {e02, e12}: bag widths 1 and 2
    m = Matroid.graphic(complete_graph(3))
    d = MatroidTreeDecomposition(DecompTree(2, [(0, 1)]), [0, 1, 1])
    t = matroid_decomp_to_stree(d, m)
    assert t.alpha[(0, 1)] == (0b001, 0b110)
    assert d.bag_width(0, m) == 1
    assert d.bag_width(1, m) == 2
    for v in (0, 1):
        assert d.bag_width(v, m) == star_size(t.star(v), m.rank)


def test_matroid_empty_bag_allowed():
    m = Matroid.graphic(complete_graph(3))
    d = MatroidTreeDecomposition(DecompTree(3, [(0, 1), (1, 2)]), [0, 0, 2])
    assert d.bag_mask(1) == 0
    assert d.width(m) >= 1
    t = matroid_decomp_to_stree(d, m)
    d2 = stree_to_matroid_decomp(t, m)
    assert d2.tau == d.tau


def test_matroid_roundtrip():
    m = Matroid.graphic(cycle_graph(4))
    d = MatroidTreeDecomposition(
        DecompTree(3, [(0, 1), (1, 2)]), [0, 0, 1, 2])
    t = matroid_decomp_to_stree(d, m)
    d2 = stree_to_matroid_decomp(t, m)
    assert d2.tau == d.tau and d2.tree.edges == d.tree.edges


def test_decomposition_json_roundtrip(c4):
    d = GraphTreeDecomposition(DecompTree(2, [(0, 1)]), [0b0111, 0b1101])
    d2 = decomposition_from_dict(json.loads(json.dumps(d.to_dict())))
    assert d2.bags == d.bags and d2.tree.edges == d.tree.edges
    md = MatroidTreeDecomposition(DecompTree(2, [(0, 1)]), [0, 1, 1])
    md2 = decomposition_from_dict(json.loads(json.dumps(md.to_dict())))
    assert md2.tau == md.tau
