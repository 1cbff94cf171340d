"""Separation algebra, rank oracles, stars, and interval connectivity."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import naive
from septree import (
    CardinalityRank,
    Graph,
    GraphUniverse,
    GraphicRank,
    Matroid,
    TableRank,
    check_rank_oracle,
    complete_graph,
    cycle_graph,
    invert,
    is_grounded_sample,
    is_nested,
    is_star,
    join,
    lambda_interval,
    leq,
    meet,
    order,
    path_graph,
    star_interior,
    star_size,
)
from septree.separations import interval_minimizers, subsets_of

V3 = 0b111


def test_invert_examples():
    assert invert((0b011, 0b110)) == (0b110, 0b011)
    assert invert((0, V3)) == (V3, 0)
    # bipartition of M(K3): ({e01}, {e12, e02}) flips to its complement pair
    assert invert((0b001, 0b110)) == (0b110, 0b001)
    for s in [(0b011, 0b110), (0, V3), (0b101, 0b111)]:
        assert invert(invert(s)) == s


def test_leq_examples():
    assert leq((0b001, V3), (0b011, 0b110))
    assert not leq((0b011, 0b110), (0b001, V3))
    s = (0b011, 0b110)
    assert leq(s, s)


def test_leq_inversion_reverses_order():
    s1, s2 = (0b001, V3), (0b011, 0b110)
    assert leq(s1, s2) and leq(invert(s2), invert(s1))


def test_join_meet_with_comparable_element():
    lo, hi = (0b001, V3), (0b011, 0b110)
    assert join(lo, hi) == hi
    assert meet(lo, hi) == lo


def test_join_on_c4_crossing_pair(c4):
    u = GraphUniverse(c4)
    s1 = (0b0111, 0b1101)  # ({0,1,2},{2,3,0})
    s2 = (0b1110, 0b1011)  # ({1,2,3},{3,0,1})
    assert u.is_separation(s1) and u.is_separation(s2)
    j = join(s1, s2)
    assert j == (0b1111, 0b1001)
    assert u.is_separation(j)


def test_lattice_laws_exhaustive_small(small_universes):
    # join is the least upper bound and meet the greatest lower bound
    for u in small_universes:
        if u.size > 4:
            continue
        seps = list(u.all_separations())
        for s1 in seps:
            for s2 in seps:
                j, m = join(s1, s2), meet(s1, s2)
                assert leq(s1, j) and leq(s2, j)
                assert leq(m, s1) and leq(m, s2)
                for t in seps:
                    if leq(s1, t) and leq(s2, t):
                        assert leq(j, t)
                    if leq(t, s1) and leq(t, s2):
                        assert leq(t, m)


def test_is_nested_examples(c4):
    s = (0b011, 0b110)
    assert is_nested(s, invert(s))
    assert is_nested((0, V3), (0b101, 0b111))
    assert not is_nested((0b0111, 0b1101), (0b1110, 0b1011))


def test_order_examples(p3):
    u = GraphUniverse(p3)
    assert u.order((0b011, 0b110)) == 1
    assert order((0b011, 0b110), CardinalityRank(3)) == 1
    # graphic matroid of K3: r({e01}) + r({e12, e02}) - r(E) = 1 + 2 - 2
    m = Matroid.graphic(complete_graph(3))
    assert order((0b001, 0b110), m.rank) == 1
    assert u.order((V3, V3)) == 3


def test_order_is_symmetric(small_universes):
    for u in small_universes:
        for s in u.all_separations():
            assert u.order(s) == u.order(invert(s))


def test_order_submodular(small_universes):
    for u in small_universes:
        seps = list(u.all_separations())
        for s1 in seps:
            for s2 in seps:
                assert u.order(join(s1, s2)) + u.order(meet(s1, s2)) \
                    <= u.order(s1) + u.order(s2)


def test_is_star_examples():
    assert is_star([(0b001, V3), (0b100, V3)])
    assert not is_star([(0b011, 0b110), (0b011, 0b110)])
    assert is_star([(0b011, 0b110)])
    assert is_star([])


def test_is_star_matches_naive(p3):
    u = GraphUniverse(p3)
    seps = list(u.all_separations())
    for s1 in seps:
        for s2 in seps:
            got = is_star([s1, s2])
            want = naive.is_star_naive(
                [(naive.set_of(s1[0]), naive.set_of(s1[1])),
                 (naive.set_of(s2[0]), naive.set_of(s2[1]))])
            assert got == want


def test_star_size_examples():
    r3 = CardinalityRank(3)
    assert star_size([(0b001, V3), (0b100, V3)], r3) == 3
    assert star_size([(0b011, 0b110)], r3) == 2
    m = Matroid.graphic(complete_graph(3))
    assert star_size([(0b001, 0b110), (0b100, 0b011)], m.rank) == 2
    # empty star has the rank of the whole ground set
    assert star_size([], r3) == 3


def test_star_size_equals_interior_cardinality(small_universes):
    # cardinality rank: size of a star is the size of its interior
    for u in small_universes:
        seps = list(u.all_separations())
        for s1 in seps:
            for s2 in seps:
                if is_star([s1, s2]):
                    assert star_size([s1, s2], u.rank) == \
                        star_interior([s1, s2], u.full).bit_count()


def test_lambda_interval_p3(p3):
    u = GraphUniverse(p3)
    val, wit = lambda_interval(u, (0b001, V3), (V3, 0b100))
    assert val == 1
    # brute force over every separation of the graph
    want = naive.interval_min_order(3, p3.edges, ({0}, {0, 1, 2}),
                                    ({0, 1, 2}, {2}))
    assert val == want
    # the witness attains the minimum and is the smallest such encoding
    assert u.order(wit) == 1
    mins = interval_minimizers(u, (0b001, V3), (V3, 0b100))
    assert wit == mins[0]


def test_lambda_interval_one_point(p3):
    u = GraphUniverse(p3)
    s = (0b011, 0b110)
    assert lambda_interval(u, s, s) == (1, s)


def test_lambda_interval_mk3():
    m = Matroid.graphic(complete_graph(3))
    u = m.universe()
    lo = (0b001, 0b110)
    hi = invert((0b100, 0b011))
    val, _ = lambda_interval(u, lo, hi)
    assert val == 1


def test_lambda_interval_empty_interval_raises(p3):
    u = GraphUniverse(p3)
    with pytest.raises(ValueError):
        lambda_interval(u, (0b011, 0b110), (0b001, V3))


def test_lambda_interval_vs_naive(small_universes):
    for u in small_universes:
        if u.size > 4:
            continue
        g = u.graph
        seps = sorted(u.all_separations())
        for lo in seps:
            for hi in seps:
                if not leq(lo, hi):
                    continue
                val, wit = lambda_interval(u, lo, hi)
                want = naive.interval_min_order(
                    g.n, g.edges,
                    (naive.set_of(lo[0]), naive.set_of(lo[1])),
                    (naive.set_of(hi[0]), naive.set_of(hi[1])))
                assert val == want
                assert leq(lo, wit) and leq(wit, hi)
                assert u.order(wit) == val


def test_lambda_is_lower_bound_with_witness(c4):
    u = GraphUniverse(c4)
    seps = sorted(u.all_separations())
    for lo in seps[::7]:
        for hi in seps:
            if not leq(lo, hi):
                continue
            val, wit = lambda_interval(u, lo, hi)
            for s in seps:
                if leq(lo, s) and leq(s, hi):
                    assert val <= u.order(s)
            assert u.order(wit) == val


def test_grounded_for_cardinality(p3):
    u = GraphUniverse(p3)
    seps = list(u.all_separations())
    pairs = [(s1, s2) for s1 in seps for s2 in seps if leq(invert(s1), s2)]
    assert is_grounded_sample(u.rank, pairs)


def test_grounded_for_any_symmetric_bipartition_order():
    # bipartitions are grounded even for a non-monotone table
    vals = [0, 2, 2, 1]
    rank = TableRank(vals)
    u = Matroid(rank).universe()
    seps = list(u.all_separations())
    pairs = [(s1, s2) for s1 in seps for s2 in seps if leq(invert(s1), s2)]
    assert is_grounded_sample(rank, pairs)


def test_grounded_fails_for_corrupted_table():
    # search 2-element tables for a non-monotone sep(V) counterexample
    g = Graph(2, [])
    u = GraphUniverse(g)
    seps = list(u.all_separations())
    found = None
    for vals in [[0, 2, 0, 1], [1, 3, 0, 1], [0, 3, 0, 2]]:
        rank = TableRank(vals)
        pairs = [(s1, s2) for s1 in seps for s2 in seps
                 if leq(invert(s1), s2)]
        if not is_grounded_sample(rank, pairs):
            found = vals
            break
    assert found is not None


def test_grounded_precondition_enforced():
    with pytest.raises(ValueError):
        is_grounded_sample(CardinalityRank(2),
                           [((0b01, 0b11), (0b01, 0b11))])


def test_check_rank_oracle_valid():
    assert check_rank_oracle(CardinalityRank(4)).passed
    rep = check_rank_oracle(GraphicRank(complete_graph(3)))
    assert rep.passed
    assert rep.counts["method"] == "pairwise"


def test_check_rank_oracle_monotonicity_violation():
    rep = check_rank_oracle(TableRank([0, 2, 1, 1]))
    assert not rep.passed
    assert rep.witness["kind"] == "monotonicity"


def test_check_rank_oracle_submodularity_violation():
    # r({0}) = r({1}) = 0 but r({0,1}) = 1
    rep = check_rank_oracle(TableRank([0, 0, 0, 1]))
    assert not rep.passed
    assert rep.witness["kind"] == "submodularity"


def test_check_rank_oracle_cap_and_sampling():
    class Big(CardinalityRank):
        pass

    with pytest.raises(ValueError):
        check_rank_oracle(Big(20), max_exhaustive=16)
    assert check_rank_oracle(Big(20), samples=500).passed


def test_corner_nesting_of_crossing_pairs(small_universes):
    for u in small_universes:
        if u.size > 4:
            continue
        seps = list(u.all_separations())
        for a in seps:
            for c in seps:
                if not is_nested(a, c):
                    continue
                for e in seps:
                    if is_nested(c, e) or not is_nested(a, e):
                        continue
                    for corner in (join(c, e), meet(c, e),
                                   join(c, invert(e)), meet(c, invert(e))):
                        assert is_nested(a, corner)


def test_corner_nesting_needs_the_crossing_hypothesis():
    # nested (not crossing) pairs can have degenerate, non-nested corners
    a = (0b01, 0b10)
    c = (0b01, 0b11)
    e = (0b10, 0b11)
    assert is_nested(a, c) and is_nested(a, e) and is_nested(c, e)
    assert join(c, e) == (0b11, 0b11)
    assert not is_nested(a, join(c, e))


masks3 = st.integers(min_value=0, max_value=7)


def _rand_sep(a, extra):
    # (A, B) with A | B = V on three points
    return (a, (7 ^ a) | (extra & a))


@given(masks3, masks3, masks3, masks3)
def test_involution_reverses_leq(a1, e1, a2, e2):
    s1, s2 = _rand_sep(a1, e1), _rand_sep(a2, e2)
    assert leq(s1, s2) == leq(invert(s2), invert(s1))


@given(masks3, masks3, masks3, masks3)
def test_join_meet_are_invert_duals(a1, e1, a2, e2):
    s1, s2 = _rand_sep(a1, e1), _rand_sep(a2, e2)
    assert invert(join(s1, s2)) == meet(invert(s1), invert(s2))


@settings(max_examples=200)
@given(masks3, masks3)
def test_cardinality_order_formula(a, e):
    s = _rand_sep(a, e)
    r = CardinalityRank(3)
    assert order(s, r) == (s[0] & s[1]).bit_count()


def test_subsets_of_enumerates_all():
    got = sorted(subsets_of(0b1011))
    want = sorted(a for a in range(16) if a & ~0b1011 == 0)
    assert got == want
