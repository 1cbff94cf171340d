"""Refinement loops that turn any S-tree over a suitable star family into a
linked or lean one of no greater width.

Both loops repeat one surgery: locate a violation, pick a minimum-order
separation (X, Y) in the violating interval that is nested with as many
tree labels as possible, shift the two relevant subtrees onto (X, Y) and
(Y, X), and glue the shifted copies along the edge carrying (X, Y).

Termination is driven by a lexicographic potential.  For the linked loop,
level p counts edges whose label order is at least p together with the
component count of that subforest; for the lean loop, vertices whose star
size is at least p.  Each level is encoded as (count, count - components)
so that plain tuple comparison realizes "fewer objects, or equally many in
more pieces".  Every surgery must strictly decrease the potential; a
failure to do so is a bug and raises immediately.
"""

from __future__ import annotations

from dataclasses import dataclass

from .separations import (
    Sep,
    interval_minimizers,
    invert,
    is_nested,
    lambda_interval,
    leq,
    star_size,
)
from .strees import STree, StarFamily, max_order, max_star_size, shift, validate_stree


class RefinementInvariantError(RuntimeError):
    """An internal invariant of the refinement argument failed."""


class IterationLimitError(RuntimeError):
    """The tripwire iteration cap was exceeded (signals a bug)."""


# ---------------------------------------------------------------------------
# potentials

@dataclass(frozen=True)
class PotentialProfile:
    """Per-level (count, count - components) pairs, highest level first.

    Profiles compare lexicographically; strictly smaller means strictly
    better.  Levels run from the cap down to zero, so profiles of the same
    mode and caps are always comparable position by position.
    """

    mode: str
    order_cap: int
    size_cap: int
    levels: tuple

    def precedes(self, other: "PotentialProfile") -> bool:
        if (self.mode, self.order_cap, self.size_cap) != \
                (other.mode, other.order_cap, other.size_cap):
            raise ValueError("profiles with different shapes are incomparable")
        return self.levels < other.levels


def _edge_subforest_stats(tree: STree, keep_edges) -> tuple[int, int]:
    keep = list(keep_edges)
    if not keep:
        return 0, 0
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in keep:
        parent.setdefault(u, u)
        parent.setdefault(v, v)
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    comps = len({find(x) for x in parent})
    return len(keep), comps


def _vertex_subforest_stats(tree: STree, keep_vertices) -> tuple[int, int]:
    keep = set(keep_vertices)
    if not keep:
        return 0, 0
    seen = set()
    comps = 0
    for v in sorted(keep):
        if v in seen:
            continue
        comps += 1
        stack = [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            for y in tree.adj[x]:
                if y in keep and y not in seen:
                    seen.add(y)
                    stack.append(y)
    return len(keep), comps


def potential(tree: STree, universe, mode: str, order_cap: int,
              size_cap: int) -> PotentialProfile:
    """Descending width profile of the tree.

    mode "linked" uses edge orders at thresholds order_cap..0, "lean" uses
    star sizes at thresholds size_cap..0, and "combined" interleaves both
    as four-entry levels (edges first).
    """
    orders = {e: universe.order(tree.alpha[e]) for e in tree.edges}
    sizes = {t: star_size(tree.star(t), universe.rank) for t in tree.vertices}
    levels = []
    if mode == "linked":
        for p in range(order_cap, -1, -1):
            c, k = _edge_subforest_stats(
                tree, (e for e, o in orders.items() if o >= p))
            levels.append((c, c - k))
    elif mode == "lean":
        for p in range(size_cap, -1, -1):
            c, k = _vertex_subforest_stats(
                tree, (t for t, s in sizes.items() if s >= p))
            levels.append((c, c - k))
    elif mode == "combined":
        for p in range(max(order_cap, size_cap), -1, -1):
            ec, ek = _edge_subforest_stats(
                tree, (e for e, o in orders.items() if o >= p))
            vc, vk = _vertex_subforest_stats(
                tree, (t for t, s in sizes.items() if s >= p))
            levels.append((ec, ec - ek, vc, vc - vk))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return PotentialProfile(mode, order_cap, size_cap, tuple(levels))


def profile_for_family(tree: STree, universe, family: StarFamily,
                       mode: str) -> PotentialProfile:
    order_cap = family.order_cap
    size_cap = max(family.size_cap, max_star_size(tree, universe) + 1)
    return potential(tree, universe, mode, order_cap, size_cap)


# ---------------------------------------------------------------------------
# violations

@dataclass(frozen=True)
class LinkedViolation:
    """Directed edge pair e <= f whose path minimum exceeds the interval
    connectivity ``ell`` of the end labels (witnessed by a minimizer)."""

    e: tuple[int, int]
    f: tuple[int, int]
    ell: int
    witness: Sep


@dataclass(frozen=True)
class LeanViolation:
    """Addable separations at t and t2 whose interval connectivity ``ell``
    is below both ranks while every connecting label order exceeds it."""

    t: int
    t2: int
    addA: Sep
    addA2: Sep
    ell: int
    witness: Sep


def find_linked_violation(tree: STree, universe) -> LinkedViolation | None:
    """First violating edge pair in canonical id order, or None if linked."""
    edges = tree.edges
    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            e, f, path = tree.directed_pair(edges[i], edges[j])
            pmin = min(universe.order(tree.alpha[g]) for g in path)
            lam, wit = lambda_interval(universe, tree.alpha[e], tree.alpha[f])
            if pmin > lam:
                return LinkedViolation(e, f, lam, wit)
            if pmin < lam:
                raise RefinementInvariantError(
                    "path label below interval minimum; tree is not tame")
    return None


def find_lean_violation(tree: STree, universe, family: StarFamily,
                        budget: int = 4096) -> LeanViolation | None:
    """First violating addable pair in canonical scan order, or None.

    Scans vertex pairs t <= t2 in id order and candidate pairs in canonical
    order.  A pair violates when its interval connectivity is below both
    ranks and below every label order on the connecting path.
    """
    rank = universe.rank
    verts = list(tree.vertices)
    cands = {t: family.addable_candidates(tree, t, universe, budget)
             for t in verts}
    graph_like = universe.kind == "graph"
    for i, t in enumerate(verts):
        for t2 in verts[i:]:
            if t == t2:
                pmin = None
            else:
                pv = tree.path_vertices(t, t2)
                pmin = min(universe.order(tree.alpha[(pv[l], pv[l + 1])])
                           for l in range(len(pv) - 1))
                if pmin == 0:
                    continue
            for ai, a in enumerate(cands[t]):
                ra = rank(a[0])
                if ra == 0:
                    continue
                second = cands[t2][ai:] if t == t2 else cands[t2]
                for a2 in second:
                    ra2 = rank(a2[0])
                    if ra2 == 0:
                        continue
                    hi = invert(a2)
                    if not leq(a, hi):
                        continue
                    bound = min(ra, ra2) if pmin is None else min(ra, ra2, pmin)
                    if graph_like and (a[0] & a2[0]).bit_count() >= bound:
                        continue
                    lam, wit = lambda_interval(universe, a, hi)
                    if lam < bound:
                        return LeanViolation(t, t2, a, a2, lam, wit)
    return None


def choose_shift_separation(universe, lo: Sep, hi: Sep, tree: STree) -> Sep:
    """Among the interval minimizers, pick one nested with the most tree
    labels; ties fall to the smallest (left, right) encoding."""
    labels = [tree.alpha[e] for e in tree.edges]
    best = None
    best_count = -1
    for s in interval_minimizers(universe, lo, hi):
        c = 0
        for lab in labels:
            if is_nested(s, lab):
                c += 1
        if c > best_count:
            best, best_count = s, c
    return best


# ---------------------------------------------------------------------------
# glueing

def glue(t1: STree, e1: tuple[int, int], t2: STree,
         f2: tuple[int, int]):
    """Identify edge e1 of t1 with edge f2 of t2.

    Both edges must carry the same label; e1's tail must be a leaf of t1
    and f2's head a leaf of t2.  Those two leaves disappear and a single
    edge labelled like e1 joins tail(f2)'s copy to head(e1)'s copy.
    Returns (tree, map1, map2) with the vertex relabellings of the two
    parts into fresh contiguous ids.
    """
    label = t1.alpha.get(e1)
    if label is None or t2.alpha.get(f2) != label:
        raise ValueError("glue edges must exist and carry equal labels")
    drop1, keep1_anchor = e1
    anchor2, drop2 = f2
    if len(t1.adj[drop1]) != 1:
        raise ValueError("tail of e1 must be a leaf of t1")
    if len(t2.adj[drop2]) != 1:
        raise ValueError("head of f2 must be a leaf of t2")
    v1 = [v for v in t1.vertices if v != drop1]
    v2 = [v for v in t2.vertices if v != drop2]
    map1 = {v: i for i, v in enumerate(v1)}
    map2 = {v: len(v1) + i for i, v in enumerate(v2)}
    alpha = {}
    edges = []
    for u, v in t1.edges:
        if drop1 in (u, v):
            continue
        edges.append((map1[u], map1[v]))
        alpha[(map1[u], map1[v])] = t1.alpha[(u, v)]
        alpha[(map1[v], map1[u])] = t1.alpha[(v, u)]
    for u, v in t2.edges:
        if drop2 in (u, v):
            continue
        edges.append((map2[u], map2[v]))
        alpha[(map2[u], map2[v])] = t2.alpha[(u, v)]
        alpha[(map2[v], map2[u])] = t2.alpha[(v, u)]
    ge = (map2[anchor2], map1[keep1_anchor])
    edges.append(ge)
    alpha[ge] = label
    alpha[(ge[1], ge[0])] = invert(label)
    glued = STree(list(map1.values()) + list(map2.values()), edges, alpha,
                  check=False)
    return glued, map1, map2


# ---------------------------------------------------------------------------
# the two surgeries, with their runtime claims

def _assert_edge_claims(tree, universe, t1, t2, ell):
    """Shifted copies never gain order; above ell at most one copy keeps it."""
    e1 = set(t1.edges)
    e2 = set(t2.edges)
    for w in tree.edges:
        o = universe.order(tree.alpha[w])
        o1 = universe.order(t1.alpha[w]) if w in e1 else None
        o2 = universe.order(t2.alpha[w]) if w in e2 else None
        for oc in (o1, o2):
            if oc is not None and oc > o:
                raise RefinementInvariantError(
                    f"shift increased order of edge {w}: {o} -> {oc}")
        if o > ell:
            if o1 == o and o2 is not None and o2 > ell:
                raise RefinementInvariantError(
                    f"both copies of edge {w} kept high order")
            if o2 == o and o1 is not None and o1 > ell:
                raise RefinementInvariantError(
                    f"both copies of edge {w} kept high order")


def _assert_vertex_claims(tree, universe, t1, t2, v: LeanViolation):
    """Star sizes never grow; strict drops at the two repaired vertices;
    above ell at most one copy keeps its size."""
    rank = universe.rank
    sizes = {s: star_size(tree.star(s), rank) for s in tree.vertices}
    for s in tree.vertices:
        s1 = star_size(t1.star(s), rank)
        s2 = star_size(t2.star(s), rank)
        if s1 > sizes[s] or s2 > sizes[s]:
            raise RefinementInvariantError(
                f"shift increased star size at vertex {s}")
        if sizes[s] > v.ell:
            if s1 == sizes[s] and s2 > v.ell:
                raise RefinementInvariantError(
                    f"both copies of vertex {s} kept high star size")
            if s2 == sizes[s] and s1 > v.ell:
                raise RefinementInvariantError(
                    f"both copies of vertex {s} kept high star size")
    if star_size(t1.star(v.t), rank) >= sizes[v.t]:
        raise RefinementInvariantError("repaired star at t did not shrink")
    if star_size(t2.star(v.t2), rank) >= sizes[v.t2]:
        raise RefinementInvariantError("repaired star at t2 did not shrink")


def _linked_step(tree: STree, universe, v: LinkedViolation):
    lo = tree.alpha[v.e]
    hi = tree.alpha[v.f]
    xy = choose_shift_separation(universe, lo, hi, tree)
    t1 = shift(tree, universe, v.e, xy)
    t2 = shift(tree, universe, (v.f[1], v.f[0]), invert(xy))
    _assert_edge_claims(tree, universe, t1, t2, v.ell)
    glued, _, _ = glue(t1, v.e, t2, v.f)
    if max_star_size(glued, universe) > max_star_size(tree, universe):
        raise RefinementInvariantError("star size grew during linked step")
    return glued, xy


def _lean_step(tree: STree, universe, v: LeanViolation):
    xy = choose_shift_separation(universe, v.addA, invert(v.addA2), tree)
    l1 = max(tree.vertices) + 1
    aug1 = tree.with_leaf(v.t, l1, v.addA)
    t1 = shift(aug1, universe, (l1, v.t), xy)
    l2 = max(tree.vertices) + 1
    aug2 = tree.with_leaf(v.t2, l2, v.addA2)
    t2 = shift(aug2, universe, (l2, v.t2), invert(xy))
    _assert_vertex_claims(tree, universe, t1, t2, v)
    # original edges never gain order; the fresh glue edge carries ell itself
    for w in tree.edges:
        o = universe.order(tree.alpha[w])
        if universe.order(t1.alpha[w]) > o or universe.order(t2.alpha[w]) > o:
            raise RefinementInvariantError("edge order grew during lean step")
    glued, _, _ = glue(t1, (l1, v.t), t2, (v.t2, l2))
    return glued, xy


# ---------------------------------------------------------------------------
# the loops

def _seps_json(s: Sep):
    from .instances import _mask_bits
    return {"left": _mask_bits(s[0]), "right": _mask_bits(s[1])}


def _check_start(tree, universe, family):
    rep = validate_stree(tree, universe, family)
    if not rep.passed:
        raise ValueError(f"input tree is not over the family: {rep.witness}")


def _iteration_cap(tree, family, cap):
    if cap is not None:
        return cap
    return 10 * family.order_cap * len(tree.edges) ** 2 + 1000


def refine_to_linked(tree: STree, universe, family: StarFamily, *,
                     trace: list | None = None, cap: int | None = None) -> STree:
    """Repair every linked violation; the result verifies as linked and its
    label orders never exceed the input's."""
    _check_start(tree, universe, family)
    size_cap = max(family.size_cap, max_star_size(tree, universe) + 1)
    prof = potential(tree, universe, "linked", family.order_cap, size_cap)
    for it in range(_iteration_cap(tree, family, cap)):
        v = find_linked_violation(tree, universe)
        if v is None:
            return tree
        glued, xy = _linked_step(tree, universe, v)
        new_prof = potential(glued, universe, "linked", family.order_cap,
                             size_cap)
        if not new_prof.precedes(prof):
            raise RefinementInvariantError("potential did not decrease")
        if trace is not None:
            trace.append({
                "iteration": it, "kind": "linked",
                "violation": {"e": list(v.e), "f": list(v.f), "ell": v.ell},
                "chosen": _seps_json(xy),
                "potential_before": [list(l) for l in prof.levels],
                "potential_after": [list(l) for l in new_prof.levels],
            })
        tree, prof = glued, new_prof
    raise IterationLimitError("linked refinement exceeded its iteration cap")


def refine_to_lean(tree: STree, universe, family: StarFamily, *,
                   trace: list | None = None, cap: int | None = None,
                   budget: int = 4096) -> STree:
    """Repair every lean violation among the canonical addable candidates."""
    _check_start(tree, universe, family)
    size_cap = max(family.size_cap, max_star_size(tree, universe) + 1)
    prof = potential(tree, universe, "lean", family.order_cap, size_cap)
    for it in range(_iteration_cap(tree, family, cap)):
        v = find_lean_violation(tree, universe, family, budget)
        if v is None:
            return tree
        glued, xy = _lean_step(tree, universe, v)
        new_prof = potential(glued, universe, "lean", family.order_cap,
                             size_cap)
        if not new_prof.precedes(prof):
            raise RefinementInvariantError("potential did not decrease")
        if trace is not None:
            trace.append({
                "iteration": it, "kind": "lean",
                "violation": {"t": v.t, "t2": v.t2, "ell": v.ell,
                              "A": _seps_json(v.addA),
                              "A2": _seps_json(v.addA2)},
                "chosen": _seps_json(xy),
                "potential_before": [list(l) for l in prof.levels],
                "potential_after": [list(l) for l in new_prof.levels],
            })
        tree, prof = glued, new_prof
    raise IterationLimitError("lean refinement exceeded its iteration cap")


def refine_combined(tree: STree, universe, family: StarFamily, *,
                    trace: list | None = None, cap: int | None = None,
                    budget: int = 4096) -> STree:
    """Alternate between the two violation kinds under the four-tier profile.

    The combined order's strict decrease is asserted rather than assumed;
    a failure surfaces as RefinementInvariantError.
    """
    _check_start(tree, universe, family)
    size_cap = max(family.size_cap, max_star_size(tree, universe) + 1)
    prof = potential(tree, universe, "combined", family.order_cap, size_cap)
    for it in range(_iteration_cap(tree, family, cap)):
        if it % 2 == 0:
            v = find_linked_violation(tree, universe) \
                or find_lean_violation(tree, universe, family, budget)
        else:
            v = find_lean_violation(tree, universe, family, budget) \
                or find_linked_violation(tree, universe)
        if v is None:
            return tree
        if isinstance(v, LinkedViolation):
            glued, xy = _linked_step(tree, universe, v)
            vjson = {"e": list(v.e), "f": list(v.f), "ell": v.ell}
            kind = "linked"
        else:
            glued, xy = _lean_step(tree, universe, v)
            vjson = {"t": v.t, "t2": v.t2, "ell": v.ell}
            kind = "lean"
        new_prof = potential(glued, universe, "combined", family.order_cap,
                             size_cap)
        if not new_prof.precedes(prof):
            raise RefinementInvariantError(
                "combined potential did not decrease")
        if trace is not None:
            trace.append({
                "iteration": it, "kind": kind, "violation": vjson,
                "chosen": _seps_json(xy),
                "potential_before": [list(l) for l in prof.levels],
                "potential_after": [list(l) for l in new_prof.levels],
            })
        tree, prof = glued, new_prof
    raise IterationLimitError("combined refinement exceeded its iteration cap")
