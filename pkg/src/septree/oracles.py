"""Independent ground truth: vertex-disjoint path counts via max-flow,
exact widths by exhaustive search, and verifiers that check the linked and
lean definitions verbatim.

All routines here are deliberately simple and exhaustive; they are the
reference the refinement engines are tested against, and never share code
with them beyond the basic separation algebra.
"""

from __future__ import annotations

from collections import deque

from .separations import (
    Report,
    Sep,
    invert,
    leq,
    lambda_interval,
    order,
    star_size,
    subsets_of,
)
from .instances import (
    DecompTree,
    Graph,
    GraphTreeDecomposition,
    GraphUniverse,
    Matroid,
    MatroidTreeDecomposition,
    _mask_bits,
)

INF = 1 << 30


# ---------------------------------------------------------------------------
# vertex-disjoint paths

def menger(g: Graph, s_mask: int, t_mask: int,
           allowed: int | None = None) -> tuple[int, int]:
    """Maximum number of vertex-disjoint S-T paths and a minimum vertex cut.

    Paths are disjoint including endpoints; a vertex in both S and T counts
    as a trivial path.  Uses unit vertex capacities via the usual
    in/out-splitting, so the returned cut is a vertex mask whose size equals
    the path count.  ``allowed`` restricts everything to an induced
    subgraph.  Both sides must be non-empty.
    """
    if allowed is None:
        allowed = g.full
    s_mask &= allowed
    t_mask &= allowed
    if s_mask == 0 or t_mask == 0:
        raise ValueError("both endpoint sets must be non-empty")
    n = g.n
    # nodes: 2v = v_in, 2v+1 = v_out, 2n = source, 2n+1 = sink
    size = 2 * n + 2
    cap = [dict() for _ in range(size)]

    def add(u, v, c):
        cap[u][v] = cap[u].get(v, 0) + c
        cap[v].setdefault(u, 0)

    for v in range(n):
        if not allowed >> v & 1:
            continue
        add(2 * v, 2 * v + 1, 1)
        if s_mask >> v & 1:
            add(2 * n, 2 * v, INF)
        if t_mask >> v & 1:
            add(2 * v + 1, 2 * n + 1, INF)
    for u, v in g.edges:
        if allowed >> u & 1 and allowed >> v & 1:
            add(2 * u + 1, 2 * v, INF)
            add(2 * v + 1, 2 * u, INF)

    src, snk = 2 * n, 2 * n + 1
    flow = 0
    while True:
        parent = {src: None}
        q = deque([src])
        while q and snk not in parent:
            x = q.popleft()
            for y, c in cap[x].items():
                if c > 0 and y not in parent:
                    parent[y] = x
                    q.append(y)
        if snk not in parent:
            break
        y = snk
        while parent[y] is not None:
            x = parent[y]
            cap[x][y] -= 1
            cap[y][x] += 1
            y = x
        flow += 1
    # residual reachability gives the min cut on the splitting arcs
    reach = {src}
    q = deque([src])
    while q:
        x = q.popleft()
        for y, c in cap[x].items():
            if c > 0 and y not in reach:
                reach.add(y)
                q.append(y)
    cut = 0
    for v in range(n):
        if 2 * v in reach and 2 * v + 1 not in reach:
            cut |= 1 << v
    return flow, cut


def lambda_flow(g: Graph, lo: Sep, hi: Sep) -> int:
    """Interval connectivity via max-flow.

    Equals the exhaustive interval minimum: the minimum order of a
    separation between lo and hi is the maximum number of vertex-disjoint
    paths from lo's separator to hi's separator inside lo.right & hi.left.
    """
    if not leq(lo, hi):
        raise ValueError("interval is empty")
    s = lo[0] & lo[1]
    t = hi[0] & hi[1]
    if s == 0 or t == 0:
        return 0
    flow, _ = menger(g, s, t, allowed=lo[1] & hi[0])
    return flow


# ---------------------------------------------------------------------------
# exact widths by dynamic programming / enumeration

def _component_through(g: Graph, v: int, inside: int) -> int:
    """Vertices reachable from v using intermediate vertices in ``inside``."""
    comp = 1 << v
    grow = comp
    while grow:
        nxt = g.neighbors_mask(grow) & inside & ~comp
        comp |= nxt
        grow = nxt
    return comp


def treewidth_order(g: Graph) -> tuple[int, list[int]]:
    """Exact treewidth and an optimal elimination order (subset DP)."""
    n = g.n
    if n > 8:
        raise ValueError("treewidth oracle capped at 8 vertices")
    if n == 0:
        return -1, []
    full = g.full

    def back_degree(s_prev: int, v: int) -> int:
        comp = _component_through(g, v, s_prev)
        return (g.neighbors_mask(comp) & ~s_prev & ~(1 << v)).bit_count()

    f = {0: -1}
    best_v = {}
    for s in range(1, full + 1):
        best = None
        bv = None
        m = s
        while m:
            b = m & -m
            m ^= b
            v = b.bit_length() - 1
            val = max(f[s ^ b], back_degree(s ^ b, v))
            if best is None or val < best:
                best, bv = val, v
        f[s] = best
        best_v[s] = bv
    order_rev = []
    s = full
    while s:
        v = best_v[s]
        order_rev.append(v)
        s ^= 1 << v
    return f[full], order_rev[::-1]


def brute_force_treewidth(g: Graph) -> int:
    return treewidth_order(g)[0]


def decomposition_from_order(g: Graph, elim: list[int]) -> GraphTreeDecomposition:
    """Standard clique-at-elimination construction from an order."""
    n = g.n
    pos = {v: i for i, v in enumerate(elim)}
    bags = []
    for i, v in enumerate(elim):
        before = 0
        for u in elim[:i]:
            before |= 1 << u
        comp = _component_through(g, v, before)
        later = g.neighbors_mask(comp) & ~before & ~(1 << v)
        bags.append((1 << v) | later)
    edges = []
    roots = []
    for i, v in enumerate(elim):
        later = bags[i] & ~(1 << v)
        if later:
            nxt = min(_mask_bits(later), key=lambda u: pos[u])
            edges.append((i, pos[nxt]))
        else:
            roots.append(i)
    # join remaining components arbitrarily so the result is one tree
    for a, b in zip(roots, roots[1:]):
        edges.append((a, b))
    return GraphTreeDecomposition(DecompTree(n, edges), bags)


def pathwidth_order(g: Graph) -> tuple[int, list[int]]:
    """Exact pathwidth and an optimal vertex layout (boundary DP)."""
    n = g.n
    if n > 8:
        raise ValueError("pathwidth oracle capped at 8 vertices")
    if n == 0:
        return -1, []
    full = g.full

    def boundary(s: int) -> int:
        cnt = 0
        m = s
        while m:
            b = m & -m
            m ^= b
            if g.nbr[b.bit_length() - 1] & ~s:
                cnt += 1
        return cnt

    f = {0: -1}
    best_v = {}
    for s in range(1, full + 1):
        bs = boundary(s)
        best = None
        bv = None
        m = s
        while m:
            b = m & -m
            m ^= b
            v = b.bit_length() - 1
            val = max(f[s ^ b], bs)
            if best is None or val < best:
                best, bv = val, v
        f[s] = best
        best_v[s] = bv
    layout_rev = []
    s = full
    while s:
        v = best_v[s]
        layout_rev.append(v)
        s ^= 1 << v
    return f[full], layout_rev[::-1]


def brute_force_pathwidth(g: Graph) -> int:
    return pathwidth_order(g)[0]


def path_decomposition_from_layout(g: Graph, layout: list[int]) -> GraphTreeDecomposition:
    """Bag i holds vertex i of the layout plus earlier vertices that still
    have neighbors at position i or later."""
    n = len(layout)
    placed = 0
    bags = []
    for i, v in enumerate(layout):
        rest = g.full & ~placed
        bag = 1 << v
        m = placed
        while m:
            b = m & -m
            m ^= b
            if g.nbr[b.bit_length() - 1] & rest:
                bag |= b
        bags.append(bag)
        placed |= 1 << v
    edges = [(i, i + 1) for i in range(n - 1)]
    return GraphTreeDecomposition(DecompTree(n, edges), bags)


def branchwidth_tree(g: Graph):
    """Exact branchwidth with an optimal branch tree.

    Enumerates every cubic tree whose leaves are the graph's edges.  The
    width of a tree is the largest number of vertices seen on both sides of
    a tree edge.  Returns (width, tree_edges, leaf_of_element) where tree
    vertices 0..m-1 are the leaves for elements 0..m-1.  Graphs with fewer
    than two edges have width 0 and a degenerate tree.
    """
    m = len(g.edges)
    if m > 7:
        raise ValueError("branchwidth oracle capped at 7 edges")
    elem_mask = [(1 << u) | (1 << v) for u, v in g.edges]
    if m == 0:
        return 0, [], []
    if m == 1:
        return 0, [], [0]

    best = [None, None]

    def width_of(edges):
        adj = {}
        for a, b in edges:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        w = 0
        for a, b in edges:
            side = 0
            seen = {a, b}
            stack = [b]
            while stack:
                x = stack.pop()
                if x < m:
                    side |= elem_mask[x]
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            rest = 0
            seenb = {b, a}
            stack = [a]
            while stack:
                x = stack.pop()
                if x < m:
                    rest |= elem_mask[x]
                for y in adj[x]:
                    if y not in seenb:
                        seenb.add(y)
                        stack.append(y)
            w = max(w, (side & rest).bit_count())
        return w

    def extend(edges, next_leaf, next_internal):
        if next_leaf == m:
            w = width_of(edges)
            if best[0] is None or w < best[0]:
                best[0] = w
                best[1] = list(edges)
            return
        for i in range(len(edges)):
            a, b = edges[i]
            c = next_internal
            rest = edges[:i] + edges[i + 1:]
            extend(rest + [(a, c), (c, b), (c, next_leaf)],
                   next_leaf + 1, next_internal + 1)

    extend([(0, 1)], 2, m)
    return best[0], best[1], list(range(m))


def brute_force_branchwidth(g: Graph) -> int:
    return branchwidth_tree(g)[0]


def branch_stree(g: Graph, k: int | None = None):
    """S-tree over the 3-label branch star family from an optimal branch tree.

    Every tree edge displays an edge bipartition (X, complement); its label
    is the pair of vertex sets touched by the two sides.  Requires a graph
    without isolated vertices and with at least two edges.
    """
    from .strees import STree

    m = len(g.edges)
    if m < 2:
        raise ValueError("need at least two edges for a branch tree")
    covered = 0
    for u, v in g.edges:
        covered |= (1 << u) | (1 << v)
    if covered != g.full:
        raise ValueError("isolated vertices have no place in a branch tree")
    bw, tedges, _ = branchwidth_tree(g)
    elem_mask = [(1 << u) | (1 << v) for u, v in g.edges]
    verts = sorted({x for e in tedges for x in e})
    adj = {v: [] for v in verts}
    for a, b in tedges:
        adj[a].append(b)
        adj[b].append(a)
    alpha = {}
    for a, b in tedges:
        side = {a, b}
        stack = [b]
        right = 0
        while stack:
            x = stack.pop()
            if x < m:
                right |= elem_mask[x]
            for y in adj[x]:
                if y not in side:
                    side.add(y)
                    stack.append(y)
        left = 0
        side2 = {a, b}
        stack = [a]
        while stack:
            x = stack.pop()
            if x < m:
                left |= elem_mask[x]
            for y in adj[x]:
                if y not in side2:
                    side2.add(y)
                    stack.append(y)
        alpha[(a, b)] = (left, right)
        alpha[(b, a)] = (right, left)
    tree = STree(verts, tedges, alpha, check=False)
    return tree, bw


def matroid_treewidth_decomposition(m: Matroid) -> tuple[int, MatroidTreeDecomposition]:
    """Exact matroid treewidth with an optimal decomposition, via subset
    feasibility.

    A side X can hang below an edge displaying (E \\ X, X) at width k iff
    its connectivity is below k and X splits into disjoint feasible
    children C with r(X) + sum (r(E \\ C) - r(E)) below k.  The whole
    matroid has width below k iff r(E) + g(E) < k for the same child
    optimization g.  The recorded child choices reassemble a witness tree.
    """
    if m.size > 10:
        raise ValueError("matroid treewidth oracle capped at 10 elements")
    r = m.rank
    full = m.full
    r_full = r(full)
    lam = {x: r(x) + r(full ^ x) - r_full for x in range(full + 1)}
    for k in range(1, r_full + 2):
        feas = {}
        g = {}
        pick: dict[int, int | None] = {}
        for x in range(full + 1):
            # best total child discount inside x, children proper and feasible
            best = 0
            best_c = None
            c = (x - 1) & x
            while True:
                if c and feas.get(c):
                    val = (r(full ^ c) - r_full) + g[x ^ c]
                    if val < best:
                        best, best_c = val, c
                if c == 0:
                    break
                c = (c - 1) & x
            g[x] = best
            pick[x] = best_c
            feas[x] = lam[x] < k and r(x) + best < k
        if r_full + g[full] < k:
            return k - 1, _matroid_tree_from_picks(m, pick)
    # free-ish matroid: the single bag is optimal
    return r_full, MatroidTreeDecomposition(DecompTree(1, []), [0] * m.size)


def _matroid_tree_from_picks(m: Matroid, pick) -> MatroidTreeDecomposition:
    def children_of(x: int) -> list[int]:
        out = []
        while pick[x] is not None:
            c = pick[x]
            out.append(c)
            x ^= c
        return out

    tau = [None] * m.size
    edges = []
    counter = [0]

    def build(x: int, parent: int | None) -> None:
        v = counter[0]
        counter[0] += 1
        if parent is not None:
            edges.append((parent, v))
        kids = children_of(x)
        own = x
        for c in kids:
            own ^= c
        for e in _mask_bits(own):
            tau[e] = v
        for c in kids:
            build(c, v)

    build(m.full, None)
    return MatroidTreeDecomposition(DecompTree(counter[0], edges), tau)


def brute_force_matroid_treewidth(m: Matroid) -> int:
    return matroid_treewidth_decomposition(m)[0]


# ---------------------------------------------------------------------------
# decomposition verifiers

def verify_linked_td(g: Graph, d: GraphTreeDecomposition) -> Report:
    """Every pair of bags is joined by as many disjoint paths as the
    smallest adhesion between them allows.

    For k above the smaller bag the condition is vacuous (the first path
    edge's adhesion is below k already), so k runs up to the adhesion cap
    and the bag sizes; for a single bag the trivial paths inside it decide.
    """
    rep = d.validate(g)
    if not rep.passed:
        return rep
    maxadh = d.adhesion
    checked = 0
    flows: dict[tuple[int, int], int] = {}
    b = d.tree.num_vertices
    for t in range(b):
        for t2 in range(t, b):
            path = d.tree.path_vertices(t, t2)
            if t == t2:
                min_adh = INF
            else:
                min_adh = min((d.bags[path[i]] & d.bags[path[i + 1]]).bit_count()
                              for i in range(len(path) - 1))
            kcap = min(maxadh, d.bags[t].bit_count(), d.bags[t2].bit_count())
            for k in range(1, kcap + 1):
                if min_adh < k:
                    continue
                key = (d.bags[t], d.bags[t2])
                fl = flows.get(key)
                if fl is None:
                    fl = menger(g, d.bags[t], d.bags[t2])[0]
                    flows[key] = fl
                checked += 1
                if fl < k:
                    return Report("linked-decomposition", False,
                                  {"t": t, "t2": t2, "k": k, "paths": fl},
                                  {"checked": checked})
    return Report("linked-decomposition", True, None, {"checked": checked})


def _lean_pair_ok(g: Graph, d: GraphTreeDecomposition, flows, t, t2,
                  min_adh, theta=None):
    """All equal-size subset pairs of the two bags are joined or cut off."""
    b1 = d.bags[t]
    b2 = d.bags[t2]
    kmax = min(b1.bit_count(), b2.bit_count(), min_adh)
    if theta is not None:
        kmax = min(kmax, theta - 1)
    for z1 in subsets_of(b1):
        k = z1.bit_count()
        if k == 0 or k > kmax:
            continue
        for z2 in subsets_of(b2):
            if z2.bit_count() != k:
                continue
            if t == t2 and z2 < z1:
                continue
            key = (z1, z2) if z1 <= z2 else (z2, z1)
            fl = flows.get(key)
            if fl is None:
                fl = menger(g, z1, z2)[0]
                flows[key] = fl
            if fl < k:
                return {"t": t, "t2": t2, "k": k,
                        "Z1": _mask_bits(z1), "Z2": _mask_bits(z2),
                        "paths": fl}
    return None


def verify_lean_td(g: Graph, d: GraphTreeDecomposition,
                   budget: int = 1 << 22) -> Report:
    """Exhaustive check of bag-level leanness.

    For every pair of bags and every pair of equal-size vertex subsets,
    either that many disjoint paths join them or an edge between the bags
    has a smaller adhesion.  The pair with both subsets in one bag is the
    strong case.
    """
    return _verify_lean_td(g, d, None, budget)


def verify_theta_lean(g: Graph, d: GraphTreeDecomposition, theta: int,
                      budget: int = 1 << 22) -> Report:
    """Leanness restricted to subset sizes below theta."""
    return _verify_lean_td(g, d, theta, budget)


def _verify_lean_td(g, d, theta, budget) -> Report:
    rep = d.validate(g)
    if not rep.passed:
        return rep
    cost = sum(1 << bag.bit_count() for bag in d.bags)
    if cost * cost > budget:
        raise BudgetError(f"subset enumeration cost {cost}^2 exceeds {budget}")
    name = "lean-decomposition" if theta is None else f"{theta}-lean-decomposition"
    flows: dict[tuple[int, int], int] = {}
    b = d.tree.num_vertices
    checked = 0
    for t in range(b):
        for t2 in range(t, b):
            path = d.tree.path_vertices(t, t2)
            if t == t2:
                min_adh = INF
            else:
                min_adh = min((d.bags[path[i]] & d.bags[path[i + 1]]).bit_count()
                              for i in range(len(path) - 1))
            checked += 1
            witness = _lean_pair_ok(g, d, flows, t, t2, min_adh, theta)
            if witness is not None:
                return Report(name, False, witness, {"pairs": checked})
    return Report(name, True, None,
                  {"pairs": checked, "flows": len(flows)})


class BudgetError(RuntimeError):
    pass


def matroid_lambda_between(m: Matroid, z1: int, z2: int) -> int:
    """min lambda(X) over Z1 <= X <= E - Z2 (connectivity between element sets)."""
    r = m.rank
    r_full = r(m.full)
    free = m.full & ~z1 & ~z2
    best = None
    for extra in subsets_of(free):
        x = z1 | extra
        v = r(x) + r(m.full ^ x) - r_full
        if best is None or v < best:
            best = v
    return best


def verify_matroid_lean(m: Matroid, d: MatroidTreeDecomposition) -> Report:
    """Exhaustive check of matroid leanness.

    For disjoint element sets of equal rank k inside two bags, either the
    connectivity between them is at least k or an edge between the bags
    displays a separation of order below k.
    """
    if m.size > 7:
        raise ValueError("matroid leanness verifier capped at 7 elements")
    r = m.rank
    r_full = r(m.full)
    b = d.tree.num_vertices
    checked = 0
    for t in range(b):
        for t2 in range(t, b):
            path = d.tree.path_vertices(t, t2)
            if t == t2:
                min_disp = INF
            else:
                min_disp = INF
                for i in range(len(path) - 1):
                    side = d.side_elements(path[i], path[i + 1])
                    min_disp = min(min_disp,
                                   r(side) + r(m.full ^ side) - r_full)
            b1 = d.bag_mask(t)
            b2 = d.bag_mask(t2)
            for z1 in subsets_of(b1):
                k = r(z1)
                if k == 0 or k > min_disp:
                    continue
                for z2 in subsets_of(b2):
                    if z2 & z1 or r(z2) != k:
                        continue
                    checked += 1
                    if matroid_lambda_between(m, z1, z2) < k:
                        return Report(
                            "matroid-lean-decomposition", False,
                            {"t": t, "t2": t2, "k": k,
                             "Z1": _mask_bits(z1), "Z2": _mask_bits(z2)},
                            {"checked": checked})
    return Report("matroid-lean-decomposition", True, None,
                  {"checked": checked})


# ---------------------------------------------------------------------------
# S-tree verifiers (definition checked verbatim against lambda_interval)

def verify_linked_stree(tree, universe) -> Report:
    """Along every directed edge pair e <= f, the smallest label order on
    the path equals the interval connectivity of the two labels."""
    edges = tree.edges
    checked = 0
    for i in range(len(edges)):
        for j in range(i + 1, len(edges)):
            e, f, path = tree.directed_pair(edges[i], edges[j])
            pmin = min(universe.order(tree.alpha[g]) for g in path)
            lam, _ = lambda_interval(universe, tree.alpha[e], tree.alpha[f])
            checked += 1
            if pmin != lam:
                return Report("linked-stree", False,
                              {"e": list(e), "f": list(f),
                               "path_min": pmin, "lambda": lam},
                              {"checked": checked})
    return Report("linked-stree", True, None, {"checked": checked})


def verify_lean_stree(tree, universe, family, budget: int = 4096,
                      exhaustive: bool = False) -> Report:
    """For every pair of addable separations at two (possibly equal)
    vertices, either the interval connectivity reaches the smaller rank or
    some path label attains it.

    ``exhaustive`` widens the candidates from the canonical shapes to every
    separation addable in the family sense (small ground sets only).
    """
    if exhaustive and universe.size > 5:
        raise ValueError("exhaustive leanness check capped at 5 elements")
    rank = universe.rank
    verts = list(tree.vertices)
    if exhaustive:
        allseps = list(universe.all_separations())
        cand = {}
        for t in verts:
            base = list(tree.star(t))
            cand[t] = [s for s in allseps
                       if family.contains(base + [s], universe)]
    else:
        cand = {t: family.addable_candidates(tree, t, universe, budget)
                for t in verts}
    checked = 0
    for i, t in enumerate(verts):
        for t2 in verts[i:]:
            if t == t2:
                pmin = INF
            else:
                pv = tree.path_vertices(t, t2)
                pmin = min(universe.order(tree.alpha[(pv[l], pv[l + 1])])
                           for l in range(len(pv) - 1))
            for a in cand[t]:
                ra = rank(a[0])
                for a2 in cand[t2]:
                    hi = invert(a2)
                    if not leq(a, hi):
                        continue
                    bound = min(ra, rank(a2[0]))
                    if bound == 0:
                        continue
                    checked += 1
                    lam, _ = lambda_interval(universe, a, hi)
                    if lam < bound and pmin > lam:
                        return Report(
                            "lean-stree", False,
                            {"t": t, "t2": t2,
                             "A": _mask_bits(a[0]), "A2": _mask_bits(a2[0]),
                             "lambda": lam, "bound": bound,
                             "path_min": None if pmin == INF else pmin},
                            {"checked": checked})
    return Report("lean-stree", True, None, {"checked": checked})
