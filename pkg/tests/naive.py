"""Independent brute-force oracles for the tests.

Everything here recomputes results from the definitions using plain Python
sets and itertools, sharing nothing with the library's bitmask paths.
"""

import itertools


def mask_of(vs):
    m = 0
    for v in vs:
        m |= 1 << v
    return m


def set_of(mask):
    out = set()
    i = 0
    while mask:
        if mask & 1:
            out.add(i)
        mask >>= 1
        i += 1
    return out


def graph_separations(n, edges):
    """All oriented separations (A, B) of the graph, as frozenset pairs."""
    verts = list(range(n))
    out = []
    for abits in itertools.product([0, 1], repeat=n):
        for bbits in itertools.product([0, 1], repeat=n):
            a = frozenset(v for v in verts if abits[v])
            b = frozenset(v for v in verts if bbits[v])
            if a | b != set(verts):
                continue
            if any((u in a - b and v in b - a) or (v in a - b and u in b - a)
                   for u, v in edges):
                continue
            out.append((a, b))
    return out


def sep_leq(s1, s2):
    return s1[0] <= s2[0] and s1[1] >= s2[1]


def interval_min_order(n, edges, lo, hi):
    """Minimum |A & B| over separations between lo and hi (set pairs)."""
    best = None
    for s in graph_separations(n, edges):
        if sep_leq(lo, s) and sep_leq(s, hi):
            v = len(s[0] & s[1])
            if best is None or v < best:
                best = v
    return best


def treewidth_by_elimination(n, edges):
    """Minimum over all elimination orders of the largest clique formed."""
    best = n
    for perm in itertools.permutations(range(n)):
        adj = {v: set() for v in range(n)}
        for u, v in edges:
            adj[u].add(v)
            adj[v].add(u)
        w = 0
        for v in perm:
            nb = adj.pop(v)
            w = max(w, len(nb))
            for x in nb:
                adj[x] |= nb - {x}
                adj[x].discard(v)
        best = min(best, w)
    return best


def is_star_naive(seps):
    """(A, B) <= (D, C) for every ordered pair of distinct positions."""
    for i, (a, b) in enumerate(seps):
        for j, (c, d) in enumerate(seps):
            if i != j and not (a <= d and b >= c):
                return False
    return True
