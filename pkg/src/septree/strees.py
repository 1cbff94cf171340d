"""Trees labelled by oriented separations, star families, and shifting.

An S-tree is a finite tree together with a map alpha from oriented tree
edges to separations such that reversing the edge inverts the label.  It
is *tame* when every vertex's multiset of incoming labels is a star.  The
label multiset at t is over the edges pointing INTO t.

The central surgery is the *shift*: given an edge orientation e = (x, y)
and a separation target >= alpha(e), relabel the subtree hanging off e by
joining every away-oriented label with the target.  When the target
attains the interval minimum above alpha(e) ("linked to" it), shifting
never increases any label's order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .separations import (
    Report,
    Sep,
    invert,
    is_star,
    join,
    lambda_interval,
    leq,
    order,
    star_interior,
    star_key,
    star_size,
    subsets_of,
)


class BudgetExceededError(RuntimeError):
    """An enumeration would exceed its configured budget."""


class STree:
    """Finite tree with an involution-consistent edge labelling.

    ``alpha`` holds both orientations of every edge.  Instances are treated
    as immutable; operations build new trees.
    """

    def __init__(self, vertices, edges, alpha: dict[tuple[int, int], Sep],
                 check: bool = True):
        self.vertices = tuple(sorted(set(vertices)))
        vs = set(self.vertices)
        es = set()
        for u, v in edges:
            if u == v or u not in vs or v not in vs:
                raise ValueError(f"bad edge ({u},{v})")
            es.add((min(u, v), max(u, v)))
        self.edges = tuple(sorted(es))
        if len(self.edges) != len(self.vertices) - 1:
            raise ValueError("not a tree: wrong edge count")
        adj = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self.adj = {v: tuple(sorted(ns)) for v, ns in adj.items()}
        if self.vertices:
            seen = {self.vertices[0]}
            stack = [self.vertices[0]]
            while stack:
                x = stack.pop()
                for y in self.adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            if len(seen) != len(self.vertices):
                raise ValueError("not a tree: disconnected")
        self.alpha = dict(alpha)
        for u, v in self.edges:
            if (u, v) not in self.alpha or (v, u) not in self.alpha:
                raise ValueError(f"missing label for edge ({u},{v})")
        if len(self.alpha) != 2 * len(self.edges):
            raise ValueError("labels present for non-edges")
        if check:
            for u, v in self.edges:
                if self.alpha[(v, u)] != invert(self.alpha[(u, v)]):
                    raise ValueError(
                        f"labels of ({u},{v}) are not inverses of each other")
        self._stars: dict[int, tuple[Sep, ...]] = {}

    def __repr__(self):
        return f"STree(|V|={len(self.vertices)}, |E|={len(self.edges)})"

    def star(self, t: int) -> tuple[Sep, ...]:
        """Canonical multiset of labels on edges oriented into t."""
        s = self._stars.get(t)
        if s is None:
            s = star_key(self.alpha[(x, t)] for x in self.adj[t])
            self._stars[t] = s
        return s

    def side_vertices(self, x: int, y: int) -> frozenset:
        """Vertices of the component of tree - x that contains y."""
        seen = {x, y}
        out = {y}
        stack = [y]
        while stack:
            a = stack.pop()
            for b in self.adj[a]:
                if b not in seen:
                    seen.add(b)
                    out.add(b)
                    stack.append(b)
        return frozenset(out)

    def path_vertices(self, s: int, t: int) -> list[int]:
        if s == t:
            return [s]
        parent = {s: None}
        stack = [s]
        while stack:
            x = stack.pop()
            for y in self.adj[x]:
                if y not in parent:
                    parent[y] = x
                    stack.append(y)
        path = [t]
        while path[-1] != s:
            path.append(parent[path[-1]])
        path.reverse()
        return path

    def directed_pair(self, ei: tuple[int, int], ej: tuple[int, int]):
        """Orient two distinct edges consistently along their joining path.

        Returns (e, f, path) where e is ei oriented towards ej, f is ej
        oriented away from ei, e <= f in the natural order on oriented
        edges, and path lists the oriented edges from e to f inclusive.
        """
        a, b = ei
        c, d = ej
        on_ac = set(self.path_vertices(a, c))
        e = (a, b) if b in on_ac else (b, a)
        on_d_back = set(self.path_vertices(d, e[0]))
        f = (c, d) if c in on_d_back else (d, c)
        pv = self.path_vertices(e[0], f[1])
        path = list(zip(pv, pv[1:]))
        return e, f, path

    def with_leaf(self, t: int, leaf: int, label: Sep) -> "STree":
        """New tree with an extra leaf attached at t; alpha(leaf, t) = label."""
        if leaf in self.adj:
            raise ValueError(f"vertex id {leaf} already in use")
        alpha = dict(self.alpha)
        alpha[(leaf, t)] = label
        alpha[(t, leaf)] = invert(label)
        return STree(self.vertices + (leaf,), self.edges + ((t, leaf),),
                     alpha, check=False)

    def to_dict(self) -> dict:
        from .instances import _mask_bits
        recs = []
        for u, v in sorted(self.alpha):
            a, b = self.alpha[(u, v)]
            recs.append({"tail": u, "head": v,
                         "left": _mask_bits(a), "right": _mask_bits(b)})
        return {"kind": "stree", "vertices": list(self.vertices),
                "edges": recs}

    @classmethod
    def from_dict(cls, d: dict) -> "STree":
        alpha = {}
        edges = set()
        for rec in d["edges"]:
            u, v = int(rec["tail"]), int(rec["head"])
            a = 0
            for x in rec["left"]:
                a |= 1 << int(x)
            b = 0
            for x in rec["right"]:
                b |= 1 << int(x)
            alpha[(u, v)] = (a, b)
            edges.add((min(u, v), max(u, v)))
        return cls(d["vertices"], edges, alpha)


def single_vertex_stree(vertex: int = 0) -> STree:
    return STree((vertex,), (), {})


def max_order(tree: STree, universe) -> int:
    if not tree.edges:
        return 0
    return max(universe.order(tree.alpha[e]) for e in tree.edges)


def max_star_size(tree: STree, universe) -> int:
    return max(star_size(tree.star(t), universe.rank) for t in tree.vertices)


def validate_stree(tree: STree, universe, family=None) -> Report:
    """Involution consistency, tameness, optional family membership, and
    the largest label order (for the S_k question)."""
    problems = []
    for u, v in tree.edges:
        if tree.alpha[(v, u)] != invert(tree.alpha[(u, v)]):
            problems.append({"kind": "involution", "edge": [u, v]})
        for e in ((u, v), (v, u)):
            if not universe.is_separation(tree.alpha[e]):
                problems.append({"kind": "not-a-separation", "edge": list(e)})
    tame = True
    for t in tree.vertices:
        if not is_star(tree.star(t)):
            tame = False
            problems.append({"kind": "not-a-star", "vertex": t})
    counts = {
        "tame": tame,
        "max_order": max_order(tree, universe),
        "max_star_size": max_star_size(tree, universe),
    }
    if family is not None:
        counts["order_cap"] = family.order_cap
        counts["is_sk_tree"] = counts["max_order"] < family.order_cap
        for t in tree.vertices:
            if not family.contains(tree.star(t), universe):
                problems.append({"kind": "star-not-in-family", "vertex": t})
    passed = not problems
    return Report("stree-valid", passed,
                  {"problems": problems} if problems else None, counts)


# ---------------------------------------------------------------------------
# star families

_FAMILY_KINDS = ("fk", "pk", "tk", "ftheta", "matroid-fk")


@dataclass(frozen=True)
class StarFamily:
    """Membership predicate and addable-candidate enumerator.

    kind:
      fk         stars with all label orders and star size below k (graphs)
      pk         fk restricted to multisets of at most 2 labels (paths)
      tk         3-label stars whose left sides cover the graph, or
                 singleton fk stars (branch decompositions)
      ftheta     stars with orders below theta and size below k
      matroid-fk fk over a bipartition universe
    """

    kind: str
    k: int
    theta: int | None = None

    def __post_init__(self):
        if self.kind not in _FAMILY_KINDS:
            raise ValueError(f"unknown family kind {self.kind!r}")
        if self.k < 1:
            raise ValueError("k must be at least 1")
        if self.kind == "ftheta":
            if self.theta is None or not 1 <= self.theta <= self.k:
                raise ValueError("ftheta requires 1 <= theta <= k")
        elif self.theta is not None:
            raise ValueError("theta only applies to ftheta")

    @property
    def order_cap(self) -> int:
        return self.theta if self.kind == "ftheta" else self.k

    @property
    def size_cap(self) -> int:
        return self.k

    def _check_universe(self, universe):
        want = "bipartition" if self.kind == "matroid-fk" else "graph"
        if universe.kind != want:
            raise ValueError(
                f"family {self.kind} needs a {want} universe, got {universe.kind}")

    def contains(self, star, universe) -> bool:
        self._check_universe(universe)
        ss = list(star)
        if not is_star(ss):
            return False
        cap = self.order_cap
        if any(order(s, universe.rank) >= cap for s in ss):
            return False
        if self.kind == "tk":
            if len(ss) == 3:
                g = universe.graph
                if (ss[0][0] | ss[1][0] | ss[2][0]) != universe.full:
                    return False
                for u, v in g.edges:
                    m = (1 << u) | (1 << v)
                    if not any(a & m == m for a, _ in ss):
                        return False
                return True
            if len(ss) == 1:
                return star_size(ss, universe.rank) < self.k
            return False
        if self.kind == "pk" and len(ss) > 2:
            return False
        return star_size(ss, universe.rank) < self.size_cap

    def addable_candidates(self, tree: STree, t: int, universe,
                           budget: int = 4096) -> list[Sep]:
        """Separations that can join the star at t while staying in the family.

        Candidates are the canonical forms (Z, V) for graph families and
        (A, E \\ A) for matroid ones, with Z and A inside the star's
        interior; these are the shapes the leanness arguments use.  The
        3-label branch stars admit nothing.
        """
        self._check_universe(universe)
        star = tree.star(t)
        if self.kind == "tk":
            return []
        if self.kind == "pk" and len(star) > 1:
            return []
        interior = star_interior(star, universe.full)
        if 1 << interior.bit_count() > budget:
            raise BudgetExceededError(
                f"2^{interior.bit_count()} candidates exceed budget {budget}")
        base = list(star)
        out = []
        full = universe.full
        bipart = universe.kind == "bipartition"
        for z in subsets_of(interior):
            cand = (z, full ^ z) if bipart else (z, full)
            if self.contains(base + [cand], universe):
                out.append(cand)
        return out


def family_contains(star, family: StarFamily, universe) -> bool:
    return family.contains(star, universe)


def addable_candidates(tree: STree, t: int, family: StarFamily, universe,
                       budget: int = 4096) -> list[Sep]:
    return family.addable_candidates(tree, t, universe, budget)


# ---------------------------------------------------------------------------
# shifting

def shift(tree: STree, universe, base_edge: tuple[int, int], target: Sep) -> STree:
    """Shift the subtree hanging off ``base_edge`` onto ``target``.

    With base_edge = (x, y), the new tree consists of x and the y-side of
    the edge; every edge keeps its vertex ids.  Labels oriented away from x
    become their join with the target, so the base edge itself is
    relabelled to the target exactly.  Requires alpha(base_edge) <= target.
    """
    x, y = base_edge
    base = tree.alpha.get(base_edge)
    if base is None:
        raise ValueError(f"({x},{y}) is not an oriented edge of the tree")
    if not leq(base, target):
        raise ValueError("target must lie above the base edge's label")
    keep = tree.side_vertices(x, y) | {x}
    # orient every kept edge away from x
    parent = {x: None}
    stack = [x]
    away = []
    while stack:
        p = stack.pop()
        for q in tree.adj[p]:
            if q in keep and q not in parent:
                parent[q] = p
                away.append((p, q))
                stack.append(q)
    alpha = {}
    edges = []
    for p, q in away:
        lab = join(tree.alpha[(p, q)], target)
        alpha[(p, q)] = lab
        alpha[(q, p)] = invert(lab)
        edges.append((p, q))
    return STree(keep, edges, alpha, check=False)


def iter_linked_shifts(universe, tree: STree):
    """All shifts of the tree onto targets linked to one of its labels.

    Yields (base_edge, target, shifted_tree) for every oriented edge and
    every separation above its label that attains the interval minimum.
    Intended for small ground sets.
    """
    seps = list(universe.all_separations())
    for u, v in tree.edges:
        for e in ((u, v), (v, u)):
            base = tree.alpha[e]
            for s in seps:
                if not leq(base, s):
                    continue
                if universe.order(s) != lambda_interval(universe, base, s)[0]:
                    continue
                yield e, s, shift(tree, universe, e, s)


def is_fixed_under_shifting_sample(family, corpus) -> Report:
    """Check the family on every linked shift of every corpus tree.

    ``corpus`` is an iterable of (universe, tree) pairs with every tree
    over the family.  For each shift with respect to an edge (x, y), every
    vertex of the shifted tree other than the tail x must keep its star in
    the family.  Reports the first counterexample.
    """
    counts = {"trees": 0, "shifts": 0, "stars": 0}
    for universe, tree in corpus:
        counts["trees"] += 1
        for e, target, shifted in iter_linked_shifts(universe, tree):
            counts["shifts"] += 1
            for s in shifted.vertices:
                if s == e[0]:
                    continue
                counts["stars"] += 1
                if not family.contains(shifted.star(s), universe):
                    return Report(
                        "fixed-under-shifting", False,
                        {"edge": list(e),
                         "target": [_bits(target[0]), _bits(target[1])],
                         "vertex": s}, counts)
    return Report("fixed-under-shifting", True, None, counts)


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask ^= b
    return out
