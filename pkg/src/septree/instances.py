"""Concrete instances: graphs, matroids, their separation universes, and
tree-decompositions in both the graph and the matroid sense.

Two universes of separations are supported.  For a graph, the oriented
separations are pairs (A, B) of vertex sets with A | B = V and no edge
between A \\ B and B \\ A, ordered by the cardinality rank.  For a matroid
(or any rank oracle), the separations are the ordered bipartitions
(X, E \\ X) of the ground set, ordered by r(X) + r(E \\ X) - r(E).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .separations import (
    CardinalityRank,
    RankOracle,
    Report,
    Sep,
    TableRank,
    invert,
    leq,
    star_interior,
    subsets_of,
)


# ---------------------------------------------------------------------------
# graphs

class Graph:
    """Simple undirected graph on vertices 0..n-1 with bitmask adjacency.

    Loops are dropped and parallel edges merged on construction; vertex
    separations cannot see either.
    """

    def __init__(self, n: int, edges):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        self.n = n
        self.full = (1 << n) - 1
        es = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                continue
            es.add((min(u, v), max(u, v)))
        self.edges = tuple(sorted(es))
        nbr = [0] * n
        for u, v in self.edges:
            nbr[u] |= 1 << v
            nbr[v] |= 1 << u
        self.nbr = tuple(nbr)
        self._nbrmask_memo: dict[int, int] = {}

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"

    def neighbors_mask(self, mask: int) -> int:
        """Union of neighborhoods of the vertices in ``mask``."""
        memo = self._nbrmask_memo
        v = memo.get(mask)
        if v is None:
            v = 0
            m = mask
            nbr = self.nbr
            while m:
                b = m & -m
                v |= nbr[b.bit_length() - 1]
                m ^= b
            memo[mask] = v
        return v

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        seen = 1
        while True:
            nxt = seen | self.neighbors_mask(seen)
            if nxt == seen:
                break
            seen = nxt
        return seen == self.full

    def to_dict(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_dict(cls, d: dict) -> "Graph":
        return cls(int(d["n"]), [tuple(e) for e in d["edges"]])

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        """Parse either a plain edge list ("n m" header, then "u v" lines)
        or the DIMACS-style .col subset ("p edge n m", "e u v")."""
        lines = [ln.strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln and not ln.startswith("c")]
        if not lines:
            raise ValueError("empty graph file")
        if lines[0].startswith("p"):
            parts = lines[0].split()
            if len(parts) < 3 or parts[1] not in ("edge", "edges", "col"):
                raise ValueError(f"bad problem line: {lines[0]!r}")
            n = int(parts[2])
            edges = []
            for ln in lines[1:]:
                parts = ln.split()
                if parts[0] != "e":
                    raise ValueError(f"bad edge line: {ln!r}")
                # .col vertices are 1-based
                edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
            return cls(n, edges)
        header = lines[0].split()
        if len(header) != 2:
            raise ValueError(f"bad header line: {lines[0]!r}")
        n, m = int(header[0]), int(header[1])
        edges = []
        for ln in lines[1:]:
            u, v = ln.split()
            edges.append((int(u), int(v)))
        if len(edges) != m:
            raise ValueError(f"header declares {m} edges, found {len(edges)}")
        return cls(n, edges)


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


# ---------------------------------------------------------------------------
# universes

class GraphUniverse:
    """All oriented vertex separations of a graph, with the cardinality order."""

    kind = "graph"

    def __init__(self, graph: Graph):
        self.graph = graph
        self.size = graph.n
        self.full = graph.full
        self.rank = CardinalityRank(graph.n)
        self._lambda_memo: dict = {}

    def order(self, s: Sep) -> int:
        return (s[0] & s[1]).bit_count()

    def is_separation(self, s: Sep) -> bool:
        a, b = s
        if a | b != self.full or a & ~self.full or b & ~self.full:
            return False
        # no edge may join A \ B to B \ A
        return self.graph.neighbors_mask(b & ~a) & (a & ~b) == 0

    def all_separations(self):
        """Every oriented separation; at most 3^n of them."""
        g = self.graph
        full = self.full
        for a in range(full + 1):
            rest = full ^ a
            required = a & g.neighbors_mask(rest)
            free = a & ~required
            for extra in subsets_of(free):
                yield (a, rest | required | extra)

    def interval_separations(self, lo: Sep, hi: Sep):
        """Separations (X, Y) with lo <= (X, Y) <= hi.

        For each left side X between lo.left and hi.left there is a unique
        inclusion-minimal valid right side; with the non-decreasing rank it
        realizes the minimum order among all (X, *) in the interval, and the
        remaining right sides only repeat or increase orders, so they are
        not enumerated.
        """
        a, b = lo
        d = hi[1]
        g = self.graph
        full = self.full
        for sub in subsets_of(hi[0] & ~a):
            x = a | sub
            rest = full ^ x
            y = d | rest | (x & g.neighbors_mask(rest))
            if y & ~b == 0:
                yield (x, y)


class BipartitionUniverse:
    """Ordered bipartitions (X, E \\ X) of a ground set under a rank oracle."""

    kind = "bipartition"

    def __init__(self, rank: RankOracle):
        self.rank = rank
        self.size = rank.size
        self.full = rank.full
        self._lambda_memo: dict = {}
        self._rank_full = rank(rank.full)

    def order(self, s: Sep) -> int:
        r = self.rank
        return r(s[0]) + r(s[1]) - self._rank_full

    def is_separation(self, s: Sep) -> bool:
        a, b = s
        return a & ~self.full == 0 and b == self.full ^ a

    def all_separations(self):
        full = self.full
        for a in range(full + 1):
            yield (a, full ^ a)

    def interval_separations(self, lo: Sep, hi: Sep):
        a = lo[0]
        full = self.full
        for sub in subsets_of(hi[0] & ~a):
            x = a | sub
            yield (x, full ^ x)


# ---------------------------------------------------------------------------
# matroid rank oracles

class GraphicRank(RankOracle):
    """Rank of an edge subset in the cycle matroid: touched vertices minus
    connected components of the picked subgraph."""

    kind = "graphic-matroid"

    def __init__(self, graph: Graph):
        super().__init__(len(graph.edges))
        self.graph = graph

    def _rank(self, mask: int) -> int:
        edges = self.graph.edges
        parent: dict[int, int] = {}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        touched = 0
        comps = 0
        m = mask
        while m:
            b = m & -m
            m ^= b
            u, v = edges[b.bit_length() - 1]
            for w in (u, v):
                if w not in parent:
                    parent[w] = w
                    touched += 1
                    comps += 1
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                comps -= 1
        return touched - comps


class UniformRank(RankOracle):
    """r(X) = min(|X|, r)."""

    kind = "uniform-matroid"

    def __init__(self, r: int, n: int):
        super().__init__(n)
        self.r = r

    def _rank(self, mask: int) -> int:
        return min(mask.bit_count(), self.r)


class LinearRank(RankOracle):
    """Column-space rank over GF(p) of the columns picked by the mask."""

    kind = "linear-matroid"

    def __init__(self, matrix, prime: int):
        if prime not in (2, 3, 5, 7):
            raise ValueError("only prime fields with p <= 7 are supported")
        if not matrix or any(len(row) != len(matrix[0]) for row in matrix):
            raise ValueError("matrix rows must be non-empty and equal length")
        super().__init__(len(matrix[0]))
        self.prime = prime
        self.matrix = [[x % prime for x in row] for row in matrix]

    def _rank(self, mask: int) -> int:
        p = self.prime
        cols = _mask_bits(mask)
        rows = [[row[c] for c in cols] for row in self.matrix]
        rank = 0
        ncols = len(cols)
        for c in range(ncols):
            piv = None
            for r in range(rank, len(rows)):
                if rows[r][c] % p:
                    piv = r
                    break
            if piv is None:
                continue
            rows[rank], rows[piv] = rows[piv], rows[rank]
            inv = pow(rows[rank][c], -1, p)
            rows[rank] = [(x * inv) % p for x in rows[rank]]
            for r in range(len(rows)):
                if r != rank and rows[r][c]:
                    f = rows[r][c]
                    rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[rank])]
            rank += 1
        return rank


def _mask_bits(mask: int) -> list[int]:
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask ^= b
    return out


class Matroid:
    """A ground set with a rank oracle; separations are bipartitions."""

    def __init__(self, rank: RankOracle):
        self.rank = rank
        self.size = rank.size
        self.full = rank.full

    def __repr__(self):
        return f"Matroid(kind={self.rank.kind}, size={self.size})"

    def universe(self) -> BipartitionUniverse:
        return BipartitionUniverse(self.rank)

    @classmethod
    def graphic(cls, graph: Graph) -> "Matroid":
        return cls(GraphicRank(graph))

    @classmethod
    def uniform(cls, r: int, n: int) -> "Matroid":
        return cls(UniformRank(r, n))

    @classmethod
    def linear(cls, matrix, prime: int) -> "Matroid":
        return cls(LinearRank(matrix, prime))

    def to_dict(self) -> dict:
        r = self.rank
        if isinstance(r, GraphicRank):
            return {"kind": "graphic", "graph": r.graph.to_dict()}
        if isinstance(r, UniformRank):
            return {"kind": "uniform", "r": r.r, "n": r.size}
        if isinstance(r, LinearRank):
            return {"kind": "linear", "matrix": r.matrix, "prime": r.prime}
        if isinstance(r, TableRank):
            return {"kind": "table", "values": r.values}
        raise ValueError(f"cannot serialize rank oracle {r.kind}")

    @classmethod
    def from_dict(cls, d: dict) -> "Matroid":
        kind = d["kind"]
        if kind == "graphic":
            return cls.graphic(Graph.from_dict(d["graph"]))
        if kind == "uniform":
            return cls.uniform(int(d["r"]), int(d["n"]))
        if kind == "linear":
            return cls.linear(d["matrix"], int(d["prime"]))
        if kind == "table":
            return cls(TableRank(d["values"]))
        raise ValueError(f"unknown matroid kind {kind!r}")

    @classmethod
    def from_json(cls, text: str) -> "Matroid":
        return cls.from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# graph tree-decompositions

def _tree_components(vertices, edges, removed_vertex):
    """Connected components of the tree minus one vertex, as frozensets."""
    adj = {v: [] for v in vertices}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {removed_vertex}
    comps = []
    for v in vertices:
        if v in seen:
            continue
        comp = []
        stack = [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(frozenset(comp))
    return comps


class DecompTree:
    """Plain tree on vertices 0..b-1 shared by both decomposition kinds."""

    def __init__(self, num_vertices: int, edges):
        self.num_vertices = num_vertices
        es = set()
        for u, v in edges:
            if not (0 <= u < num_vertices and 0 <= v < num_vertices) or u == v:
                raise ValueError(f"bad tree edge ({u},{v})")
            es.add((min(u, v), max(u, v)))
        self.edges = tuple(sorted(es))
        if len(self.edges) != max(num_vertices - 1, 0):
            raise ValueError("not a tree: wrong edge count")
        self.adj = {v: [] for v in range(num_vertices)}
        for u, v in self.edges:
            self.adj[u].append(v)
            self.adj[v].append(u)
        for v in self.adj:
            self.adj[v] = tuple(sorted(self.adj[v]))
        if num_vertices and len(self._reach(0)) != num_vertices:
            raise ValueError("not a tree: disconnected")

    def _reach(self, start):
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in self.adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    def path_vertices(self, s: int, t: int) -> list[int]:
        """Vertices of the unique s-t path, endpoints included."""
        if s == t:
            return [s]
        parent = {s: None}
        stack = [s]
        while stack:
            x = stack.pop()
            if x == t:
                break
            for y in self.adj[x]:
                if y not in parent:
                    parent[y] = x
                    stack.append(y)
        path = [t]
        while path[-1] != s:
            path.append(parent[path[-1]])
        path.reverse()
        return path

    def side_vertices(self, u: int, v: int) -> frozenset:
        """Vertices in the component of tree - u that contains v."""
        seen = {u, v}
        stack = [v]
        out = {v}
        while stack:
            x = stack.pop()
            for y in self.adj[x]:
                if y not in seen:
                    seen.add(y)
                    out.add(y)
                    stack.append(y)
        return frozenset(out)


class GraphTreeDecomposition:
    """Tree plus one vertex-set bag per tree vertex."""

    def __init__(self, tree: DecompTree, bags):
        if len(bags) != tree.num_vertices:
            raise ValueError("one bag per tree vertex required")
        self.tree = tree
        self.bags = tuple(int(b) for b in bags)

    @property
    def width(self) -> int:
        return max(b.bit_count() for b in self.bags) - 1

    @property
    def adhesion(self) -> int:
        if not self.tree.edges:
            return 0
        return max((self.bags[u] & self.bags[v]).bit_count()
                   for u, v in self.tree.edges)

    def validate(self, graph: Graph) -> Report:
        """The three axioms: vertex cover, edge cover, connected occurrences."""
        cover = 0
        for b in self.bags:
            if b & ~graph.full:
                return Report("valid-decomposition", False,
                              {"kind": "bag-out-of-range"})
            cover |= b
        if cover != graph.full:
            return Report("valid-decomposition", False,
                          {"kind": "uncovered-vertices",
                           "vertices": _mask_bits(graph.full ^ cover)})
        for u, v in graph.edges:
            m = (1 << u) | (1 << v)
            if not any(b & m == m for b in self.bags):
                return Report("valid-decomposition", False,
                              {"kind": "uncovered-edge", "edge": [u, v]})
        for x in range(graph.n):
            holders = [t for t, b in enumerate(self.bags) if b >> x & 1]
            # occurrences of x must induce a connected subtree
            root = holders[0]
            seen = {root}
            stack = [root]
            hs = set(holders)
            while stack:
                a = stack.pop()
                for y in self.tree.adj[a]:
                    if y in hs and y not in seen:
                        seen.add(y)
                        stack.append(y)
            if seen != hs:
                return Report("valid-decomposition", False,
                              {"kind": "disconnected-occurrence", "vertex": x})
        return Report("valid-decomposition", True,
                      counts={"bags": len(self.bags), "width": self.width})

    def to_dict(self) -> dict:
        return {
            "kind": "graph-decomposition",
            "tree": {"vertices": self.tree.num_vertices,
                     "edges": [list(e) for e in self.tree.edges]},
            "bags": [sorted(_mask_bits(b)) for b in self.bags],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GraphTreeDecomposition":
        tree = DecompTree(int(d["tree"]["vertices"]),
                          [tuple(e) for e in d["tree"]["edges"]])
        bags = []
        for lst in d["bags"]:
            m = 0
            for x in lst:
                m |= 1 << int(x)
            bags.append(m)
        return cls(tree, bags)


class MatroidTreeDecomposition:
    """Tree plus an arbitrary total map from ground elements to vertices."""

    def __init__(self, tree: DecompTree, tau):
        self.tree = tree
        self.tau = tuple(int(t) for t in tau)
        for t in self.tau:
            if not 0 <= t < tree.num_vertices:
                raise ValueError("tau must map into the tree vertices")

    def bag_mask(self, v: int) -> int:
        m = 0
        for e, t in enumerate(self.tau):
            if t == v:
                m |= 1 << e
        return m

    def side_elements(self, u: int, v: int) -> int:
        """Elements mapped into the component of tree - u containing v."""
        side = self.tree.side_vertices(u, v)
        m = 0
        for e, t in enumerate(self.tau):
            if t in side:
                m |= 1 << e
        return m

    def bag_width(self, v: int, m: Matroid) -> int:
        """Sum of r(E minus the elements of each branch) minus (d-1) r(E)."""
        r = m.rank
        comps = _tree_components(range(self.tree.num_vertices),
                                 self.tree.edges, v)
        total = 0
        for comp in comps:
            away = 0
            for e, t in enumerate(self.tau):
                if t in comp:
                    away |= 1 << e
            total += r(m.full ^ away)
        return total - (len(comps) - 1) * r(m.full)

    def width(self, m: Matroid) -> int:
        return max(self.bag_width(v, m) for v in range(self.tree.num_vertices))

    def to_dict(self) -> dict:
        return {
            "kind": "matroid-decomposition",
            "tree": {"vertices": self.tree.num_vertices,
                     "edges": [list(e) for e in self.tree.edges]},
            "tau": list(self.tau),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MatroidTreeDecomposition":
        tree = DecompTree(int(d["tree"]["vertices"]),
                          [tuple(e) for e in d["tree"]["edges"]])
        return cls(tree, d["tau"])


def decomposition_from_dict(d: dict):
    kind = d.get("kind")
    if kind == "graph-decomposition":
        return GraphTreeDecomposition.from_dict(d)
    if kind == "matroid-decomposition":
        return MatroidTreeDecomposition.from_dict(d)
    raise ValueError(f"unknown decomposition kind {kind!r}")


# ---------------------------------------------------------------------------
# conversions between S-trees and decompositions

def stree_to_treedecomp(tree, universe: GraphUniverse) -> GraphTreeDecomposition:
    """Bags are the interiors of the vertex stars.

    Adjacent bags intersect exactly in A & B of the joining label, and the
    result always satisfies the decomposition axioms for tame trees.
    """
    from .strees import is_star

    for t in tree.vertices:
        if not is_star(tree.star(t)):
            raise ValueError(f"tree is not tame at vertex {t}")
    index = {v: i for i, v in enumerate(tree.vertices)}
    bags = [star_interior(tree.star(v), universe.full) for v in tree.vertices]
    edges = [(index[u], index[v]) for u, v in tree.edges]
    return GraphTreeDecomposition(DecompTree(len(tree.vertices), edges), bags)


def treedecomp_to_stree(d: GraphTreeDecomposition, graph: Graph):
    """Label each tree edge by the two side-unions of bags."""
    from .strees import STree

    rep = d.validate(graph)
    if not rep.passed:
        raise ValueError(f"invalid decomposition: {rep.witness}")
    alpha = {}
    for u, v in d.tree.edges:
        left = 0
        for t in d.tree.side_vertices(v, u):
            left |= d.bags[t]
        right = 0
        for t in d.tree.side_vertices(u, v):
            right |= d.bags[t]
        alpha[(u, v)] = (left, right)
        alpha[(v, u)] = (right, left)
    return STree(range(d.tree.num_vertices), d.tree.edges, alpha, check=False)


def matroid_decomp_to_stree(d: MatroidTreeDecomposition, m: Matroid):
    """Label each tree edge by the bipartition of elements it displays."""
    from .strees import STree

    alpha = {}
    for u, v in d.tree.edges:
        left = d.side_elements(v, u)
        alpha[(u, v)] = (left, m.full ^ left)
        alpha[(v, u)] = (m.full ^ left, left)
    return STree(range(d.tree.num_vertices), d.tree.edges, alpha, check=False)


def stree_to_matroid_decomp(tree, m: Matroid) -> MatroidTreeDecomposition:
    """Map each element to the unique vertex whose incoming labels all keep
    it on the right; the bag width there equals the star size."""
    index = {v: i for i, v in enumerate(tree.vertices)}
    interiors = {v: star_interior(tree.star(v), m.full) for v in tree.vertices}
    tau = []
    for e in range(m.size):
        bit = 1 << e
        home = [v for v in tree.vertices if interiors[v] & bit]
        if len(home) != 1:
            raise ValueError(
                f"element {e} has {len(home)} candidate bags; map not total")
        tau.append(index[home[0]])
    edges = [(index[u], index[v]) for u, v in tree.edges]
    return MatroidTreeDecomposition(
        DecompTree(len(tree.vertices), edges), tau)
