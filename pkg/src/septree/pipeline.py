"""End-to-end refinement drivers shared by the CLI and the corpus harness.

A driver owns the choices the theorems leave to the caller: which star
family, which k, and which starting tree.  When no starting decomposition
is given, the natural start is the single bag holding everything; that
tree only lies in the target family when the ground set is small, and a
lean tree of non-optimal width can absorb every violation (leanness does
not by itself force optimal width).  The width guarantee in the theorems
comes from refining inside the family of the optimal width, so infeasible
single-bag starts are replaced by an optimal-width decomposition from the
exact oracles before refining.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .instances import (
    Graph,
    GraphTreeDecomposition,
    GraphUniverse,
    Matroid,
    MatroidTreeDecomposition,
    matroid_decomp_to_stree,
    stree_to_matroid_decomp,
    stree_to_treedecomp,
    treedecomp_to_stree,
)
from .oracles import (
    branch_stree,
    decomposition_from_order,
    matroid_treewidth_decomposition,
    path_decomposition_from_layout,
    pathwidth_order,
    treewidth_order,
    verify_lean_stree,
    verify_linked_stree,
    verify_matroid_lean,
    verify_lean_td,
    verify_theta_lean,
    verify_linked_td,
)
from .refine import refine_combined, refine_to_lean, refine_to_linked
from .strees import STree, StarFamily, max_star_size, single_vertex_stree
from .separations import Report


@dataclass
class RefineResult:
    tree: STree
    decomposition: object
    family: StarFamily
    width: int
    iterations: int
    trace: list = field(default_factory=list)
    reports: list = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return all(r.passed for r in self.reports)


def _refine_fn(mode: str):
    return {"linked": refine_to_linked, "lean": refine_to_lean,
            "combined": refine_combined}[mode]


def graph_start_tree(g: Graph, family: StarFamily):
    """Feasible starting tree for the family: the single bag when it fits,
    otherwise an optimal-width decomposition from the exact oracle."""
    u = GraphUniverse(g)
    if family.kind in ("fk", "ftheta"):
        if g.n < family.size_cap:
            return single_vertex_stree(), u
        _, elim = treewidth_order(g)
        return treedecomp_to_stree(decomposition_from_order(g, elim), g), u
    if family.kind == "pk":
        if g.n < family.size_cap:
            return single_vertex_stree(), u
        _, layout = pathwidth_order(g)
        return treedecomp_to_stree(
            path_decomposition_from_layout(g, layout), g), u
    if family.kind == "tk":
        tree, _ = branch_stree(g)
        return tree, u
    raise ValueError(f"family {family.kind} is not a graph family")


def default_graph_family(g: Graph, kind: str, k: int | None,
                         theta: int | None) -> StarFamily:
    """Family with the width-oracle default: bags one above the optimum."""
    if kind == "fk":
        return StarFamily("fk", k if k is not None else treewidth_order(g)[0] + 2)
    if kind == "pk":
        return StarFamily("pk", k if k is not None else pathwidth_order(g)[0] + 2)
    if kind == "tk":
        from .oracles import brute_force_branchwidth
        if k is None:
            # leaf stars of branch trees have size 2, so k = 3 is the floor
            k = max(brute_force_branchwidth(g) + 1, 3)
        return StarFamily("tk", k)
    if kind == "ftheta":
        if theta is None:
            raise ValueError("ftheta requires theta")
        return StarFamily("ftheta", k if k is not None else treewidth_order(g)[0] + 2,
                          theta=theta)
    raise ValueError(f"unknown graph family kind {kind!r}")


def refine_graph(g: Graph, mode: str, family_kind: str = "fk",
                 k: int | None = None, theta: int | None = None,
                 start: GraphTreeDecomposition | None = None,
                 with_trace: bool = False, verify: bool = True) -> RefineResult:
    """Refine a graph decomposition and verify the advertised property."""
    if start is not None:
        tree = treedecomp_to_stree(start, g)
        u = GraphUniverse(g)
        if k is None and family_kind in ("fk", "pk", "ftheta"):
            k = max_star_size(tree, u) + 1
        family = default_graph_family(g, family_kind, k, theta)
    else:
        family = default_graph_family(g, family_kind, k, theta)
        tree, u = graph_start_tree(g, family)
    trace: list = []
    out = _refine_fn(mode)(tree, u, family, trace=trace)
    decomp = stree_to_treedecomp(out, u)
    reports = []
    if verify:
        reports.append(decomp.validate(g))
        if mode in ("linked", "combined"):
            reports.append(verify_linked_stree(out, u))
        if mode in ("lean", "combined") and family_kind != "tk":
            reports.append(verify_lean_stree(out, u, family))
            if family_kind == "fk":
                reports.append(verify_lean_td(g, decomp))
            elif family_kind == "ftheta":
                reports.append(verify_theta_lean(g, decomp, family.theta))
    return RefineResult(out, decomp, family, decomp.width, len(trace),
                        trace if with_trace else [], reports)


def matroid_start_tree(m: Matroid, family: StarFamily):
    u = m.universe()
    if m.rank(m.full) < family.size_cap:
        return single_vertex_stree(), u
    _, d = matroid_treewidth_decomposition(m)
    return matroid_decomp_to_stree(d, m), u


def refine_matroid(m: Matroid, mode: str, k: int | None = None,
                   start: MatroidTreeDecomposition | None = None,
                   with_trace: bool = False, verify: bool = True) -> RefineResult:
    """Refine a matroid decomposition over the bipartition family."""
    u = m.universe()
    if start is not None:
        tree = matroid_decomp_to_stree(start, m)
        if k is None:
            k = max_star_size(tree, u) + 1
        family = StarFamily("matroid-fk", k)
    else:
        if k is None:
            k = matroid_treewidth_decomposition(m)[0] + 1
        family = StarFamily("matroid-fk", k)
        tree, u = matroid_start_tree(m, family)
    trace: list = []
    out = _refine_fn(mode)(tree, u, family, trace=trace)
    decomp = stree_to_matroid_decomp(out, m)
    reports = []
    if verify:
        if mode in ("linked", "combined"):
            reports.append(verify_linked_stree(out, u))
        if mode in ("lean", "combined"):
            reports.append(verify_lean_stree(out, u, family))
            if m.size <= 7:
                reports.append(verify_matroid_lean(m, decomp))
    return RefineResult(out, decomp, family, decomp.width(m), len(trace),
                        trace if with_trace else [], reports)
