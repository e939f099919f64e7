"""Dual graph of the resolution, its rooted order, the vertex families and the
weight ``sigma`` that locates the divisor computing the threshold."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Optional

from .constellation import CurveSpec
from .errors import LctError, NoDistinguishedVertex, NotInVLess
from .invariants import BranchInvariants, PointSets, all_branch_invariants, point_sets


@dataclass(frozen=True)
class DualGraph:
    m: int
    edges: frozenset[tuple[int, int]]
    arrows: tuple[int, ...]  # vertex carrying the arrow of branch i at index i - 1
    sets: PointSets = field(compare=False)
    invariants: tuple[BranchInvariants, ...] = field(compare=False)
    free: frozenset[int] = field(compare=False)
    root: int = 1

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.m)]
        for a, b in sorted(self.edges):
            adj[a - 1].append(b)
            adj[b - 1].append(a)
        return tuple(tuple(sorted(x)) for x in adj)

    def neighbours(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v - 1]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v - 1])

    def arrows_at(self, v: int) -> tuple[int, ...]:
        return tuple(i for i, w in enumerate(self.arrows, start=1) if w == v)

    @cached_property
    def tree_parent(self) -> tuple[Optional[int], ...]:
        parent: list[Optional[int]] = [None] * self.m
        seen = {self.root}
        todo = deque([self.root])
        while todo:
            v = todo.popleft()
            for w in self.neighbours(v):
                if w not in seen:
                    seen.add(w)
                    parent[w - 1] = v
                    todo.append(w)
        return tuple(parent)

    @cached_property
    def _paths(self) -> tuple[tuple[int, ...], ...]:
        paths = []
        for v in range(1, self.m + 1):
            out = [v]
            while (p := self.tree_parent[out[-1] - 1]) is not None:
                out.append(p)
            paths.append(tuple(reversed(out)))
        return tuple(paths)

    def root_path(self, v: int) -> tuple[int, ...]:
        """Vertices of ``[v_1, v]`` in order."""
        return self._paths[v - 1]

    def leq(self, u: int, v: int) -> bool:
        """``u <= v``: ``u`` lies on the path from the root to ``v``."""
        return u in self._paths[v - 1]

    def meet(self, u: int, v: int) -> int:
        """Terminal vertex of ``[v_1, u] ∩ [v_1, v]``."""
        last = self.root
        for a, b in zip(self.root_path(u), self.root_path(v)):
            if a != b:
                break
            last = a
        return last


def build_dual_graph(spec: CurveSpec) -> DualGraph:
    """Edge ``{v_j, v_k}`` (``j < k``) iff ``P_k -> P_j`` and no later point is
    proximate to both."""
    c = spec.constellation
    edges = set()
    for k in c.ids():
        for j in c.proximate_points(k):
            if not any(j in c.proximate_points(l) and k in c.proximate_points(l)
                       for l in range(k + 1, c.m + 1)):
                edges.add((j, k))
    g = DualGraph(
        m=c.m,
        edges=frozenset(edges),
        arrows=tuple(b.at for b in spec.branches),
        sets=point_sets(spec),
        invariants=all_branch_invariants(spec),
        free=frozenset(j for j in c.ids() if c.is_free(j)),
    )
    if len(edges) != c.m - 1 or any(p is None for p in g.tree_parent[1:]):
        raise LctError("dual graph is not a tree; the constellation is inconsistent")
    return g


@dataclass(frozen=True)
class VertexFamilies:
    V_F: frozenset[int]
    V_T: frozenset[int]
    V_S: frozenset[int]
    V_free: frozenset[int]
    V_end: frozenset[int]
    V: frozenset[int]


def adapted_degree(g: DualGraph, v: int) -> int:
    return g.degree(v) + len(g.arrows_at(v)) + (1 if v == g.root else 0)


def vertex_families(spec: CurveSpec, g: DualGraph) -> VertexFamilies:
    F, T, S = g.sets.F, g.sets.T, g.sets.S
    return VertexFamilies(
        V_F=F,
        V_T=T,
        V_S=S,
        V_free=frozenset(F & g.free),
        V_end=frozenset(v for v in F if g.degree(v) == 1),
        V=frozenset(T | S),
    )


def vertices_by_adapted_degree(g: DualGraph) -> frozenset[int]:
    return frozenset(v for v in g.sets.F if adapted_degree(g, v) >= 3)


def arrow_split(g: DualGraph, j: int) -> tuple[frozenset[int], frozenset[int]]:
    """``(v_j^<, v_j^>=)`` as sets of branch indices."""
    less, geq = set(), set()
    for i, w in enumerate(g.arrows, start=1):
        (geq if g.leq(j, w) else less).add(i)
    return frozenset(less), frozenset(geq)


def c_coefficient(spec: CurveSpec, g: DualGraph, j: int, i: int) -> Fraction:
    if g.leq(j, g.arrows[i - 1]):
        raise NotInVLess(f"arrow a{i} is not in v{j}^<")
    meet = g.meet(j, g.arrows[i - 1])
    if meet in g.sets.S:
        return Fraction(sum(1 for v in g.root_path(meet) if v in g.sets.F and v in g.free))
    inv = g.invariants[i - 1]
    return Fraction(inv.beta1, inv.beta0)


def sigma(spec: CurveSpec, g: DualGraph, j: int) -> Fraction:
    less, geq = arrow_split(g, j)
    value = sum((c_coefficient(spec, g, j, i) * g.invariants[i - 1].beta0 for i in less),
                Fraction(0))
    value -= sum(g.invariants[i - 1].beta0 for i in geq)
    if value.denominator != 1:
        raise LctError(f"sigma(v{j}) = {value} is not an integer")
    return value


def sigma_table(spec: CurveSpec, g: DualGraph) -> dict[int, Fraction]:
    return {j: sigma(spec, g, j) for j in sorted(g.sets.F)}


def distinguished_vertex(spec: CurveSpec, g: DualGraph,
                         sigmas: Optional[Mapping[int, Fraction]] = None) -> int:
    """The vertex ``v_k`` of V whose root path carries exactly the negative
    weights of V.

    The negative part of V is a chain from the root; walk it and return its
    last element, then re-check both defining conditions from scratch.
    """
    sigmas = sigmas if sigmas is not None else sigma_table(spec, g)
    V = g.sets.T | g.sets.S
    negative = sorted((v for v in V if sigmas[v] < 0), key=lambda v: len(g.root_path(v)))
    if not negative:
        raise NoDistinguishedVertex("no vertex of V has negative weight")
    k = negative[0]
    for v in negative[1:]:
        if not g.leq(k, v):
            raise NoDistinguishedVertex(
                f"negative-weight vertices v{k} and v{v} are not on one root path")
        k = v
    if not satisfies_sign_conditions(g, V, sigmas, k):
        raise NoDistinguishedVertex(f"v{k} fails the sign conditions")
    return k


def satisfies_sign_conditions(g: DualGraph, V, sigmas: Mapping[int, Fraction], k: int) -> bool:
    on_path = set(g.root_path(k))
    cond_a = all(sigmas[v] < 0 for v in V if v in on_path)
    cond_b = all(sigmas[v] >= 0 for v in V if v not in on_path)
    return k in V and cond_a and cond_b


# -- DOT export -------------------------------------------------------------------

def standard_annotations(spec: CurveSpec, g: DualGraph,
                         sigmas: Optional[Mapping[int, Fraction]] = None) -> dict[int, list[str]]:
    sigmas = sigmas if sigmas is not None else sigma_table(spec, g)
    notes: dict[int, list[str]] = {}
    for v in range(1, g.m + 1):
        marks = []
        if v in g.sets.T:
            marks.append("T")
        if v in g.sets.S:
            marks.append("S")
        if v in g.sets.T or v in g.sets.S:
            marks.append("V")
        if marks:
            notes.setdefault(v, []).append(",".join(marks))
        if v in sigmas and (v in g.sets.T or v in g.sets.S):
            notes.setdefault(v, []).append(f"sigma={sigmas[v]}")
    return notes


def dot_export(g: DualGraph, annotations: Optional[Mapping[int, list[str]]] = None,
               branch_names: Optional[list[str]] = None) -> str:
    """Undirected DOT text; deterministic ordering by id."""
    annotations = annotations or {}
    lines = ["graph dual {", "  node [shape=circle];"]
    for v in range(1, g.m + 1):
        label = "\\n".join([str(v), *annotations.get(v, [])])
        shape = "doublecircle" if v in g.sets.S else ("box" if v not in g.free else "circle")
        lines.append(f'  v{v} [label="{label}", shape={shape}];')
    for i in range(1, len(g.arrows) + 1):
        name = branch_names[i - 1] if branch_names else f"a{i}"
        lines.append(f'  a{i} [label="{name}", shape=plaintext];')
    for a, b in sorted(g.edges):
        lines.append(f"  v{a} -- v{b};")
    for i, v in enumerate(g.arrows, start=1):
        lines.append(f"  v{v} -- a{i} [style=bold];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def proximity_dot(spec: CurveSpec) -> str:
    """Directed proximity graph: solid edges to the parent, dashed to the
    second proximate point."""
    c = spec.constellation
    lines = ["digraph proximity {", "  node [shape=circle];"]
    for j in c.ids():
        style = "circle" if c.is_free(j) else "box"
        lines.append(f'  P{j} [label="{j}", shape={style}];')
    for i in spec.branch_ids():
        lines.append(f'  a{i} [label="{spec.branch(i).name}", shape=plaintext];')
    for j in c.ids():
        if (p := c.parent(j)) is not None:
            lines.append(f"  P{j} -> P{p};")
        if (q := c.satellite_of(j)) is not None:
            lines.append(f"  P{j} -> P{q} [style=dashed];")
    for i in spec.branch_ids():
        lines.append(f"  P{spec.branch(i).at} -> a{i} [style=bold];")
    lines.append("}")
    return "\n".join(lines) + "\n"
