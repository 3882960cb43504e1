"""Finite simplicial graphs and the primitives everything else quantifies over.

Vertices are dense integer ids 0..n-1; optional string names ride along and
are only used when rendering witnesses. All values are immutable and all
operations are pure functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import InputError

Edge = tuple[int, int]
VertexSet = frozenset[int]

INFINITY = math.inf


def _normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class SimplicialGraph:
    """Undirected graph without loops or multi-edges.

    `edges` holds sorted pairs (u, v) with u < v. Use :func:`simplicial_graph`
    to construct with validation.
    """

    n: int
    edges: frozenset[Edge]
    names: Optional[tuple[str, ...]] = field(default=None, compare=False)

    @cached_property
    def adjacency(self) -> tuple[VertexSet, ...]:
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    def has_edge(self, u: int, v: int) -> bool:
        return _normalize_edge(u, v) in self.edges

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def vertices(self) -> range:
        return range(self.n)

    def label(self, v: int) -> str:
        if self.names is not None:
            return self.names[v]
        return str(v)

    def labels(self, vs: Iterable[int]) -> list[str]:
        return [self.label(v) for v in sorted(vs)]


def simplicial_graph(
    n: int,
    edges: Iterable[tuple[int, int]],
    names: Optional[Sequence[str]] = None,
) -> SimplicialGraph:
    """Validating constructor: rejects loops, out-of-range endpoints, bad names."""
    if n < 0:
        raise InputError(f"vertex count must be non-negative, got {n}")
    normalized = set()
    for u, v in edges:
        if u == v:
            raise InputError(f"loop edge ({u},{v}) is not allowed in a simplicial graph")
        if not (0 <= u < n and 0 <= v < n):
            raise InputError(f"edge ({u},{v}) has an endpoint outside [0,{n})")
        normalized.add(_normalize_edge(u, v))
    name_tuple = None
    if names is not None:
        name_tuple = tuple(names)
        if len(name_tuple) != n:
            raise InputError(f"expected {n} vertex names, got {len(name_tuple)}")
        if len(set(name_tuple)) != n:
            raise InputError("vertex names must be unique")
    return SimplicialGraph(n=n, edges=frozenset(normalized), names=name_tuple)


def _check_vertex(g: SimplicialGraph, v: int) -> None:
    if not (0 <= v < g.n):
        raise InputError(f"vertex {v} outside [0,{g.n})")


@dataclass(frozen=True)
class InducedSubgraph:
    """Result of restricting to a vertex subset, with the id translation tables."""

    graph: SimplicialGraph
    old_to_new: dict[int, int]
    new_to_old: tuple[int, ...]


def induced_subgraph(g: SimplicialGraph, s: Iterable[int]) -> InducedSubgraph:
    """Restrict `g` to `s`; kept vertices are renumbered in ascending order."""
    kept = sorted(set(s))
    for v in kept:
        _check_vertex(g, v)
    old_to_new = {v: i for i, v in enumerate(kept)}
    edges = [
        (old_to_new[u], old_to_new[v])
        for (u, v) in g.edges
        if u in old_to_new and v in old_to_new
    ]
    names = tuple(g.names[v] for v in kept) if g.names is not None else None
    sub = SimplicialGraph(n=len(kept), edges=frozenset(edges), names=names)
    return InducedSubgraph(graph=sub, old_to_new=old_to_new, new_to_old=tuple(kept))


def link(g: SimplicialGraph, v: int) -> VertexSet:
    """Neighbours of v."""
    _check_vertex(g, v)
    return g.adjacency[v]


def star(g: SimplicialGraph, v: int) -> VertexSet:
    """Link of v together with v itself."""
    _check_vertex(g, v)
    return g.adjacency[v] | {v}


def distance(g: SimplicialGraph, u: int, v: int) -> int | float:
    """Shortest-path length; math.inf when u and v lie in different components."""
    _check_vertex(g, u)
    _check_vertex(g, v)
    if u == v:
        return 0
    adj = g.adjacency
    dist = {u: 0}
    frontier = [u]
    d = 0
    while frontier:
        d += 1
        next_frontier = []
        for x in frontier:
            for y in adj[x]:
                if y not in dist:
                    if y == v:
                        return d
                    dist[y] = d
                    next_frontier.append(y)
        frontier = next_frontier
    return INFINITY


def components_within(g: SimplicialGraph, keep: Iterable[int]) -> tuple[VertexSet, ...]:
    """Connected components of the subgraph induced on `keep`.

    Each component is keyed by its smallest vertex; the tuple is sorted by key.
    """
    keep_set = set(keep)
    adj = g.adjacency
    seen: set[int] = set()
    out: list[VertexSet] = []
    for v in sorted(keep_set):
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in keep_set and y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        out.append(frozenset(comp))
    return tuple(out)


def connected_components(g: SimplicialGraph) -> tuple[VertexSet, ...]:
    return components_within(g, range(g.n))


def is_connected(g: SimplicialGraph) -> bool:
    return g.n <= 1 or len(connected_components(g)) == 1


def is_complete(g: SimplicialGraph) -> bool:
    return len(g.edges) == g.n * (g.n - 1) // 2


def is_clique(g: SimplicialGraph, s: Iterable[int]) -> bool:
    vs = sorted(set(s))
    return all(g.has_edge(u, v) for i, u in enumerate(vs) for v in vs[i + 1:])
