"""Graph-shape predicates the group-theoretic characterizations reduce to.

Induced 4-cycles, chordality with a perfect-elimination-ordering or
chordless-cycle certificate, separating intersections of links (SIL),
maximal cliques, and the set of vertices adjacent to everything.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Union

from .errors import InputError
from .graphs import SimplicialGraph, VertexSet, components_within


# --------------------------------------------------------------------------
# Witness types


@dataclass(frozen=True)
class C4Witness:
    """An induced 4-cycle, listed in cycle order."""

    cycle: tuple[int, int, int, int]


@dataclass(frozen=True)
class ChordlessCycleWitness:
    """An induced cycle of length >= 4, listed in cycle order."""

    cycle: tuple[int, ...]


@dataclass(frozen=True)
class PEOCertificate:
    """A perfect elimination ordering: each vertex's later neighbours form a clique."""

    order: tuple[int, ...]


ChordalityCertificate = Union[PEOCertificate, ChordlessCycleWitness]


@dataclass(frozen=True)
class SILWitness:
    """Vertices v, w at distance >= 2 plus a component of the graph minus
    lk(v) & lk(w) containing neither of them."""

    v: int
    w: int
    component: VertexSet


# --------------------------------------------------------------------------
# Witness verifiers (kept independent of the search code)


def verify_c4_witness(g: SimplicialGraph, wit: C4Witness) -> bool:
    a, b, c, d = wit.cycle
    if len({a, b, c, d}) != 4:
        return False
    ring = [g.has_edge(a, b), g.has_edge(b, c), g.has_edge(c, d), g.has_edge(d, a)]
    chords = [g.has_edge(a, c), g.has_edge(b, d)]
    return all(ring) and not any(chords)


def verify_chordless_cycle(g: SimplicialGraph, wit: ChordlessCycleWitness) -> bool:
    cyc = wit.cycle
    k = len(cyc)
    if k < 4 or len(set(cyc)) != k:
        return False
    for i, u in enumerate(cyc):
        for j in range(i + 1, k):
            v = cyc[j]
            consecutive = j == i + 1 or (i == 0 and j == k - 1)
            if g.has_edge(u, v) != consecutive:
                return False
    return True


def verify_peo(g: SimplicialGraph, cert: PEOCertificate) -> bool:
    order = cert.order
    if sorted(order) != list(range(g.n)):
        return False
    pos = {v: i for i, v in enumerate(order)}
    for i, v in enumerate(order):
        later = [u for u in g.adjacency[v] if pos[u] > i]
        for x, y in combinations(later, 2):
            if not g.has_edge(x, y):
                return False
    return True


def verify_sil_witness(g: SimplicialGraph, wit: SILWitness) -> bool:
    v, w = wit.v, wit.w
    if not (0 <= v < g.n and 0 <= w < g.n) or v == w:
        return False
    if g.has_edge(v, w):
        return False  # d(v, w) >= 2, infinity included
    keep = set(range(g.n)) - (g.adjacency[v] & g.adjacency[w])
    if wit.component not in components_within(g, keep):
        return False
    return v not in wit.component and w not in wit.component


# --------------------------------------------------------------------------
# Searches


def find_induced_c4(g: SimplicialGraph) -> Optional[C4Witness]:
    """Lexicographically smallest induced 4-cycle (by sorted vertex tuple), if any."""
    adj = g.adjacency
    for quad in combinations(range(g.n), 4):
        qs = set(quad)
        degs = [len(adj[v] & qs) for v in quad]
        if degs != [2, 2, 2, 2]:
            continue
        # 2-regular on four vertices is exactly a 4-cycle
        v0 = quad[0]
        nbrs = sorted(adj[v0] & qs)
        v1, v3 = nbrs[0], nbrs[1]
        (v2,) = qs - {v0, v1, v3}
        return C4Witness(cycle=(v0, v1, v2, v3))
    return None


def _lex_bfs(g: SimplicialGraph) -> list[int]:
    """Lexicographic BFS visit order; ties broken toward the smallest vertex."""
    n = g.n
    labels: list[list[int]] = [[] for _ in range(n)]
    visited = [False] * n
    order: list[int] = []
    for step in range(n):
        best = -1
        for v in range(n):
            if visited[v]:
                continue
            if best < 0 or labels[v] > labels[best]:
                best = v
        visited[best] = True
        order.append(best)
        stamp = n - step
        for u in g.adjacency[best]:
            if not visited[u]:
                labels[u].append(stamp)
    return order


def _canonical_cycle(cycle: list[int]) -> tuple[int, ...]:
    """Rotate/reflect so the cycle starts at its smallest vertex and then
    proceeds toward its smaller neighbour."""
    k = len(cycle)
    i = cycle.index(min(cycle))
    rotated = cycle[i:] + cycle[:i]
    if rotated[1] > rotated[-1]:
        rotated = [rotated[0]] + rotated[:0:-1]
    return tuple(rotated)


def _chordless_cycle_through(
    g: SimplicialGraph, v: int, x: int, y: int
) -> Optional[tuple[int, ...]]:
    """Shortest x-y path avoiding N[v]\\{x,y}, closed up through v.

    The path is shortest within an induced subgraph, hence chordless; interior
    vertices avoid N(v), so the only cycle edges at v are vx and vy.
    """
    allowed = (set(range(g.n)) - g.adjacency[v] - {v}) | {x, y}
    prev = {x: None}
    frontier = [x]
    while frontier and y not in prev:
        nxt = []
        for a in frontier:
            for b in g.adjacency[a]:
                if b in allowed and b not in prev:
                    prev[b] = a
                    nxt.append(b)
        frontier = nxt
    if y not in prev:
        return None
    path = [y]
    while path[-1] != x:
        path.append(prev[path[-1]])
    if len(path) < 3:
        return None  # x adjacent to y: no chordless cycle through this triple
    return _canonical_cycle([v] + path)


def _extract_chordless_cycle(
    g: SimplicialGraph, v: int, x: int, y: int
) -> tuple[int, ...]:
    found = _chordless_cycle_through(g, v, x, y)
    if found is not None:
        return found
    # Fallback: some triple (v', x', y') with x', y' non-adjacent neighbours of
    # v' always yields a cycle when the graph is not chordal.
    for vv in range(g.n):
        nbrs = sorted(g.adjacency[vv])
        for xx, yy in combinations(nbrs, 2):
            if g.has_edge(xx, yy):
                continue
            found = _chordless_cycle_through(g, vv, xx, yy)
            if found is not None:
                return found
    raise AssertionError("PEO check failed but no chordless cycle exists")


def chordality(g: SimplicialGraph) -> ChordalityCertificate:
    """Either a perfect elimination ordering or a chordless cycle of length >= 4.

    The candidate ordering is the reverse of a lexicographic BFS; if its check
    fails the graph is not chordal and a cycle is recovered from the failing
    triple by a shortest path in a pruned graph.
    """
    visit = _lex_bfs(g)
    pos = {v: i for i, v in enumerate(visit)}
    for v in visit:
        prior = [u for u in g.adjacency[v] if pos[u] < pos[v]]
        if not prior:
            continue
        p = max(prior, key=lambda u: pos[u])
        for u in prior:
            if u != p and not g.has_edge(u, p):
                return ChordlessCycleWitness(cycle=_extract_chordless_cycle(g, v, p, u))
    return PEOCertificate(order=tuple(reversed(visit)))


def find_sil(g: SimplicialGraph) -> Optional[SILWitness]:
    """First SIL in ascending pair order, with the smallest-keyed component.

    A pair qualifies when d(v, w) >= 2 (disconnected pairs included) and some
    component of the graph induced on V - (lk(v) & lk(w)) misses both v and w.
    """
    adj = g.adjacency
    all_vs = set(range(g.n))
    for v in range(g.n):
        for w in range(v + 1, g.n):
            if w in adj[v]:
                continue
            keep = all_vs - (adj[v] & adj[w])
            for comp in components_within(g, keep):
                if v not in comp and w not in comp:
                    return SILWitness(v=v, w=w, component=comp)
    return None


def maximal_cliques(g: SimplicialGraph) -> list[VertexSet]:
    """All maximal cliques via Bron-Kerbosch with pivoting.

    Sorted by smallest member, then size, then vertex tuple.
    """
    if g.n == 0:
        return []
    adj = g.adjacency
    out: list[VertexSet] = []

    def expand(r: frozenset[int], p: frozenset[int], x: frozenset[int]) -> None:
        if not p and not x:
            out.append(r)
            return
        pivot = max(p | x, key=lambda u: (len(p & adj[u]), -u))
        for v in sorted(p - adj[pivot]):
            expand(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    expand(frozenset(), frozenset(range(g.n)), frozenset())
    return sorted(out, key=lambda c: (min(c), len(c), sorted(c)))


def center_support(g: SimplicialGraph) -> VertexSet:
    """Vertices adjacent to every other vertex; the induced subgraph is complete."""
    support = frozenset(v for v in range(g.n) if len(g.adjacency[v]) == g.n - 1)
    for u in support:
        for v in support:
            assert u == v or g.has_edge(u, v)
    return support
