"""Definitional brute-force twins of the fast searches.

These re-derive each predicate straight from its definition, sharing as
little machinery with the fast paths as practical. They back the `oracle`
CLI command and the agreement suites; vertex counts are expected to stay
at desk scale (<= 12 or so).
"""

from __future__ import annotations

from itertools import combinations
from typing import Optional

from .graphs import SimplicialGraph, VertexSet
from .shape import SILWitness


def _adjacency_masks(g: SimplicialGraph) -> list[int]:
    masks = [0] * g.n
    for u, v in g.edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    return masks


def _bfs_distance(masks: list[int], n: int, u: int, v: int) -> float:
    if u == v:
        return 0
    seen = 1 << u
    frontier = 1 << u
    d = 0
    while frontier:
        d += 1
        reach = 0
        m = frontier
        while m:
            low = m & -m
            reach |= masks[low.bit_length() - 1]
            m ^= low
        reach &= ~seen
        if reach >> v & 1:
            return d
        seen |= reach
        frontier = reach
    return float("inf")


def _component_of(masks: list[int], keep: int, u: int) -> int:
    comp = 1 << u
    frontier = 1 << u
    while frontier:
        reach = 0
        m = frontier
        while m:
            low = m & -m
            reach |= masks[low.bit_length() - 1]
            m ^= low
        reach &= keep & ~comp
        comp |= reach
        frontier = reach
    return comp


def _mask_to_set(mask: int) -> VertexSet:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


def sil_brute(g: SimplicialGraph) -> Optional[SILWitness]:
    """SIL by literal definition: all pairs, all component starts, BFS distance.

    Returns the same canonical witness ordering as the fast path so that full
    equality can be asserted.
    """
    n = g.n
    masks = _adjacency_masks(g)
    full = (1 << n) - 1
    for v in range(n):
        for w in range(v + 1, n):
            if _bfs_distance(masks, n, v, w) < 2:
                continue
            common = masks[v] & masks[w]
            keep = full & ~common
            best: Optional[int] = None
            m = keep & ~(1 << v) & ~(1 << w)
            while m:
                low = m & -m
                u = low.bit_length() - 1
                m ^= low
                comp = _component_of(masks, keep, u)
                if comp >> v & 1 or comp >> w & 1:
                    continue
                if best is None or (comp & -comp) < (best & -best):
                    best = comp
            if best is not None:
                return SILWitness(v=v, w=w, component=_mask_to_set(best))
    return None


def _induces_cycle(masks: list[int], subset: int) -> bool:
    """Does this vertex subset induce a single cycle (length >= 4 checked by caller)?"""
    m = subset
    first = -1
    while m:
        low = m & -m
        v = low.bit_length() - 1
        if first < 0:
            first = v
        if (masks[v] & subset).bit_count() != 2:
            return False
        m ^= low
    return _component_of(masks, subset, first) == subset


def has_chordless_cycle_brute(g: SimplicialGraph) -> bool:
    """Chordality complement, by scanning every vertex subset of size >= 4."""
    masks = _adjacency_masks(g)
    vs = range(g.n)
    for size in range(4, g.n + 1):
        for subset in combinations(vs, size):
            mask = 0
            for v in subset:
                mask |= 1 << v
            if _induces_cycle(masks, mask):
                return True
    return False


def find_induced_c4_exists_brute(g: SimplicialGraph) -> bool:
    masks = _adjacency_masks(g)
    for subset in combinations(range(g.n), 4):
        mask = 0
        for v in subset:
            mask |= 1 << v
        if _induces_cycle(masks, mask):
            return True
    return False


def maximal_cliques_brute(g: SimplicialGraph) -> list[VertexSet]:
    """Every clique maximal under inclusion, by enumerating all vertex subsets."""
    masks = _adjacency_masks(g)
    cliques: list[int] = []
    for size in range(1, g.n + 1):
        for subset in combinations(range(g.n), size):
            ok = all(masks[u] >> v & 1 for u, v in combinations(subset, 2))
            if ok:
                mask = 0
                for v in subset:
                    mask |= 1 << v
                cliques.append(mask)
    maximal = [
        c for c in cliques if not any(c != d and c & d == c for d in cliques)
    ]
    return sorted(
        (_mask_to_set(c) for c in maximal), key=lambda c: (min(c), len(c), sorted(c))
    )
