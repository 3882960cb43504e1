"""Coxeter-system analytics: matrix, classification tables, Gram oracle,
and the two searches behind Moussong's hyperbolicity criterion.

Convention lock: a missing edge of the presentation graph means the pair has
INFINITE order (no relation), not order 2. Adjacency in the *diagram* sense,
used for irreducibility, is m(u, v) != 2. The finite/affine tables are the
authoritative classification; the floating-point Gram signature is only a
cross-check and never sits on a decision path.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from itertools import combinations
from typing import Callable, Iterable, Mapping, Optional

import numpy as np

from .errors import DeadlineExceeded, InputError, ResourceLimitError
from .graphs import SimplicialGraph, VertexSet
from .shape import ChordlessCycleWitness, chordality, maximal_cliques
from .verdict import Answer, COXETER, HYPERBOLIC, VIRTUALLY_FREE, TraceStep, Verdict

INF = math.inf

#: vertex-count cap for subset searches (2**20 subsets); --pattern-mode lifts it
SUBSET_SEARCH_CAP = 20

MOUSSONG_ANCHOR = (
    "Moussong: a Coxeter group is word hyperbolic iff it has no affine "
    "parabolic on >= 3 generators and no pair of commuting infinite parabolics"
)
MIHALIK_TSCHANTZ_ANCHOR = (
    "Mihalik-Tschantz: a Coxeter group is virtually free iff the graph is "
    "chordal and every clique generates a finite parabolic"
)


def _check_deadline(deadline: Optional[float]) -> None:
    if deadline is not None and time.monotonic() > deadline:
        raise DeadlineExceeded("search ran past its deadline")


# --------------------------------------------------------------------------
# Presentation graphs and Coxeter matrices


@dataclass(frozen=True)
class CoxeterPresentationGraph:
    """Simplicial graph with finite edge labels phi >= 2; a missing edge
    encodes an infinite-order pair."""

    graph: SimplicialGraph
    labels: tuple[tuple[int, int, int], ...]  # (u, v, phi) with u < v, sorted

    @cached_property
    def label_map(self) -> dict[tuple[int, int], int]:
        return {(u, v): phi for (u, v, phi) in self.labels}


def coxeter_graph(
    graph: SimplicialGraph, labels: Mapping[tuple[int, int], int]
) -> CoxeterPresentationGraph:
    """Validating constructor: every edge labeled once, labels >= 2 and finite."""
    normalized: dict[tuple[int, int], int] = {}
    for (u, v), phi in labels.items():
        key = (u, v) if u < v else (v, u)
        if key not in graph.edges:
            raise InputError(f"label given for non-edge ({u},{v})")
        if key in normalized:
            raise InputError(f"duplicate label for edge ({key[0]},{key[1]})")
        if not isinstance(phi, int) or isinstance(phi, bool) or phi < 2:
            raise InputError(
                f"edge ({key[0]},{key[1]}) needs an integer label >= 2, got {phi!r}"
            )
        normalized[key] = phi
    missing = graph.edges - set(normalized)
    if missing:
        u, v = sorted(missing)[0]
        raise InputError(f"edge ({u},{v}) has no label")
    return CoxeterPresentationGraph(
        graph=graph, labels=tuple(sorted((u, v, phi) for (u, v), phi in normalized.items()))
    )


@dataclass(frozen=True)
class CoxeterMatrix:
    """Symmetric exponent matrix: 1 on the diagonal, integers >= 2 or inf off it."""

    n: int
    rows: tuple[tuple[float, ...], ...]

    def m(self, u: int, v: int) -> float:
        return self.rows[u][v]

    @cached_property
    def diagram_adjacency(self) -> tuple[VertexSet, ...]:
        """Neighbours in the diagram sense: m(u, v) != 2 (infinity included)."""
        return tuple(
            frozenset(u for u in range(self.n) if u != v and self.rows[v][u] != 2)
            for v in range(self.n)
        )

    @cached_property
    def commuters(self) -> tuple[VertexSet, ...]:
        return tuple(
            frozenset(u for u in range(self.n) if u != v and self.rows[v][u] == 2)
            for v in range(self.n)
        )


def coxeter_matrix(cg: CoxeterPresentationGraph) -> CoxeterMatrix:
    """m(u,v) = phi on edges, infinity on non-edges, 1 on the diagonal."""
    n = cg.graph.n
    rows = [[INF] * n for _ in range(n)]
    for v in range(n):
        rows[v][v] = 1
    for (u, v, phi) in cg.labels:
        rows[u][v] = phi
        rows[v][u] = phi
    return CoxeterMatrix(n=n, rows=tuple(tuple(r) for r in rows))


def matrix_from_entries(
    n: int, entries: Mapping[tuple[int, int], float]
) -> CoxeterMatrix:
    """Build a matrix directly; unspecified off-diagonal pairs default to 2.

    This is the diagram-style constructor used in tests and the classifier
    tables; it is NOT the presentation-graph convention.
    """
    rows = [[2.0] * n for _ in range(n)]
    for v in range(n):
        rows[v][v] = 1
    for (u, v), m in entries.items():
        if u == v:
            raise InputError("diagonal entries are fixed to 1")
        if m != INF and (int(m) != m or m < 2):
            raise InputError(f"m({u},{v}) must be an integer >= 2 or infinity")
        rows[u][v] = m if m == INF else int(m)
        rows[v][u] = rows[u][v]
    return CoxeterMatrix(n=n, rows=tuple(tuple(r) for r in rows))


def diagram_components(mat: CoxeterMatrix, s: Iterable[int]) -> tuple[VertexSet, ...]:
    """Connected components of s under diagram adjacency (m != 2), sorted by
    smallest member."""
    s_set = set(s)
    adj = mat.diagram_adjacency
    seen: set[int] = set()
    out: list[VertexSet] = []
    for v in sorted(s_set):
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y in s_set and y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        out.append(frozenset(comp))
    return tuple(out)


# --------------------------------------------------------------------------
# Classification of irreducible systems against the standard tables


class DiagramKind(str, Enum):
    FINITE = "finite"
    AFFINE = "affine"
    INDEFINITE = "indefinite"


@dataclass(frozen=True)
class IrreducibleType:
    kind: DiagramKind
    name: str
    generators: int


def _finite(name: str, k: int) -> IrreducibleType:
    return IrreducibleType(DiagramKind.FINITE, name, k)


def _affine(name: str, k: int) -> IrreducibleType:
    return IrreducibleType(DiagramKind.AFFINE, name, k)


def _indefinite(k: int) -> IrreducibleType:
    return IrreducibleType(DiagramKind.INDEFINITE, "indefinite", k)


def _match_path(labels: tuple[float, ...], k: int) -> IrreducibleType:
    """Classify a path diagram on k >= 3 nodes by its edge-label sequence."""

    def eq(pattern: tuple[int, ...]) -> bool:
        return labels == pattern or labels == pattern[::-1]

    if all(m == 3 for m in labels):
        return _finite(f"A{k}", k)
    if labels.count(4) == 1 and (labels[0] == 4 or labels[-1] == 4) and all(
        m in (3, 4) for m in labels
    ):
        return _finite(f"B{k}", k)
    if k == 4 and eq((3, 4, 3)):
        return _finite("F4", k)
    if k == 3 and eq((3, 5)):
        return _finite("H3", k)
    if k == 4 and eq((3, 3, 5)):
        return _finite("H4", k)
    if k == 3 and eq((3, 6)):
        return _affine("~G2", k)
    if k == 5 and eq((3, 3, 4, 3)):
        return _affine("~F4", k)
    if labels[0] == 4 and labels[-1] == 4 and all(m == 3 for m in labels[1:-1]):
        return _affine(f"~C{k - 1}", k)
    return _indefinite(k)


def _match_tripod(legs: list[tuple[float, ...]], k: int) -> IrreducibleType:
    """Classify a tree with a single degree-3 branch node; `legs` lists the
    edge labels of each leg read from the branch node outward."""
    lengths = sorted(len(leg) for leg in legs)
    flat = [m for leg in legs for m in leg]
    if all(m == 3 for m in flat):
        if lengths[0] == 1 and lengths[1] == 1:
            return _finite(f"D{k}", k)
        if lengths == [1, 2, 2]:
            return _finite("E6", k)
        if lengths == [1, 2, 3]:
            return _finite("E7", k)
        if lengths == [1, 2, 4]:
            return _finite("E8", k)
        if lengths == [2, 2, 2]:
            return _affine("~E6", k)
        if lengths == [1, 3, 3]:
            return _affine("~E7", k)
        if lengths == [1, 2, 5]:
            return _affine("~E8", k)
        return _indefinite(k)
    if flat.count(4) == 1 and all(m in (3, 4) for m in flat):
        # ~B: legs (1,1,x) with the 4 on the outermost edge of a longest leg
        if lengths[0] == 1 and lengths[1] == 1:
            (leg4,) = [leg for leg in legs if 4 in leg]
            if leg4[-1] == 4 and len(leg4) == lengths[2]:
                return _affine(f"~B{k - 1}", k)
    return _indefinite(k)


def _classify_connected(mat: CoxeterMatrix, nodes: tuple[int, ...]) -> IrreducibleType:
    k = len(nodes)
    if k == 1:
        return _finite("A1", 1)
    if k == 2:
        m = mat.m(nodes[0], nodes[1])
        if m == INF:
            return _affine("~A1", 2)
        if m == 3:
            return _finite("A2", 2)
        if m == 4:
            return _finite("B2", 2)
        return _finite(f"I2({int(m)})", 2)
    entries = {(u, v): mat.m(u, v) for u, v in combinations(nodes, 2)}
    if any(m == INF for m in entries.values()):
        # any infinite pair inside an irreducible system of rank >= 3 rules
        # out every finite and affine shape
        return _indefinite(k)
    edges = [(u, v, m) for (u, v), m in entries.items() if m != 2]
    deg = {v: 0 for v in nodes}
    nbr: dict[int, list[tuple[int, float]]] = {v: [] for v in nodes}
    for u, v, m in edges:
        deg[u] += 1
        deg[v] += 1
        nbr[u].append((v, m))
        nbr[v].append((u, m))
    max_deg = max(deg.values())
    if len(edges) == k and max_deg == 2:
        if all(m == 3 for _, _, m in edges):
            return _affine(f"~A{k - 1}", k)
        return _indefinite(k)
    if len(edges) != k - 1:
        return _indefinite(k)
    # tree shapes
    if max_deg == 2:
        start = min(v for v in nodes if deg[v] == 1)
        labels: list[float] = []
        prev, cur = None, start
        while True:
            nxt = [(w, m) for (w, m) in nbr[cur] if w != prev]
            if not nxt:
                break
            (w, m) = nxt[0]
            labels.append(m)
            prev, cur = cur, w
        return _match_path(tuple(labels), k)
    if max_deg == 3:
        branches = [v for v in nodes if deg[v] == 3]
        if len(branches) == 1:
            b = branches[0]
            legs: list[tuple[float, ...]] = []
            for (w, m) in sorted(nbr[b]):
                leg = [m]
                prev, cur = b, w
                while True:
                    nxt = [(x, mm) for (x, mm) in nbr[cur] if x != prev]
                    if not nxt:
                        break
                    (x, mm) = nxt[0]
                    leg.append(mm)
                    prev, cur = cur, x
                legs.append(tuple(leg))
            return _match_tripod(legs, k)
        if len(branches) == 2:
            leaves = [v for v in nodes if deg[v] == 1]
            fork_ok = all(
                sum(1 for (w, _) in nbr[b] if deg[w] == 1) == 2 for b in branches
            )
            if (
                len(leaves) == 4
                and fork_ok
                and all(m == 3 for _, _, m in edges)
            ):
                return _affine(f"~D{k - 1}", k)
        return _indefinite(k)
    if max_deg == 4:
        if k == 5 and all(m == 3 for _, _, m in edges):
            return _affine("~D4", k)
        return _indefinite(k)
    return _indefinite(k)


def _classify_if_irreducible(
    mat: CoxeterMatrix, s: Iterable[int]
) -> Optional[IrreducibleType]:
    comps = diagram_components(mat, s)
    if len(comps) != 1:
        return None
    return _classify_connected(mat, tuple(sorted(comps[0])))


def classify_irreducible(mat: CoxeterMatrix, s: Iterable[int]) -> IrreducibleType:
    """Match an irreducible vertex set against the finite and affine tables.

    Raises InputError when s is empty or splits into several diagram
    components.
    """
    result = _classify_if_irreducible(mat, s)
    if result is None:
        raise InputError("classify_irreducible needs a single diagram component")
    return result


def is_finite_system(mat: CoxeterMatrix, s: Iterable[int]) -> bool:
    """True iff every diagram component of s is of finite type (empty s included)."""
    return all(
        _classify_connected(mat, tuple(sorted(comp))).kind is DiagramKind.FINITE
        for comp in diagram_components(mat, s)
    )


# --------------------------------------------------------------------------
# Gram-form numerical oracle


@dataclass(frozen=True)
class GramSignature:
    kind: str  # "positive-definite" | "positive-semidefinite" | "indefinite"
    nullity: int
    eigenvalues: tuple[float, ...]


def gram_matrix(mat: CoxeterMatrix, s: Iterable[int]) -> np.ndarray:
    """Cosine bilinear form B(u,v) = -cos(pi/m(u,v)), with -1 for infinite m."""
    nodes = sorted(set(s))
    if not nodes:
        raise InputError("gram_matrix needs a non-empty vertex set")
    k = len(nodes)
    B = np.eye(k)
    for i in range(k):
        for j in range(i + 1, k):
            m = mat.m(nodes[i], nodes[j])
            B[i, j] = B[j, i] = -1.0 if m == INF else -math.cos(math.pi / m)
    return B


def gram_signature(B: np.ndarray, tol: float = 1e-9) -> GramSignature:
    if tol <= 0:
        raise InputError("tolerance must be positive")
    sym = (B + B.T) / 2.0
    eigs = np.linalg.eigvalsh(sym)
    if eigs[0] > tol:
        return GramSignature("positive-definite", 0, tuple(float(e) for e in eigs))
    if eigs[0] >= -tol:
        nullity = int(np.sum(np.abs(eigs) <= tol))
        return GramSignature(
            "positive-semidefinite", nullity, tuple(float(e) for e in eigs)
        )
    return GramSignature("indefinite", 0, tuple(float(e) for e in eigs))


# --------------------------------------------------------------------------
# Affine-subset enumeration: brute force at small sizes, family pattern
# walkers above them. Every affine diagram on >= 6 nodes is a cycle (~A),
# a decorated chain (~B, ~C, ~D) or one of ~E6/~E7/~E8, so the walkers plus
# the size <= 5 sweep cover every size.

_SMALL_SUBSET_MAX = 5


def _adj_by_label(mat: CoxeterMatrix, label: float) -> list[list[int]]:
    return [
        sorted(u for u in range(mat.n) if u != v and mat.m(u, v) == label)
        for v in range(mat.n)
    ]


def _walk_cycles(mat: CoxeterMatrix, out: set[VertexSet], deadline) -> None:
    """Induced all-label-3 cycles on >= 6 vertices."""
    adj3 = _adj_by_label(mat, 3)

    def grow(start: int, path: list[int], used: set[int]) -> None:
        _check_deadline(deadline)
        last = path[-1]
        for x in adj3[last]:
            if x <= start or x in used:
                continue
            if any(mat.m(x, p) != 2 for p in path[1:-1]):
                continue
            m0 = mat.m(x, start)
            if len(path) == 1:
                grow(start, path + [x], used | {x})
            elif m0 == 3:
                if len(path) + 1 >= 6 and path[1] < x:
                    out.add(frozenset(path + [x]))
            elif m0 == 2:
                grow(start, path + [x], used | {x})

    for start in range(mat.n):
        grow(start, [start], {start})


def _walk_c_chains(mat: CoxeterMatrix, out: set[VertexSet], deadline) -> None:
    """Induced chains labelled 4,3,...,3,4 on >= 6 vertices (~C family)."""

    def grow(path: list[int], used: set[int]) -> None:
        _check_deadline(deadline)
        last = path[-1]
        for x in range(mat.n):
            if x in used:
                continue
            m_last = mat.m(x, last)
            if m_last not in (3, 4):
                continue
            if any(mat.m(x, p) != 2 for p in path[:-1]):
                continue
            if m_last == 4:
                if len(path) + 1 >= 6:
                    out.add(frozenset(path + [x]))
            else:
                grow(path + [x], used | {x})

    for a in range(mat.n):
        for b in range(mat.n):
            if a != b and mat.m(a, b) == 4:
                grow([a, b], {a, b})


def _forks(mat: CoxeterMatrix):
    """Triples (p, q, c): commuting pair p < q, both joined to c by label 3."""
    adj3 = _adj_by_label(mat, 3)
    for c in range(mat.n):
        for p, q in combinations(adj3[c], 2):
            if mat.m(p, q) == 2:
                yield p, q, c


def _walk_b_chains(mat: CoxeterMatrix, out: set[VertexSet], deadline) -> None:
    """Fork + 3-chain ending in a single 4-edge, >= 6 vertices (~B family)."""

    def grow(p: int, q: int, path: list[int], used: set[int]) -> None:
        _check_deadline(deadline)
        last = path[-1]
        for x in range(mat.n):
            if x in used:
                continue
            m_last = mat.m(x, last)
            if m_last not in (3, 4):
                continue
            if mat.m(x, p) != 2 or mat.m(x, q) != 2:
                continue
            if any(mat.m(x, y) != 2 for y in path[:-1]):
                continue
            if m_last == 4:
                if len(path) + 3 >= 6:
                    out.add(frozenset([p, q] + path + [x]))
            else:
                grow(p, q, path + [x], used | {x})

    for p, q, c in _forks(mat):
        grow(p, q, [c], {p, q, c})


def _walk_d_chains(mat: CoxeterMatrix, out: set[VertexSet], deadline) -> None:
    """Forks at both ends of an all-3 chain, >= 6 vertices (~D family)."""
    adj3 = _adj_by_label(mat, 3)

    def close(p: int, q: int, path: list[int], used: set[int]) -> None:
        last = path[-1]
        others = set(path[:-1]) | {p, q}
        for p2, q2 in combinations(adj3[last], 2):
            if p2 in used or q2 in used:
                continue
            if mat.m(p2, q2) != 2:
                continue
            if any(mat.m(p2, y) != 2 or mat.m(q2, y) != 2 for y in others):
                continue
            if len(path) + 4 >= 6:
                out.add(frozenset([p, q, p2, q2] + path))

    def grow(p: int, q: int, path: list[int], used: set[int]) -> None:
        _check_deadline(deadline)
        if len(path) >= 2:
            close(p, q, path, used)
        last = path[-1]
        for x in adj3[last]:
            if x in used:
                continue
            if mat.m(x, p) != 2 or mat.m(x, q) != 2:
                continue
            if any(mat.m(x, y) != 2 for y in path[:-1]):
                continue
            grow(p, q, path + [x], used | {x})

    for p, q, c in _forks(mat):
        grow(p, q, [c], {p, q, c})


_E_LEG_LENGTHS = ((2, 2, 2), (1, 3, 3), (1, 2, 5))


def _legs_from(mat: CoxeterMatrix, z: int, length: int) -> list[tuple[int, ...]]:
    """Induced all-3 paths of the given edge length hanging off z."""
    adj3 = _adj_by_label(mat, 3)
    out: list[tuple[int, ...]] = []

    def grow(path: list[int]) -> None:
        if len(path) == length:
            out.append(tuple(path))
            return
        last = path[-1]
        for x in adj3[last]:
            if x == z or x in path:
                continue
            if mat.m(x, z) != 2:
                continue
            if any(mat.m(x, y) != 2 for y in path[:-1]):
                continue
            grow(path + [x])

    for first in adj3[z]:
        grow([first])
    return out


def _walk_e_sporadics(mat: CoxeterMatrix, out: set[VertexSet], deadline) -> None:
    """~E6 / ~E7 / ~E8 as a degree-3 centre with legs of prescribed lengths."""
    for z in range(mat.n):
        _check_deadline(deadline)
        for lengths in _E_LEG_LENGTHS:
            options = [_legs_from(mat, z, l) for l in lengths]
            for a in options[0]:
                sa = set(a)
                for b in options[1]:
                    sb = set(b)
                    if sa & sb:
                        continue
                    if any(mat.m(x, y) != 2 for x in a for y in b):
                        continue
                    for c in options[2]:
                        sc = set(c)
                        if sc & (sa | sb):
                            continue
                        if any(mat.m(x, y) != 2 for x in a + b for y in c):
                            continue
                        out.add(frozenset((z,) + a + b + c))


def _affine_family_subsets(mat: CoxeterMatrix, deadline) -> dict[int, list[tuple[int, ...]]]:
    """All irreducible affine subsets of size >= 6, bucketed by size.

    Walker output is filtered through the classifier, so anything emitted is
    certainly affine; the walkers' job is completeness.
    """
    raw: set[VertexSet] = set()
    _walk_cycles(mat, raw, deadline)
    _walk_c_chains(mat, raw, deadline)
    _walk_b_chains(mat, raw, deadline)
    _walk_d_chains(mat, raw, deadline)
    _walk_e_sporadics(mat, raw, deadline)
    buckets: dict[int, list[tuple[int, ...]]] = {}
    for s in raw:
        t = _classify_if_irreducible(mat, s)
        if t is not None and t.kind is DiagramKind.AFFINE and len(s) >= 6:
            buckets.setdefault(len(s), []).append(tuple(sorted(s)))
    for size in buckets:
        buckets[size].sort()
    return buckets


# --------------------------------------------------------------------------
# Moussong searches


@dataclass(frozen=True)
class EuclideanSubdiagramWitness:
    """Irreducible affine subset with at least min_rank generators."""

    vertices: VertexSet
    type_name: str


@dataclass(frozen=True)
class CommutingInfinitePairWitness:
    """Disjoint vertex sets, every cross pair commuting, both systems infinite."""

    s1: VertexSet
    s2: VertexSet


def verify_euclidean_witness(
    mat: CoxeterMatrix, wit: EuclideanSubdiagramWitness, min_rank: int = 3
) -> bool:
    if len(wit.vertices) < min_rank:
        return False
    t = _classify_if_irreducible(mat, wit.vertices)
    return t is not None and t.kind is DiagramKind.AFFINE and t.name == wit.type_name


def verify_commuting_pair_witness(
    mat: CoxeterMatrix, wit: CommutingInfinitePairWitness
) -> bool:
    if not wit.s1 or not wit.s2 or wit.s1 & wit.s2:
        return False
    if any(mat.m(a, b) != 2 for a in wit.s1 for b in wit.s2):
        return False
    return not is_finite_system(mat, wit.s1) and not is_finite_system(mat, wit.s2)


def _require_within_cap(mat: CoxeterMatrix, pattern_mode: bool) -> None:
    if mat.n > SUBSET_SEARCH_CAP and not pattern_mode:
        raise ResourceLimitError(
            f"{mat.n} vertices exceeds the subset-search cap of "
            f"{SUBSET_SEARCH_CAP}; rerun with --pattern-mode to use the "
            "family pattern search",
            cap=SUBSET_SEARCH_CAP,
        )


def find_euclidean_subdiagram(
    mat: CoxeterMatrix,
    min_rank: int = 3,
    *,
    pattern_mode: bool = False,
    deadline: Optional[float] = None,
) -> Optional[EuclideanSubdiagramWitness]:
    """Smallest irreducible affine subset with >= min_rank generators.

    Smallest means fewest vertices, ties broken by the sorted vertex tuple.
    """
    if min_rank < 2:
        raise InputError("affine systems have at least 2 generators")
    _require_within_cap(mat, pattern_mode)
    n = mat.n
    for size in range(min_rank, min(_SMALL_SUBSET_MAX, n) + 1):
        for combo in combinations(range(n), size):
            _check_deadline(deadline)
            t = _classify_if_irreducible(mat, combo)
            if t is not None and t.kind is DiagramKind.AFFINE:
                return EuclideanSubdiagramWitness(
                    vertices=frozenset(combo), type_name=t.name
                )
    if n >= 6:
        buckets = _affine_family_subsets(mat, deadline)
        for size in range(max(6, min_rank), n + 1):
            for combo in buckets.get(size, []):
                if len(combo) >= min_rank:
                    t = _classify_if_irreducible(mat, combo)
                    return EuclideanSubdiagramWitness(
                        vertices=frozenset(combo), type_name=t.name
                    )
    return None


def _finite_tester(mat: CoxeterMatrix) -> Callable[[frozenset], bool]:
    memo: dict[frozenset, bool] = {}

    def finite(s: frozenset) -> bool:
        cached = memo.get(s)
        if cached is None:
            cached = is_finite_system(mat, s)
            memo[s] = cached
        return cached

    return finite


def _minimal_infinite_subsets(
    mat: CoxeterMatrix, finite: Callable[[frozenset], bool], deadline
):
    """Subsets that are infinite with every proper subset finite, in
    (size, lexicographic) order.

    These are exactly the irreducible affine subsets plus the Lanner
    subsets; the latter only exist on 3 to 5 vertices.
    """
    n = mat.n
    for u, v in combinations(range(n), 2):
        if mat.m(u, v) == INF:
            yield frozenset((u, v))
    for size in range(3, min(_SMALL_SUBSET_MAX, n) + 1):
        for combo in combinations(range(n), size):
            _check_deadline(deadline)
            t = _classify_if_irreducible(mat, combo)
            if t is None or t.kind is DiagramKind.FINITE:
                continue
            if t.kind is DiagramKind.AFFINE:
                yield frozenset(combo)
            elif all(
                finite(frozenset(sub)) for sub in combinations(combo, size - 1)
            ):
                yield frozenset(combo)  # Lanner shape
    if n >= 6:
        buckets = _affine_family_subsets(mat, deadline)
        for size in range(6, n + 1):
            for combo in buckets.get(size, []):
                yield frozenset(combo)


def find_commuting_infinite_pair(
    mat: CoxeterMatrix,
    *,
    mode: str = "optimized",
    pattern_mode: bool = False,
    deadline: Optional[float] = None,
) -> Optional[CommutingInfinitePairWitness]:
    """First (by size, then lexicographically) infinite subset S1 whose
    commuting complement is also infinite, paired with that complement.

    `optimized` enumerates only minimal infinite subsets; `oracle` sweeps
    every subset. Both return the identical witness: the smallest qualifying
    S1 never contains a smaller infinite subset, so it is itself minimal.
    """
    if mode not in ("optimized", "oracle"):
        raise InputError(f"unknown search mode {mode!r}")
    if mode == "oracle" and mat.n > SUBSET_SEARCH_CAP:
        raise ResourceLimitError(
            f"oracle mode sweeps all subsets and is capped at "
            f"{SUBSET_SEARCH_CAP} vertices",
            cap=SUBSET_SEARCH_CAP,
        )
    if mode == "optimized":
        _require_within_cap(mat, pattern_mode)
    finite = _finite_tester(mat)
    commuters = mat.commuters
    full = frozenset(range(mat.n))

    def orthogonal(s1: frozenset) -> frozenset:
        orth = full
        for v in s1:
            orth &= commuters[v]
        return orth

    if mode == "optimized":
        for s1 in _minimal_infinite_subsets(mat, finite, deadline):
            orth = orthogonal(s1)
            if orth and not finite(orth):
                return CommutingInfinitePairWitness(s1=s1, s2=orth)
        return None
    for size in range(1, mat.n + 1):
        for combo in combinations(range(mat.n), size):
            _check_deadline(deadline)
            s1 = frozenset(combo)
            if finite(s1):
                continue
            orth = orthogonal(s1)
            if orth and not finite(orth):
                return CommutingInfinitePairWitness(s1=s1, s2=orth)
    return None


# --------------------------------------------------------------------------
# Verdict-level wrappers


def _names(g: SimplicialGraph, vs: Iterable[int]) -> str:
    return "{" + ", ".join(g.labels(vs)) + "}"


def moussong_hyperbolic(
    cg: CoxeterPresentationGraph,
    *,
    pattern_mode: bool = False,
    deadline: Optional[float] = None,
) -> Verdict:
    """Word hyperbolicity of the Coxeter group itself."""
    mat = coxeter_matrix(cg)
    g = cg.graph
    euclid = find_euclidean_subdiagram(
        mat, 3, pattern_mode=pattern_mode, deadline=deadline
    )
    pair = find_commuting_infinite_pair(
        mat, pattern_mode=pattern_mode, deadline=deadline
    )
    trace = [
        TraceStep(
            criterion="affine parabolic on >= 3 generators",
            anchor=MOUSSONG_ANCHOR,
            outcome=(
                "none found"
                if euclid is None
                else f"found {euclid.type_name} on {_names(g, euclid.vertices)}"
            ),
        ),
        TraceStep(
            criterion="commuting pair of infinite parabolics",
            anchor=MOUSSONG_ANCHOR,
            outcome=(
                "none found"
                if pair is None
                else f"found {_names(g, pair.s1)} x {_names(g, pair.s2)}"
            ),
        ),
    ]
    witnesses: list[object] = [w for w in (euclid, pair) if w is not None]
    answer = Answer.YES if not witnesses else Answer.NO
    return Verdict(
        answer=answer,
        constructor=COXETER,
        prop=HYPERBOLIC,
        trace=tuple(trace),
        witnesses=tuple(witnesses),
    )


@dataclass(frozen=True)
class InfiniteCliqueWitness:
    """A clique of the presentation graph whose parabolic subgroup is
    infinite; `core` is an irreducible subsystem that is not of finite type."""

    clique: VertexSet
    core: VertexSet
    type_name: str


def verify_infinite_clique_witness(
    cg: CoxeterPresentationGraph, wit: InfiniteCliqueWitness
) -> bool:
    from .graphs import is_clique

    if not is_clique(cg.graph, wit.clique) or not (wit.core <= wit.clique):
        return False
    t = _classify_if_irreducible(coxeter_matrix(cg), wit.core)
    return t is not None and t.kind is not DiagramKind.FINITE and t.name == wit.type_name


def coxeter_virtually_free(cg: CoxeterPresentationGraph) -> Verdict:
    """Virtual freeness of the Coxeter group: chordal graph plus finite
    parabolics on all maximal cliques."""
    g = cg.graph
    mat = coxeter_matrix(cg)
    cert = chordality(g)
    trace: list[TraceStep] = []
    witnesses: list[object] = []
    if isinstance(cert, ChordlessCycleWitness):
        trace.append(
            TraceStep(
                criterion="graph is chordal",
                anchor=MIHALIK_TSCHANTZ_ANCHOR,
                outcome=f"chordless cycle {_names(g, cert.cycle)}",
            )
        )
        return Verdict(
            Answer.NO, COXETER, VIRTUALLY_FREE, tuple(trace), (cert,)
        )
    trace.append(
        TraceStep(
            criterion="graph is chordal",
            anchor=MIHALIK_TSCHANTZ_ANCHOR,
            outcome="perfect elimination ordering found",
        )
    )
    witnesses.append(cert)
    for clique in maximal_cliques(g):
        if is_finite_system(mat, clique):
            continue
        core = next(
            comp
            for comp in diagram_components(mat, clique)
            if _classify_connected(mat, tuple(sorted(comp))).kind
            is not DiagramKind.FINITE
        )
        t = _classify_connected(mat, tuple(sorted(core)))
        wit = InfiniteCliqueWitness(
            clique=frozenset(clique), core=core, type_name=t.name
        )
        trace.append(
            TraceStep(
                criterion="every maximal clique generates a finite parabolic",
                anchor=MIHALIK_TSCHANTZ_ANCHOR,
                outcome=(
                    f"clique {_names(g, clique)} is infinite "
                    f"({t.name} on {_names(g, core)})"
                ),
            )
        )
        return Verdict(
            Answer.NO, COXETER, VIRTUALLY_FREE, tuple(trace), (wit,)
        )
    trace.append(
        TraceStep(
            criterion="every maximal clique generates a finite parabolic",
            anchor=MIHALIK_TSCHANTZ_ANCHOR,
            outcome="all maximal cliques finite",
        )
    )
    return Verdict(
        Answer.YES, COXETER, VIRTUALLY_FREE, tuple(trace), tuple(witnesses)
    )
