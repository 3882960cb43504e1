"""Words and automorphisms in graph products of finite cyclic groups.

Vertex groups are Z/k (one generator per vertex, order k >= 2): every
decision elsewhere only consumes the order, and one non-trivial element per
vertex group is all the witness constructions need.

Normal forms use per-vertex piles, one deque per generator: a syllable sits
as its exponent on its own pile and as an opaque marker on the pile of every
generator it does not commute with. A new syllable amalgamates with an
earlier one of the same vertex exactly when that entry is still on top of
its pile, and reading pile bottoms back off front-to-back, always preferring
the smallest available vertex, yields the canonical representative of the
shuffle class. Everything runs in O(word length x vertex count).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import InputError
from .graphs import SimplicialGraph, VertexSet, components_within, star
from .shape import SILWitness, verify_sil_witness

Syllable = tuple[int, int]  # (vertex, exponent)


@dataclass(frozen=True)
class GraphProductSpec:
    """Defining data: the graph plus one finite cyclic group order per vertex."""

    graph: SimplicialGraph
    orders: tuple[int, ...]


def graph_product(graph: SimplicialGraph, orders: Sequence[int]) -> GraphProductSpec:
    if len(orders) != graph.n:
        raise InputError(f"expected {graph.n} vertex orders, got {len(orders)}")
    for v, k in enumerate(orders):
        if not isinstance(k, int) or isinstance(k, bool) or k < 2:
            raise InputError(f"vertex {v} needs a finite order >= 2, got {k!r}")
    return GraphProductSpec(graph=graph, orders=tuple(orders))


@dataclass(frozen=True)
class GroupWord:
    """Normal-form word: syllables (vertex, exponent) with exponents in
    [1, order-1], no two amalgamatable syllables, canonically shuffled."""

    syllables: tuple[Syllable, ...]

    def __len__(self) -> int:
        return len(self.syllables)

    @property
    def is_identity(self) -> bool:
        return not self.syllables


EMPTY_WORD = GroupWord(syllables=())


def _validate_syllables(spec: GraphProductSpec, syllables: Iterable[Syllable]) -> None:
    for v, e in syllables:
        if not (0 <= v < spec.graph.n):
            raise InputError(f"syllable vertex {v} outside [0,{spec.graph.n})")
        if not (1 <= e <= spec.orders[v] - 1):
            raise InputError(
                f"exponent {e} for vertex {v} outside [1,{spec.orders[v] - 1}]"
            )


def word(spec: GraphProductSpec, syllables: Iterable[Syllable]) -> GroupWord:
    """Validating constructor; the result is fully reduced and canonical."""
    syllables = list(syllables)
    _validate_syllables(spec, syllables)
    return GroupWord(syllables=_reduce(spec, syllables))


def generator(spec: GraphProductSpec, v: int, exponent: int = 1) -> GroupWord:
    return word(spec, [(v, exponent % spec.orders[v])] if exponent % spec.orders[v] else [])


def _dependence(spec: GraphProductSpec) -> tuple[tuple[int, ...], ...]:
    """dep[v]: vertices other than v whose generators do not commute with v's."""
    g = spec.graph
    return tuple(
        tuple(u for u in range(g.n) if u != v and u not in g.adjacency[v])
        for v in range(g.n)
    )


def _reduce(spec: GraphProductSpec, syllables: Iterable[Syllable]) -> tuple[Syllable, ...]:
    n = spec.graph.n
    orders = spec.orders
    dep = _dependence(spec)
    piles: list[deque] = [deque() for _ in range(n)]
    for v, e in syllables:
        e %= orders[v]
        if e == 0:
            continue
        pile = piles[v]
        if pile and pile[-1] != 0:
            merged = (pile[-1] + e) % orders[v]
            if merged == 0:
                pile.pop()
                for u in dep[v]:
                    piles[u].pop()
            else:
                pile[-1] = merged
        else:
            pile.append(e)
            for u in dep[v]:
                piles[u].append(0)
    out: list[Syllable] = []
    while True:
        ready = next(
            (v for v in range(n) if piles[v] and piles[v][0] != 0), None
        )
        if ready is None:
            break
        out.append((ready, piles[ready].popleft()))
        for u in dep[ready]:
            piles[u].popleft()
    return tuple(out)


def normal_form(spec: GraphProductSpec, w: GroupWord) -> GroupWord:
    """Idempotent canonical form; constant on shuffle classes."""
    _validate_syllables(spec, w.syllables)
    return GroupWord(syllables=_reduce(spec, w.syllables))


def multiply(spec: GraphProductSpec, w1: GroupWord, w2: GroupWord) -> GroupWord:
    return GroupWord(syllables=_reduce(spec, w1.syllables + w2.syllables))


def invert(spec: GraphProductSpec, w: GroupWord) -> GroupWord:
    inverted = [
        (v, spec.orders[v] - e) for (v, e) in reversed(w.syllables)
    ]
    return GroupWord(syllables=_reduce(spec, inverted))


def conjugate(spec: GraphProductSpec, g: GroupWord, w: GroupWord) -> GroupWord:
    """g w g^-1."""
    inv = invert(spec, g)
    return GroupWord(
        syllables=_reduce(spec, g.syllables + w.syllables + inv.syllables)
    )


# --------------------------------------------------------------------------
# Automorphisms given by generator images


@dataclass(frozen=True)
class Automorphism:
    """Map determined by images of the standard generators; relations are
    checked at construction."""

    images: tuple[GroupWord, ...]


def _image_stream(f: Automorphism, syllables: Iterable[Syllable]):
    for v, e in syllables:
        img = f.images[v].syllables
        for _ in range(e):
            yield from img


def apply(spec: GraphProductSpec, f: Automorphism, w: GroupWord) -> GroupWord:
    """Homomorphic extension of the generator images, then normal form."""
    return GroupWord(syllables=_reduce(spec, _image_stream(f, w.syllables)))


def make_automorphism(
    spec: GraphProductSpec, images: Sequence[GroupWord], check: bool = True
) -> Automorphism:
    if len(images) != spec.graph.n:
        raise InputError(f"expected {spec.graph.n} generator images")
    f = Automorphism(images=tuple(images))
    if check:
        for v in range(spec.graph.n):
            power = _reduce(spec, images[v].syllables * spec.orders[v])
            if power:
                raise InputError(
                    f"image of generator {v} violates its order-{spec.orders[v]} relation"
                )
        for (u, v) in spec.graph.edges:
            iu, iv = images[u], images[v]
            comm = _reduce(
                spec,
                iu.syllables
                + iv.syllables
                + invert(spec, iu).syllables
                + invert(spec, iv).syllables,
            )
            if comm:
                raise InputError(
                    f"images of generators {u} and {v} violate their commuting relation"
                )
    return f


def identity_automorphism(spec: GraphProductSpec) -> Automorphism:
    return Automorphism(
        images=tuple(generator(spec, v) for v in range(spec.graph.n))
    )


def inner(spec: GraphProductSpec, g: GroupWord) -> Automorphism:
    """Conjugation by g on every generator."""
    return Automorphism(
        images=tuple(
            conjugate(spec, g, generator(spec, v)) for v in range(spec.graph.n)
        )
    )


def partial_conjugation(
    spec: GraphProductSpec, v: int, exponent: int, component: VertexSet
) -> Automorphism:
    """Conjugate the generators of one component of V - st(v) by g_v^exponent,
    fixing everything else."""
    g = spec.graph
    if not (0 <= v < g.n):
        raise InputError(f"vertex {v} outside [0,{g.n})")
    outside_star = set(range(g.n)) - star(g, v)
    if frozenset(component) not in components_within(g, outside_star):
        raise InputError(
            f"{sorted(component)} is not a connected component of the graph "
            f"minus the star of vertex {v}"
        )
    x = generator(spec, v, exponent)
    images = [
        conjugate(spec, x, generator(spec, u)) if u in component else generator(spec, u)
        for u in range(g.n)
    ]
    return make_automorphism(spec, images)


def compose(spec: GraphProductSpec, f: Automorphism, g: Automorphism) -> Automorphism:
    """f after g: images are apply(f, g(generator))."""
    return Automorphism(
        images=tuple(apply(spec, f, img) for img in g.images)
    )


def equal_on_generators(
    spec: GraphProductSpec, f: Automorphism, g: Automorphism
) -> bool:
    """Since the generators generate, image-wise equality decides equality."""
    return all(
        normal_form(spec, a) == normal_form(spec, b)
        for a, b in zip(f.images, g.images)
    )


# --------------------------------------------------------------------------
# The SIL => Z x Z witness check


@dataclass(frozen=True)
class ZZReport:
    """Outcome of the three checks on the pair (inner, composed partial
    conjugations) attached to a SIL.

    Length growth up to K evidences infinite order; it is not a proof, and
    `caveat` says so in every report.
    """

    commutes: bool
    lengths: tuple[int, ...]
    growth_strict: bool
    growth_bound: bool
    inner_power_trivial_at: Optional[int]
    tracked_vertex: int
    caveat: str = (
        "monotone length growth up to K evidences infinite order; it is "
        "checked, not proved"
    )

    @property
    def passed(self) -> bool:
        return (
            self.commutes
            and self.growth_strict
            and self.growth_bound
            and self.inner_power_trivial_at is None
        )


def zz_witness_verify(
    spec: GraphProductSpec, sil: SILWitness, K: int
) -> ZZReport:
    """Machine-check that a SIL yields commuting automorphisms of unbounded
    word length, the free-abelian obstruction to hyperbolicity.

    Builds a = pc(x, C) o pc(y, C) and f = inner(x y) for the SIL pair (v, w)
    with x, y the standard generators, then verifies (a) f and a commute on
    all generators, (b) the syllable length of a^k applied to a generator in
    C grows strictly and stays >= 4k - 1 for k = 1..K, and (c) f^k is not the
    identity for k = 1..K.
    """
    if K < 1:
        raise InputError(f"K must be >= 1, got {K}")
    if not verify_sil_witness(spec.graph, sil):
        raise InputError("SIL witness fails its invariant check")
    v, w, comp = sil.v, sil.w, sil.component
    pc_x = partial_conjugation(spec, v, 1, comp)
    pc_y = partial_conjugation(spec, w, 1, comp)
    alpha = compose(spec, pc_x, pc_y)
    xy = multiply(spec, generator(spec, v), generator(spec, w))
    f = inner(spec, xy)
    commutes = equal_on_generators(
        spec, compose(spec, f, alpha), compose(spec, alpha, f)
    )
    u = min(comp)
    lengths: list[int] = []
    cur = generator(spec, u)
    for _ in range(K):
        cur = apply(spec, alpha, cur)
        lengths.append(len(cur))
    growth_strict = all(b > a for a, b in zip([1] + lengths, lengths))
    growth_bound = all(l >= 4 * k - 1 for k, l in enumerate(lengths, start=1))
    identity = identity_automorphism(spec)
    trivial_at: Optional[int] = None
    power = identity
    for k in range(1, K + 1):
        power = compose(spec, f, power)
        if equal_on_generators(spec, power, identity):
            trivial_at = k
            break
    return ZZReport(
        commutes=commutes,
        lengths=tuple(lengths),
        growth_strict=growth_strict,
        growth_bound=growth_bound,
        inner_power_trivial_at=trivial_at,
        tracked_vertex=u,
    )
