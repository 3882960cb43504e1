import math
import random
import time
from itertools import combinations

import pytest

from graphgroups.coxeter import (
    INF,
    CommutingInfinitePairWitness,
    DiagramKind,
    EuclideanSubdiagramWitness,
    InfiniteCliqueWitness,
    classify_irreducible,
    coxeter_graph,
    coxeter_matrix,
    diagram_components,
    find_commuting_infinite_pair,
    find_euclidean_subdiagram,
    gram_matrix,
    gram_signature,
    is_finite_system,
    matrix_from_entries,
    moussong_hyperbolic,
    coxeter_virtually_free,
    verify_commuting_pair_witness,
    verify_euclidean_witness,
    verify_infinite_clique_witness,
)
from graphgroups.errors import DeadlineExceeded, InputError, ResourceLimitError
from graphgroups.graphs import simplicial_graph
from graphgroups.shape import ChordlessCycleWitness
from graphgroups.verdict import Answer


def presentation(n, labelled_edges, names=None):
    """labelled_edges: {(u,v): phi}; missing pairs get infinite order."""
    g = simplicial_graph(n, list(labelled_edges), names=names)
    return coxeter_graph(g, labelled_edges)


def path_matrix(labels):
    """Diagram path 0-1-...-k with the given consecutive labels; rest commute."""
    return matrix_from_entries(
        len(labels) + 1, {(i, i + 1): m for i, m in enumerate(labels)}
    )


def cycle_matrix(k, label=3):
    entries = {(i, (i + 1) % k): label for i in range(k)}
    return matrix_from_entries(k, {tuple(sorted(e)): m for e, m in entries.items()})


def tripod_matrix(leg_lengths, labels=None):
    """Branch node 0 with legs of the given edge lengths; labels maps each
    (leg index, edge index along leg) to a value, default 3."""
    entries = {}
    nxt = 1
    for li, length in enumerate(leg_lengths):
        prev = 0
        for ei in range(length):
            m = 3 if labels is None else labels.get((li, ei), 3)
            entries[(prev, nxt) if prev < nxt else (nxt, prev)] = m
            prev = nxt
            nxt += 1
    return matrix_from_entries(nxt, entries)


# --------------------------------------------------------------------------


class TestMatrixConstruction:
    def test_edge_label(self):
        cg = presentation(2, {(0, 1): 3})
        mat = coxeter_matrix(cg)
        assert mat.m(0, 1) == 3 and mat.m(1, 0) == 3 and mat.m(0, 0) == 1

    def test_missing_edge_is_infinite(self):
        cg = presentation(2, {})
        assert coxeter_matrix(cg).m(0, 1) == INF

    def test_triangle_labels(self):
        cg = presentation(3, {(0, 1): 2, (1, 2): 3, (0, 2): 3})
        mat = coxeter_matrix(cg)
        assert (mat.m(0, 1), mat.m(1, 2), mat.m(0, 2)) == (2, 3, 3)

    def test_rejects_small_label(self):
        with pytest.raises(InputError):
            presentation(2, {(0, 1): 1})

    def test_rejects_unlabelled_edge(self):
        g = simplicial_graph(2, [(0, 1)])
        with pytest.raises(InputError):
            coxeter_graph(g, {})


class TestDiagramComponents:
    def test_c4_all_label_2(self):
        # presentation C4 with commuting edges: non-edges become infinite pairs
        cg = presentation(4, {(0, 1): 2, (1, 2): 2, (2, 3): 2, (0, 3): 2})
        mat = coxeter_matrix(cg)
        assert diagram_components(mat, range(4)) == (
            frozenset({0, 2}),
            frozenset({1, 3}),
        )

    def test_path_is_one_component(self):
        assert diagram_components(path_matrix([3, 3]), range(3)) == (
            frozenset({0, 1, 2}),
        )

    def test_all_commuting_gives_singletons(self):
        mat = matrix_from_entries(3, {})
        assert diagram_components(mat, range(3)) == (
            frozenset({0}),
            frozenset({1}),
            frozenset({2}),
        )


# --------------------------------------------------------------------------
# The classification tables, each shape checked against the Gram oracle.


def _diagram_zoo():
    """Every finite and affine family at a spread of ranks, plus indefinite
    spot checks. Yields (matrix, expected_kind, expected_name)."""
    fin = DiagramKind.FINITE
    aff = DiagramKind.AFFINE
    ind = DiagramKind.INDEFINITE
    yield matrix_from_entries(1, {}), fin, "A1"
    yield path_matrix([3]), fin, "A2"
    yield path_matrix([4]), fin, "B2"
    for m in (5, 6, 7, 12):
        yield path_matrix([m]), fin, f"I2({m})"
    yield matrix_from_entries(2, {(0, 1): INF}), aff, "~A1"
    for k in range(3, 9):
        yield path_matrix([3] * (k - 1)), fin, f"A{k}"
        yield path_matrix([4] + [3] * (k - 2)), fin, f"B{k}"
        yield path_matrix([3] * (k - 2) + [4]), fin, f"B{k}"
    for k in range(4, 9):
        yield tripod_matrix([1, 1, k - 3]), fin, f"D{k}"
    yield tripod_matrix([1, 2, 2]), fin, "E6"
    yield tripod_matrix([1, 2, 3]), fin, "E7"
    yield tripod_matrix([1, 2, 4]), fin, "E8"
    yield path_matrix([3, 4, 3]), fin, "F4"
    yield path_matrix([5, 3]), fin, "H3"
    yield path_matrix([3, 5]), fin, "H3"
    yield path_matrix([5, 3, 3]), fin, "H4"
    for k in range(2, 9):
        yield cycle_matrix(k + 1), aff, f"~A{k}"
    for k in range(3, 8):
        labels = {(2, k - 3): 4}  # outermost edge of the long leg
        yield tripod_matrix([1, 1, k - 2], labels), aff, f"~B{k}"
    for k in range(2, 8):
        yield path_matrix([4] + [3] * (k - 2) + [4]), aff, f"~C{k}"
    yield tripod_matrix([1, 1, 1, 1]), aff, "~D4"
    for k in range(5, 9):
        yield _dtilde_matrix(k), aff, f"~D{k}"
    yield tripod_matrix([2, 2, 2]), aff, "~E6"
    yield tripod_matrix([1, 3, 3]), aff, "~E7"
    yield tripod_matrix([1, 2, 5]), aff, "~E8"
    yield path_matrix([3, 3, 4, 3]), aff, "~F4"
    yield path_matrix([3, 4, 3, 3]), aff, "~F4"
    yield path_matrix([3, 6]), aff, "~G2"
    # indefinite spot checks
    yield path_matrix([3, 7]), ind, "indefinite"
    yield path_matrix([5, 5]), ind, "indefinite"
    yield path_matrix([4, 4, 4]), ind, "indefinite"
    yield cycle_matrix(4, label=4), ind, "indefinite"
    yield matrix_from_entries(3, {(0, 1): 3, (1, 2): 3, (0, 2): INF}), ind, "indefinite"
    yield tripod_matrix([1, 1, 1], {(0, 0): 4, (1, 0): 4}), ind, "indefinite"
    yield tripod_matrix([2, 2, 3]), ind, "indefinite"
    yield tripod_matrix([1, 3, 4]), ind, "indefinite"
    yield tripod_matrix([1, 2, 6]), ind, "indefinite"


def _dtilde_matrix(k):
    """~D_k: forks at both ends of an all-3 chain, k+1 vertices."""
    n = k + 1
    entries = {}
    chain = list(range(2, n - 2))
    entries[(0, chain[0])] = 3
    entries[(1, chain[0])] = 3
    for a, b in zip(chain, chain[1:]):
        entries[(a, b)] = 3
    entries[(chain[-1], n - 2)] = 3
    entries[(chain[-1], n - 1)] = 3
    return matrix_from_entries(n, {tuple(sorted(e)): m for e, m in entries.items()})


class TestClassification:
    def test_zoo_names(self):
        for mat, kind, name in _diagram_zoo():
            t = classify_irreducible(mat, range(mat.n))
            assert (t.kind, t.name) == (kind, name), (
                f"expected {kind.value} {name}, got {t.kind.value} {t.name} "
                f"for rows {mat.rows}"
            )

    def test_zoo_gram_crosscheck(self):
        for mat, kind, _ in _diagram_zoo():
            sig = gram_signature(gram_matrix(mat, range(mat.n)))
            if kind is DiagramKind.FINITE:
                assert sig.kind == "positive-definite"
            elif kind is DiagramKind.AFFINE:
                assert sig.kind == "positive-semidefinite" and sig.nullity == 1
            else:
                assert sig.kind == "indefinite"

    def test_rejects_reducible(self):
        with pytest.raises(InputError):
            classify_irreducible(matrix_from_entries(2, {}), range(2))

    def test_random_systems_match_gram(self):
        rng = random.Random(2024)
        labels = [2, 3, 4, 5, 6, INF]
        checked = 0
        while checked < 600:
            n = rng.randint(1, 8)
            entries = {
                (u, v): rng.choice(labels) for u, v in combinations(range(n), 2)
            }
            mat = matrix_from_entries(n, entries)
            for comp in diagram_components(mat, range(n)):
                t = classify_irreducible(mat, comp)
                sig = gram_signature(gram_matrix(mat, comp))
                assert (t.kind is DiagramKind.FINITE) == (
                    sig.kind == "positive-definite"
                )
                assert (t.kind is DiagramKind.AFFINE) == (
                    sig.kind == "positive-semidefinite" and sig.nullity == 1
                )
                checked += 1


class TestFiniteSystem:
    def test_empty_is_finite(self):
        assert is_finite_system(path_matrix([3, 3]), [])

    def test_a3_clique(self):
        cg = presentation(3, {(0, 1): 3, (1, 2): 3, (0, 2): 2})
        assert is_finite_system(coxeter_matrix(cg), range(3))

    def test_affine_triangle_not_finite(self):
        cg = presentation(3, {(0, 1): 3, (1, 2): 3, (0, 2): 3})
        assert not is_finite_system(coxeter_matrix(cg), range(3))

    def test_monotone_under_subsets(self):
        rng = random.Random(5)
        labels = [2, 3, 4, 5, 6, INF]
        for _ in range(120):
            n = rng.randint(1, 6)
            mat = matrix_from_entries(
                n, {(u, v): rng.choice(labels) for u, v in combinations(range(n), 2)}
            )
            for size in range(n + 1):
                for s in combinations(range(n), size):
                    if is_finite_system(mat, s):
                        for sub in combinations(s, max(0, size - 1)):
                            assert is_finite_system(mat, sub)


class TestGram:
    def test_single_vertex(self):
        sig = gram_signature(gram_matrix(matrix_from_entries(1, {}), [0]))
        assert sig.kind == "positive-definite"

    def test_infinite_pair(self):
        B = gram_matrix(matrix_from_entries(2, {(0, 1): INF}), [0, 1])
        assert B[0, 1] == -1.0
        sig = gram_signature(B)
        assert sig.kind == "positive-semidefinite" and sig.nullity == 1
        assert max(abs(e - x) for e, x in zip(sig.eigenvalues, (0.0, 2.0))) < 1e-12

    def test_affine_triangle_eigenvalues(self):
        sig = gram_signature(gram_matrix(cycle_matrix(3), range(3)))
        assert sig.kind == "positive-semidefinite" and sig.nullity == 1
        assert max(abs(e - x) for e, x in zip(sig.eigenvalues, (0.0, 1.5, 1.5))) < 1e-12

    def test_rejects_bad_tolerance(self):
        with pytest.raises(InputError):
            gram_signature(gram_matrix(matrix_from_entries(1, {}), [0]), tol=0)


# --------------------------------------------------------------------------
# Searches


def random_matrix(rng, n, labels=(2, 2, 3, 4, 5, 6, INF, INF)):
    return matrix_from_entries(
        n, {(u, v): rng.choice(labels) for u, v in combinations(range(n), 2)}
    )


class TestEuclideanSearch:
    def test_affine_triangle(self):
        wit = find_euclidean_subdiagram(cycle_matrix(3), 3)
        assert wit == EuclideanSubdiagramWitness(
            vertices=frozenset({0, 1, 2}), type_name="~A2"
        )
        assert verify_euclidean_witness(cycle_matrix(3), wit)

    def test_finite_complete_system(self):
        # B4 diagram: positive definite, so no affine subset exists
        mat = path_matrix([4, 3, 3])
        assert find_euclidean_subdiagram(mat, 3) is None

    def test_g2_tilde_triangle(self):
        cg = presentation(3, {(0, 1): 2, (1, 2): 3, (0, 2): 6})
        wit = find_euclidean_subdiagram(coxeter_matrix(cg), 3)
        assert wit.type_name == "~G2" and wit.vertices == frozenset({0, 1, 2})

    def test_min_rank_excludes_infinite_pair(self):
        mat = matrix_from_entries(2, {(0, 1): INF})
        assert find_euclidean_subdiagram(mat, 3) is None
        wit = find_euclidean_subdiagram(mat, 2)
        assert wit is not None and wit.type_name == "~A1"

    def test_large_affine_found_by_walkers(self):
        for k in range(6, 10):
            mat = cycle_matrix(k)
            wit = find_euclidean_subdiagram(mat, 3)
            assert wit == EuclideanSubdiagramWitness(
                vertices=frozenset(range(k)), type_name=f"~A{k - 1}"
            )
        mat = path_matrix([4] + [3] * 5 + [4])
        wit = find_euclidean_subdiagram(mat, 3)
        assert wit.type_name == "~C7" and wit.vertices == frozenset(range(8))
        wit = find_euclidean_subdiagram(_dtilde_matrix(6), 3)
        assert wit.type_name == "~D6"
        wit = find_euclidean_subdiagram(tripod_matrix([1, 3, 3]), 3)
        assert wit.type_name == "~E7"
        labels = {(2, 3): 4}
        wit = find_euclidean_subdiagram(tripod_matrix([1, 1, 4], labels), 3)
        assert wit.type_name == "~B6"

    def test_cap_and_pattern_mode(self):
        mat = cycle_matrix(21)
        with pytest.raises(ResourceLimitError):
            find_euclidean_subdiagram(mat, 3)
        wit = find_euclidean_subdiagram(mat, 3, pattern_mode=True)
        assert wit.type_name == "~A20"

    def test_deadline(self):
        mat = cycle_matrix(12)
        with pytest.raises(DeadlineExceeded):
            find_euclidean_subdiagram(mat, 3, deadline=time.monotonic() - 1)


class TestCommutingPairSearch:
    def test_c4_all_commuting(self):
        cg = presentation(4, {(0, 1): 2, (1, 2): 2, (2, 3): 2, (0, 3): 2})
        wit = find_commuting_infinite_pair(coxeter_matrix(cg))
        assert wit == CommutingInfinitePairWitness(
            s1=frozenset({0, 2}), s2=frozenset({1, 3})
        )
        assert verify_commuting_pair_witness(coxeter_matrix(cg), wit)

    def test_hyperbolic_triangle_has_none(self):
        cg = presentation(3, {(0, 1): 2, (1, 2): 3, (0, 2): 7})
        assert find_commuting_infinite_pair(coxeter_matrix(cg)) is None

    def test_finite_path_has_none(self):
        cg = presentation(3, {(0, 1): 3, (1, 2): 3})
        assert find_commuting_infinite_pair(coxeter_matrix(cg)) is None

    def test_lanner_times_infinite_pair(self):
        # (2,3,7) triangle group commuting with an infinite dihedral
        entries = {(0, 1): 3, (1, 2): 7, (3, 4): INF}
        mat = matrix_from_entries(5, entries)
        wit = find_commuting_infinite_pair(mat)
        assert wit == CommutingInfinitePairWitness(
            s1=frozenset({3, 4}), s2=frozenset({0, 1, 2})
        )

    def test_modes_agree_on_random_systems(self):
        rng = random.Random(99)
        for _ in range(150):
            n = rng.randint(1, 9)
            mat = random_matrix(rng, n)
            fast = find_commuting_infinite_pair(mat, mode="optimized")
            slow = find_commuting_infinite_pair(mat, mode="oracle")
            assert fast == slow
            if fast is not None:
                assert verify_commuting_pair_witness(mat, fast)

    def test_oracle_cap(self):
        with pytest.raises(ResourceLimitError):
            find_commuting_infinite_pair(cycle_matrix(21), mode="oracle")

    def test_unknown_mode(self):
        with pytest.raises(InputError):
            find_commuting_infinite_pair(cycle_matrix(3), mode="fastest")


class TestMoussong:
    def test_affine_triangle_not_hyperbolic(self):
        cg = presentation(3, {(0, 1): 3, (1, 2): 3, (0, 2): 3})
        v = moussong_hyperbolic(cg)
        assert v.answer is Answer.NO
        assert any(
            isinstance(w, EuclideanSubdiagramWitness) and w.type_name == "~A2"
            for w in v.witnesses
        )

    def test_hyperbolic_triangle(self):
        cg = presentation(3, {(0, 1): 2, (1, 2): 3, (0, 2): 7})
        assert moussong_hyperbolic(cg).answer is Answer.YES

    def test_c4_commuting_pair(self):
        cg = presentation(4, {(0, 1): 2, (1, 2): 2, (2, 3): 2, (0, 3): 2})
        v = moussong_hyperbolic(cg)
        assert v.answer is Answer.NO
        assert any(isinstance(w, CommutingInfinitePairWitness) for w in v.witnesses)

    def test_path_presentation_is_hyperbolic(self):
        cg = presentation(3, {(0, 1): 3, (1, 2): 3})
        assert moussong_hyperbolic(cg).answer is Answer.YES

    def test_yes_implies_no_euclidean(self):
        rng = random.Random(31)
        for _ in range(60):
            n = rng.randint(1, 7)
            edges = {
                (u, v): rng.choice([2, 3, 4, 6])
                for u, v in combinations(range(n), 2)
                if rng.random() < 0.6
            }
            cg = presentation(n, edges)
            v = moussong_hyperbolic(cg)
            mat = coxeter_matrix(cg)
            if v.answer is Answer.YES:
                assert find_euclidean_subdiagram(mat, 3) is None
            else:
                for w in v.witnesses:
                    if isinstance(w, EuclideanSubdiagramWitness):
                        assert verify_euclidean_witness(mat, w)
                    else:
                        assert verify_commuting_pair_witness(mat, w)


class TestCoxeterVirtuallyFree:
    def test_path_labels_33(self):
        cg = presentation(3, {(0, 1): 3, (1, 2): 3})
        assert coxeter_virtually_free(cg).answer is Answer.YES

    def test_affine_triangle_infinite_clique(self):
        cg = presentation(3, {(0, 1): 3, (1, 2): 3, (0, 2): 3})
        v = coxeter_virtually_free(cg)
        assert v.answer is Answer.NO
        (wit,) = [w for w in v.witnesses if isinstance(w, InfiniteCliqueWitness)]
        assert wit.clique == frozenset({0, 1, 2}) and wit.type_name == "~A2"
        assert verify_infinite_clique_witness(cg, wit)

    def test_c4_not_chordal(self):
        cg = presentation(4, {(0, 1): 2, (1, 2): 3, (2, 3): 2, (0, 3): 3})
        v = coxeter_virtually_free(cg)
        assert v.answer is Answer.NO
        assert any(isinstance(w, ChordlessCycleWitness) for w in v.witnesses)
