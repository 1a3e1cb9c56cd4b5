"""Germ graphs: coefficients, classification, and the desk-scale enumeration."""

import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import charpoly_negative_definite, labeled_trees
from surflat import (
    DualGraph,
    classify,
    enumerate_and_verify,
    germ_surface,
    has_redundant_point,
    resolve_coefficients,
    zariski_decompose,
)
from surflat.dualgraph import canonical_form
from surflat.errors import (
    InvariantViolationError,
    NotNegativeDefiniteError,
)


def test_graph_validation():
    graph = DualGraph((-2, -3), ((1, 0),))
    assert graph.names == ("E1", "E2")
    assert graph.edges == ((0, 1),)
    assert graph.adjacency == ((1,), (0,))
    assert DualGraph.chain([-2, -3, -2]).edges == ((0, 1), (1, 2))
    with pytest.raises(InvariantViolationError):
        DualGraph((-1,))
    with pytest.raises(InvariantViolationError):
        DualGraph((), ())
    with pytest.raises(InvariantViolationError):
        DualGraph((-2, -2), ((0, 0),))
    with pytest.raises(InvariantViolationError):
        DualGraph((-2, -2), ((0, 1), (1, 0)))
    with pytest.raises(InvariantViolationError):
        DualGraph((-2, -2), ((0, 2),))
    with pytest.raises(InvariantViolationError):
        DualGraph((-2, -2))  # disconnected
    with pytest.raises(InvariantViolationError):
        DualGraph((-2, -2), ((0, 1),), ("E", "E"))


def test_resolve_coefficients_known_values():
    assert resolve_coefficients(DualGraph.chain([-5])) == {"E1": F(3, 5)}
    assert resolve_coefficients(DualGraph.chain([-2, -4])) == {
        "E1": F(2, 7),
        "E2": F(4, 7),
    }
    assert resolve_coefficients(DualGraph.chain([-2, -3, -2])) == {
        "E1": F(1, 4),
        "E2": F(1, 2),
        "E3": F(1, 4),
    }
    assert resolve_coefficients(DualGraph.chain([-2, -2, -3, -2])) == {
        "E1": F(2, 11),
        "E2": F(4, 11),
        "E3": F(6, 11),
        "E4": F(3, 11),
    }
    assert resolve_coefficients(DualGraph.chain([-2, -2])) == {"E1": 0, "E2": 0}


def test_semidefinite_graph_is_rejected():
    cycle = DualGraph((-2, -2, -2), ((0, 1), (1, 2), (0, 2)))
    assert not cycle.is_negative_definite()
    with pytest.raises(NotNegativeDefiniteError):
        resolve_coefficients(cycle)
    with pytest.raises(NotNegativeDefiniteError):
        germ_surface(cycle)


def test_redundant_point_detection():
    assert has_redundant_point(DualGraph.chain([-3, -3]))
    assert not has_redundant_point(DualGraph.chain([-2, -2]))
    assert not has_redundant_point(DualGraph.chain([-5]))
    assert not has_redundant_point(DualGraph.chain([-2, -4]))
    # interior edge accumulates 2/5 + 3/5 = 1
    assert has_redundant_point(DualGraph.chain([-2, -2, -3, -2, -2]))


def test_classify_family_tags_ignore_orientation():
    assert classify(DualGraph.chain([-2, -3])).matched_family == "chain[-2x1,-3]"
    assert classify(DualGraph.chain([-3, -2])).matched_family == "chain[-2x1,-3]"
    assert classify(DualGraph.chain([-2, -2, -3])).matched_family == "chain[-2x2,-3]"
    assert classify(DualGraph.chain([-4, -2])).matched_family == "chain[-2,-4]"
    assert classify(DualGraph.chain([-2, -3, -2, -2])).matched_family == "chain[-2,-2,-3,-2]"
    assert classify(DualGraph.chain([-5])).matched_family == "single[-5]"


def test_classify_verdicts():
    canonical = classify(DualGraph.chain([-2, -2]))
    assert canonical.canonical and canonical.klt and canonical.redundant_free
    assert canonical.matched_family == "canonical"

    free = classify(DualGraph.chain([-2, -4]))
    assert free.klt and not free.canonical and free.redundant_free

    redundant = classify(DualGraph.chain([-3, -3]))
    assert redundant.klt and not redundant.redundant_free
    assert redundant.matched_family is None

    # negative definite cycle with coefficients pinned at 1: not klt
    cusp = classify(DualGraph((-3, -2, -2), ((0, 1), (1, 2), (0, 2))))
    assert cusp.b == {"E1": 1, "E2": 1, "E3": 1}
    assert not cusp.klt and not cusp.redundant_free


def test_germ_surface_matches_graph_coefficients():
    graph = DualGraph.chain([-2, -4])
    model = germ_surface(graph)
    assert model.lattice.rank == 3
    for name, weight in zip(graph.names, graph.weights):
        cls = model.curve_class(name)
        assert model.pair(cls, cls) == weight
        # adjunction on rational curves: K.E = -2 - E^2
        assert model.pair(model.canonical, cls) == -2 - weight
    zd = zariski_decompose(model, -model.canonical)
    assert zd.negative_coeffs == resolve_coefficients(graph)
    assert zd.positive == model.nef_axioms[0]


@given(
    data=st.data(),
    n=st.integers(min_value=2, max_value=6),
)
def test_canonical_form_is_relabel_invariant(data, n):
    seq = data.draw(st.lists(st.integers(0, n - 1), min_size=max(n - 2, 0), max_size=max(n - 2, 0)))
    from oracles import prufer_decode

    edges = prufer_decode(seq, n) if n > 2 else ((0, 1),)
    weights = data.draw(st.lists(st.integers(-6, -2), min_size=n, max_size=n))
    perm = data.draw(st.permutations(range(n)))
    permuted_weights = [0] * n
    for i, w in enumerate(weights):
        permuted_weights[perm[i]] = w
    permuted_edges = [(perm[a], perm[b]) for a, b in edges]
    assert canonical_form(weights, edges) == canonical_form(permuted_weights, permuted_edges)


def test_enumeration_bounds_are_guarded():
    with pytest.raises(InvariantViolationError):
        enumerate_and_verify(0, -4)
    with pytest.raises(InvariantViolationError):
        enumerate_and_verify(4, -1)
    with pytest.raises(InvariantViolationError):
        enumerate_and_verify(13, -4)


def brute_force_buckets(max_vertices: int, min_weight: int):
    """All klt negative definite weighted trees within bounds, by Prufer
    enumeration over every labeled tree and every weight assignment."""
    menu = range(-2, min_weight - 1, -1)
    buckets = {"canonical": {}, "free": {}, "redundant": {}}
    for n in range(1, max_vertices + 1):
        for edges in set(labeled_trees(n)):
            for weights in itertools.product(menu, repeat=n):
                graph = DualGraph(tuple(weights), edges)
                if not charpoly_negative_definite(graph.gram()):
                    continue
                verdict = classify(graph)
                if not verdict.klt:
                    continue
                form = canonical_form(weights, edges)
                if not verdict.redundant_free:
                    buckets["redundant"][form] = graph
                elif verdict.canonical:
                    buckets["canonical"][form] = graph
                else:
                    buckets["free"][form] = graph
    return buckets


def test_small_enumeration_against_brute_force():
    report = enumerate_and_verify(4, -4)
    assert report.match
    assert not report.monotonicity_failures
    brute = brute_force_buckets(4, -4)

    assert {r.form for r in report.canonical} == set(brute["canonical"])
    assert {r.form for r in report.redundant_free} == set(brute["free"])
    # the enumerator stops growing redundant graphs, so it sees a subset
    assert {r.form for r in report.redundant_found} <= set(brute["redundant"])

    assert len(report.canonical) == 5
    assert len(report.redundant_free) == 8
    tags = sorted(r.verdict.matched_family for r in report.redundant_free)
    assert tags == sorted(
        [
            "single[-3]",
            "single[-4]",
            "chain[-2x1,-3]",
            "chain[-2x2,-3]",
            "chain[-2x3,-3]",
            "chain[-2,-4]",
            "chain[-2,-3,-2]",
            "chain[-2,-2,-3,-2]",
        ]
    )
    # every redundant-free family within bounds is reachable: nothing missing
    assert report.missing == ()
    assert report.unexpected == ()
