"""Decomposition invariants, the transport formula, and asymptotic orders."""

import random
from fractions import Fraction as F

import pytest

from oracles import (
    brute_force_zariski,
    plane_model,
    random_pseudoeffective,
    random_tower,
)
from surflat import (
    DivisorClass,
    DualGraph,
    PairModel,
    germ_surface,
    sigma,
    transport_redundant,
    zariski_decompose,
)
from surflat.errors import (
    InvariantViolationError,
    NotRedundantError,
    NoZariskiDecompositionError,
    UnknownNameError,
)
from test_birational import fibration_germ, node_blown


def test_nef_divisor_has_empty_negative_part():
    model = plane_model()
    zd = zariski_decompose(model, DivisorClass.of([2]))
    assert zd.negative_coeffs == {}
    assert zd.positive == DivisorClass.of([2])
    assert zd.is_nef_trivial()
    assert zd.certificate.valid and zd.certificate.minors == ()
    zd.check()


def test_nodal_fiber_decomposition():
    model = node_blown()
    zd = zariski_decompose(model, -model.canonical)
    assert zd.negative_coeffs == {"C": F(1, 2)}
    assert zd.positive == model.class_of_combination({"C": F(1, 2), "E": 1})
    assert zd.negative_class == model.curve_class("C").scale(F(1, 2))
    assert zd.divisor == -model.canonical
    assert zd.support == ("C",)
    assert zd.coefficient("C") == F(1, 2)
    assert zd.coefficient("E") == 0
    with pytest.raises(UnknownNameError):
        zd.coefficient("Z")
    zd.check()


def test_decomposition_accepts_combination_input():
    model = node_blown()
    zd = zariski_decompose(model, {"C": 1, "E": 1})
    assert zd.negative_coeffs == {"C": F(1, 2)}


def test_non_pseudoeffective_raises():
    model = plane_model()
    with pytest.raises(NoZariskiDecompositionError):
        zariski_decompose(model, DivisorClass.of([-1]))


def test_germ_decomposition_matches_graph_coefficients():
    from surflat import resolve_coefficients

    graph = DualGraph.chain([-2, -3, -2])
    model = germ_surface(graph)
    zd = zariski_decompose(model, -model.canonical)
    assert zd.negative_coeffs == resolve_coefficients(graph)
    assert zd.negative_coeffs == {"E1": F(1, 4), "E2": F(1, 2), "E3": F(1, 4)}
    zd.check()


def test_zero_coefficients_are_dropped():
    # H pulled back is orthogonal to E: the support solve returns 0 on E,
    # which must not linger in the negative part
    model = plane_model().blow_up({"L1": 1}, "E")
    zd = zariski_decompose(model, DivisorClass.of([1, 0]))
    assert zd.negative_coeffs == {}
    assert zd.certificate.curve_indices == ()


def test_oracle_agreement_on_fixed_instances():
    rng = random.Random(5)
    for _ in range(25):
        model = random_tower(rng)
        divisor = random_pseudoeffective(rng, model)
        zd = zariski_decompose(model, divisor)
        positive, coeffs = brute_force_zariski(model, divisor)
        assert positive == zd.positive
        assert coeffs == zd.negative_coeffs
        zd.check()


# --- sigma ---------------------------------------------------------------------


def test_sigma_depth_zero_reads_coefficient():
    model = node_blown()
    assert sigma(model, -model.canonical, "C") == F(1, 2)
    assert sigma(model, -model.canonical, "E") == 0


def test_sigma_along_chain():
    model = node_blown()
    chain = [{"C": 1, "E": 1}, {"C": 1, "E": 1, "X1": 1}]
    assert sigma(model, -model.canonical, chain) == 1
    assert sigma(model, -model.canonical, [{"C": 1, "E": 1}]) == F(1, 2)
    # a free point never acquires asymptotic order
    assert sigma(model, -model.canonical, [{}]) == 0


def test_sigma_rejects_empty_chain():
    model = node_blown()
    with pytest.raises(InvariantViolationError):
        sigma(model, -model.canonical, [])


# --- transport through a redundant blow-up ---------------------------------------


def test_transport_agrees_with_recompute_on_germ():
    graph = DualGraph.chain([-3, -3])
    model = germ_surface(graph)
    zd = zariski_decompose(model, -model.canonical)
    assert zd.negative_coeffs == {"E1": F(1, 2), "E2": F(1, 2)}
    transported = transport_redundant(zd, {"E1": 1, "E2": 1}, F(1, 2), name="E3")
    child = transported.model
    # transported divisor is f*D + (mult_boundary - 1)E: the exceptional
    # carries no boundary, so the deficit lands on the divisor itself
    expected = (-model.canonical).pad(child.rank) - child.curve_class("E3").scale(F(1, 2))
    assert transported.divisor == expected
    recomputed = zariski_decompose(child, transported.divisor)
    assert transported.negative_coeffs == recomputed.negative_coeffs
    assert transported.positive == recomputed.positive
    # coefficient of the exceptional: mult_p(N) + mult_p(boundary) - 1
    assert transported.negative_coeffs["E3"] == F(1, 2) + F(1, 2) + F(1, 2) - 1
    assert transported.negative_coeffs["E1"] == F(1, 2)
    transported.check()


def test_transport_exceptional_coefficient_drops_out_at_threshold():
    # mult exactly 1 puts the new exceptional at coefficient 0: transported
    # decomposition exists but the exceptional is not in the support
    germ = fibration_germ()
    pair = PairModel(germ, {"C": 1})
    zd = pair.decomposition()
    transported = transport_redundant(zd, {"C": 1}, 1, name="E")
    assert "E" not in transported.negative_coeffs
    transported.check()


def test_transport_refuses_non_redundant_point():
    model = node_blown()
    zd = zariski_decompose(model, -model.canonical)
    with pytest.raises(NotRedundantError):
        transport_redundant(zd, {"C": 1}, 0)
    with pytest.raises(NotRedundantError):
        transport_redundant(zd, {"E": 1}, F(1, 2))
