"""Pair models, redundancy, the contraction runner, and the ratio estimate."""

from fractions import Fraction as F

import pytest

from oracles import plane_model
from surflat import (
    DualGraph,
    PairModel,
    check_mmp_redundant_factorization,
    enumerate_chains,
    epsilon_gap,
    germ_surface,
    is_redundant_point,
    lct_sigma_estimate,
    pklt_certificate,
    potential_log_discrepancy,
    redundant_blow_up,
    run_anticanonical_mmp,
)
from surflat.errors import (
    InvariantViolationError,
    NotRedundantError,
    UnknownNameError,
)
from test_birational import fibration_germ, node_blown


def test_boundary_validation():
    model = node_blown()
    with pytest.raises(InvariantViolationError):
        PairModel(model, {"C": F(3, 2)})
    with pytest.raises(InvariantViolationError):
        PairModel(model, {"C": F(-1, 4)})
    with pytest.raises(UnknownNameError):
        PairModel(model, {"Z": F(1, 2)})
    pair = PairModel(model, {"E": 0, "C": F(1, 3)})
    assert pair.boundary == {"C": F(1, 3)}
    assert pair.boundary_coefficient("E") == 0
    assert pair.boundary_multiplicity({"C": 2, "E": 1}) == F(2, 3)
    assert pair.is_boundary_klt()
    assert not PairModel(model, {"C": 1}).is_boundary_klt()


def test_anti_log_canonical_class():
    model = node_blown()
    pair = PairModel(model, {"C": F(1, 2)})
    expected = -(model.canonical + model.curve_class("C").scale(F(1, 2)))
    assert pair.anti_log_canonical_class() == expected
    assert pair.decomposition().divisor == expected


def test_potential_log_discrepancy_of_tracked_curves():
    pair = PairModel(node_blown())
    # abar(C) = (1 - 0) - 1/2, abar(E) = 1 - 0
    assert potential_log_discrepancy(pair, "C") == F(1, 2)
    assert potential_log_discrepancy(pair, "E") == 1
    with pytest.raises(UnknownNameError):
        potential_log_discrepancy(pair, "Z")


def test_potential_log_discrepancy_along_chain():
    pair = PairModel(node_blown())
    assert potential_log_discrepancy(pair, [{"C": 1, "E": 1}]) == 2 - F(1, 2)
    assert (
        potential_log_discrepancy(pair, [{"C": 1, "E": 1}, {"C": 1, "E": 1, "Q1": 1}],
                                  names=["Q1", "Q2"])
        == 3 - 1
    )


# --- redundant points -------------------------------------------------------------


def test_redundancy_verdict_splits_multiplicities():
    pair = PairModel(node_blown())
    verdict = is_redundant_point(pair, {"C": 1})
    assert not verdict
    assert verdict.mult_negative == F(1, 2)
    assert verdict.mult_boundary == 0
    assert verdict.total == F(1, 2)
    assert is_redundant_point(pair, {"C": 2}).redundant


def test_redundancy_on_canonical_germ():
    # A_1 germ: both coefficients vanish, so no point is redundant
    pair = PairModel(germ_surface(DualGraph.chain([-2, -2])))
    assert pair.decomposition().negative_coeffs == {}
    assert not is_redundant_point(pair, {"E1": 1, "E2": 1})
    # at [-3,-3] the edge point is exactly at threshold
    pair = PairModel(germ_surface(DualGraph.chain([-3, -3])))
    verdict = is_redundant_point(pair, {"E1": 1, "E2": 1})
    assert verdict.redundant and verdict.total == 1


def test_redundant_blow_up_round_trip():
    pair = PairModel(fibration_germ(), {"C": 1})
    verdict = is_redundant_point(pair, {"C": 2})
    assert verdict.redundant and verdict.total == 2
    up_pair, transported = redundant_blow_up(pair, {"C": 2})
    assert up_pair.boundary == {"C": 1}
    assert transported.negative_coeffs == {"E1": 1}
    recomputed = up_pair.decomposition()
    assert recomputed.negative_coeffs == transported.negative_coeffs
    assert recomputed.positive == transported.positive
    # boundary multiplicity 1 already makes a simple point on C redundant,
    # so the failure case is a free point
    assert is_redundant_point(pair, {"C": 1}).total == 1
    with pytest.raises(NotRedundantError):
        redundant_blow_up(pair, {})


# --- contraction runner ------------------------------------------------------------


def test_mmp_on_nef_pair_is_empty():
    trace = run_anticanonical_mmp(PairModel(plane_model()))
    assert trace.steps == ()
    assert trace.contracted == ()
    assert trace.final_model_nef and trace.final_klt
    assert trace.total_discrepancies == {}
    assert trace.max_negative_coefficient is None
    certificate = pklt_certificate(PairModel(plane_model()))
    assert certificate.certified and certificate.max_coefficient is None


def test_mmp_contracts_nodal_fiber_component():
    trace = run_anticanonical_mmp(PairModel(node_blown()))
    assert trace.contracted == ("C",)
    step = trace.steps[0]
    assert step.self_intersection == -4
    assert step.anti_degree == -2
    assert step.exceptional_coefficient == F(1, 2)
    assert step.discrepancy == F(-1, 2)
    assert step.was_smooth
    assert trace.final_pair.surface.lattice.rank == 1
    assert not trace.final_pair.surface.smooth
    assert trace.final_model_nef and trace.final_klt
    assert trace.total_discrepancies == {"C": F(-1, 2)}
    assert trace.max_negative_coefficient == F(1, 2)
    certificate = pklt_certificate(PairModel(node_blown()))
    assert certificate.certified
    assert certificate.max_coefficient == F(1, 2)
    assert certificate.witness.contracted == ("C",)


def test_factorization_identifies_smooth_blow_down():
    # nodal plane cubic, node blown up, boundary 3/4 on the strict transform:
    # -(K + boundary) . E = -1/2 so the program contracts the (-1)-curve E,
    # and the image point has multiplicity 2 * 3/4 >= 1 downstairs
    model = plane_model(with_cubic=True).blow_up({"D": 2}, "E")
    pair = PairModel(model, {"D": F(3, 4)})
    assert pair.decomposition().negative_coeffs == {"E": F(1, 2)}
    trace = run_anticanonical_mmp(pair)
    assert trace.contracted == ("E",)
    assert trace.steps[0].self_intersection == -1
    assert trace.steps[0].canonical_degree == -1
    assert trace.final_model_nef and trace.final_klt
    assert trace.total_discrepancies == {"E": F(-1, 2)}
    report = check_mmp_redundant_factorization(trace)
    assert report.ok
    (step,) = report.steps
    assert step.kind == "redundant-blow-down"
    assert step.verified
    assert step.point_multiplicity == F(3, 2)


def test_factorization_passes_resolution_identical_steps():
    model = plane_model()
    for name in ("E1", "E2", "E3", "E4"):
        model = model.blow_up({"L1": 1}, name)
    trace = run_anticanonical_mmp(PairModel(model))
    assert trace.contracted == ("L1",)
    assert trace.steps[0].self_intersection == -3
    assert trace.steps[0].exceptional_coefficient == F(1, 3)
    assert trace.total_discrepancies == {"L1": F(-1, 3)}
    report = check_mmp_redundant_factorization(trace)
    assert report.ok
    (step,) = report.steps
    assert step.kind == "resolution-identical"
    assert step.point_multiplicity is None


# --- chain enumeration and the ratio estimate ---------------------------------------


def test_enumerate_chains_is_deterministic():
    model = node_blown()
    first = [(chain, names) for chain, names in enumerate_chains(model, 2)]
    second = [(chain, names) for chain, names in enumerate_chains(model, 2)]
    assert first == second
    assert len(first) == 19
    depth_one = [c[0] for c, _ in first if len(c) == 1]
    assert depth_one == [{"C": 1, "E": 1}, {"C": 1}, {"E": 1}]
    assert all(names == ["Q1", "Q2"][: len(chain)] for chain, names in first)


def test_epsilon_gap_values():
    assert epsilon_gap(PairModel(node_blown())) == 1
    assert epsilon_gap(PairModel(plane_model())) is None
    pair = PairModel(germ_surface(DualGraph.chain([-2, -3])))
    assert pair.decomposition().negative_coeffs == {"E1": F(1, 5), "E2": F(2, 5)}
    assert epsilon_gap(pair) == F(3, 2)


def test_lct_sigma_estimate_on_nodal_fiber():
    estimate = lct_sigma_estimate(PairModel(node_blown()), 1, collect_details=True)
    assert estimate.min_ratio == 2
    assert estimate.certified_lower_bound == 2
    assert estimate.epsilon == 1
    assert estimate.binding == "C"
    # one tracked-curve entry plus three depth-one chains
    assert len(estimate.details) == 4
    for entry in estimate.details:
        assert entry.log_discrepancy - entry.order >= estimate.epsilon * entry.order


def test_lct_sigma_estimate_guards_its_bound(monkeypatch):
    monkeypatch.setattr("surflat.pairs.epsilon_gap", lambda pair: F(100))
    with pytest.raises(InvariantViolationError):
        lct_sigma_estimate(PairModel(node_blown()), 1)
