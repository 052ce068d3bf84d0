import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from setyoung.aumann import SetValuedPath, build_selection_family, default_measures, indefinite_aumann_integral
from setyoung.convex_bodies import ConvexBody, SmoothBallMeasure
from setyoung.errors import InvalidProblem, NonConvergence
from setyoung.inclusions import (
    InclusionProblem,
    Strategy,
    choose_window,
    constant_phi,
    default_strategies,
    integration_by_parts_residual,
    make_phi,
    radius_field_phi,
    rotating_segment_phi,
    solution_funnel,
    solve_first_order,
    solve_second_order,
    stochastic_inclusion_run,
    translate_phi,
)
from setyoung.paths import SampledPath, sample_fbm, time_augmented
from setyoung.young import YoungConfig, young_integral

A, B = 0.45, 0.7


def lipschitz_problem(seed, m=256):
    w = time_augmented(sample_fbm(0.75, 1.0, m, seed=seed))
    phi = radius_field_phi([0.01, 0.01], 1, 2, 0.005, 0.005, 0.005, A)
    return InclusionProblem(phi, [0.5], w, A, B)


def test_registry():
    phi = make_phi({"name": "translate", "body": [[0, 0], [0.1, 0]], "e": 1, "d": 2, "a": 0.1, "b": 0.2,
                    "alpha": 0.5})
    assert phi.name == "translate" and phi.k1 == 0.1 and phi.k2 == 0.2
    assert make_phi({"name": "rotating_segment", "scale": 0.5, "k1": 9.0}).k1 == 9.0
    with pytest.raises(InvalidProblem):
        make_phi({"name": "spiral"})


@pytest.mark.parametrize(
    "phi",
    [
        constant_phi(ConvexBody.box([0, 0], [1, 1]), 1, 2),
        translate_phi(ConvexBody.regular_polygon(4, 0.2), 1, 2, 0.1, 0.1, A),
        radius_field_phi([0.1, 0.0], 1, 2, 0.05, 0.1, 0.1, A),
        rotating_segment_phi(0.3, 2.0, A),
    ],
)
def test_declared_constants_pass_probes(phi):
    w = time_augmented(sample_fbm(0.75, 1.0, 16))
    InclusionProblem(phi, [0.0], w, A, B, r=10.0).check_constants(0)


def test_understated_constant_is_rejected():
    phi = make_phi({"name": "radius_field", "center": [0, 0], "e": 1, "d": 2, "rho0": 0.1, "a": 0.2, "b": 0.0,
                    "alpha": A, "k1": 0.01})
    w = time_augmented(sample_fbm(0.75, 1.0, 16))
    with pytest.raises(InvalidProblem):
        InclusionProblem(phi, [0.0], w, A, B, r=10.0).check_constants(0)


def test_problem_validation():
    w = time_augmented(sample_fbm(0.75, 1.0, 16))
    phi = constant_phi(ConvexBody.point([1.0, 0.0]), 1, 2)
    with pytest.raises(InvalidProblem):
        InclusionProblem(phi, [0.0], w, A, B, r=0.5)  # r below R + k1 + k2
    with pytest.raises(InvalidProblem):
        InclusionProblem(phi, [0.0, 0.0], w, A, B)
    with pytest.raises(InvalidProblem):
        InclusionProblem(phi, [0.0], w, A, B, order=2)
    assert InclusionProblem(phi, [0.0], w, A, B).r == pytest.approx(1.0)


def test_zero_coefficient():
    w = time_augmented(sample_fbm(0.75, 1.0, 64))
    p = InclusionProblem(constant_phi(ConvexBody.point([0, 0]), 1, 2), [1.5], w, A, B)
    rep = solve_first_order(p)
    assert np.all(rep.path.values == 1.5) and rep.residual == 0.0


def test_constant_matrix():
    w = time_augmented(sample_fbm(0.75, 1.0, 64, seed=2))
    sig = np.array([0.3, -0.5, 0.2, 0.1])
    p = InclusionProblem(constant_phi(ConvexBody.point(sig), 2, 2), [1.0, -1.0], w, A, B)
    rep = solve_first_order(p)
    expected = np.array([1.0, -1.0]) + (w.values - w.values[0]) @ sig.reshape(2, 2).T
    assert np.allclose(rep.path.values, expected, atol=1e-12)
    assert rep.path.values[0].tolist() == [1.0, -1.0]


@settings(max_examples=3)
@given(st.integers(0, 1000))
def test_lipschitz_problem(seed):
    p = lipschitz_problem(seed, 128)
    rep = solve_first_order(p, Strategy("generalized_steiner", SmoothBallMeasure.bump([0.4, 0.3], 4.0)))
    assert rep.residual <= 1e-3 and rep.iterations <= p.max_iter
    assert all(c <= 1.0 for c in rep.window_condition) and not rep.fallback
    spans = rep.window_schedule
    assert spans[0][0] == 0 and spans[-1][1] == p.w.m
    assert all(a[1] == b[0] for a, b in zip(spans, spans[1:]))


def test_window_choice_is_maximal():
    p = lipschitz_problem(0, 256)
    k, fb = choose_window(p)
    assert not fb and p.window_bound(k * p.w.h) <= 1.0 < p.window_bound((k + 1) * p.w.h)


def test_contraction_on_trivial_case():
    w = time_augmented(sample_fbm(0.75, 1.0, 64, seed=1))
    phi = translate_phi(ConvexBody.regular_polygon(4, 0.01), 1, 2, 0.0, 0.02, A)
    rep = solve_first_order(InclusionProblem(phi, [0.3], w, A, B, tol=1e-12))
    inc = rep.increments
    assert all(b < a for a, b in zip(inc[1:], inc[2:]))


def test_nonconvergence_reports_last_iterate():
    p = lipschitz_problem(1, 64)
    p.max_iter = 1
    with pytest.raises(NonConvergence) as exc:
        solve_first_order(p)
    rep = exc.value.report
    assert rep is not None and len(rep.window_sizes) == 2 and rep.window_sizes[1] < rep.window_sizes[0]


def test_second_order_time_driver():
    w0 = SampledPath.from_function(lambda t: t, 1.0, 128)
    p = InclusionProblem(constant_phi(ConvexBody.point([1.0]), 1, 1), [0.2], w0, A, B, order=2)
    rep = solve_second_order(p)
    assert np.allclose(rep.path.values, 0.2 + w0.grid**2 / 2, atol=1e-4)


def test_second_order_fbm_chain_rule():
    w0 = sample_fbm(0.75, 1.0, 256, seed=4)
    p = InclusionProblem(constant_phi(ConvexBody.point([1.0]), 1, 1), [0.0], w0, A, B, order=2)
    rep = solve_second_order(p)
    assert np.allclose(rep.path.values, (w0.values - w0.values[0]) ** 2 / 2, atol=1e-3)
    assert rep.ibp_residual <= 1e-6


@given(st.integers(0, 1000))
def test_integration_by_parts_on_random_integrands(seed):
    rng = np.random.default_rng(seed)
    w0 = sample_fbm(0.75, 1.0, 256, seed=seed)
    a = rng.normal(size=3)
    phi = SampledPath.from_function(lambda t: a[0] + a[1] * math.sin(3 * t + a[2]), 1.0, 256)
    assert integration_by_parts_residual(w0, phi, YoungConfig(A, B)) <= 1e-3


def test_funnel_singleton_has_zero_width():
    w = time_augmented(sample_fbm(0.75, 1.0, 32, seed=3))
    p = InclusionProblem(constant_phi(ConvexBody.point([0.2, 0.1]), 1, 2), [0.0], w, A, B)
    rep = solution_funnel(p, default_strategies(2, 3))
    assert np.max(rep.widths()) < 1e-12


def test_funnel_interval_against_time():
    m = 32
    w = SampledPath.from_function(lambda t: t, 1.0, m)
    p = InclusionProblem(constant_phi(ConvexBody.interval(-1, 1), 1, 1), [0.5], w, A, B)
    delta = 0.1
    strategies = [Strategy("anchor", anchor=(s * (1 - delta),)) for s in (-1, 1)]
    rep = solution_funnel(p, strategies)
    t = w.grid
    for i in range(m + 1):
        assert rep.hulls[i].contains([0.5 - t[i] * (1 - delta)], 1e-12)
        assert rep.hulls[i].contains([0.5 + t[i] * (1 - delta)], 1e-12)


def test_funnel_within_integral_hull():
    m = 32
    w = time_augmented(sample_fbm(0.75, 1.0, m, seed=5))
    C = ConvexBody.regular_polygon(5, 0.3, center=(0.1, 0.0))
    p = InclusionProblem(constant_phi(C, 1, 2), [0.0], w, A, B)
    rep = solution_funnel(p, default_strategies(2, 4))
    F = SetValuedPath.constant(C, 1.0, m, shape=(1, 2))
    fam = build_selection_family(F, A, p.r, measures=default_measures(2, 8), anchors=[], check_r_min=False)
    J = indefinite_aumann_integral(F, w, YoungConfig(A, B), p.r, fam)
    for H, K in zip(rep.hulls, J.bodies):
        assert H.diameter <= 2 * K.norm + 1e-9


def test_stochastic_run_constant():
    tpl = {"phi": {"name": "constant", "body": [[0.2, -0.1]], "e": 1, "d": 2}, "xi": [0.0], "alpha": A,
           "beta": B, "m": 32}
    rep = stochastic_inclusion_run(0.75, tpl, 5, seed=10)
    assert rep.success_rate == 1.0 and max(rep.residuals) < 1e-12


def test_stochastic_run_second_order_law():
    tpl = {"phi": {"name": "constant", "body": [[1.0]], "e": 1, "d": 1}, "xi": [0.0], "alpha": A, "beta": B,
           "m": 32, "order": 2}
    rep = stochastic_inclusion_run(0.75, tpl, 400, seed=0)
    law = rep.law_check
    for mean, se, exp in zip(law["mean"], law["stderr"], law["expected"]):
        assert abs(mean - exp) <= 4 * se


def test_stochastic_run_lipschitz_ensemble():
    tpl = {"phi": {"name": "radius_field", "center": [0.01, 0.01], "e": 1, "d": 2, "rho0": 0.005, "a": 0.005,
                   "b": 0.005, "alpha": A}, "xi": [0.5], "alpha": A, "beta": B, "m": 64}
    rep = stochastic_inclusion_run(0.75, tpl, 100, seed=0)
    assert rep.success_rate == 1.0 and max(rep.residuals) <= 1e-3
