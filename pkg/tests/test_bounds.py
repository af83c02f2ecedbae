import math
from dataclasses import replace

import numpy as np
import pytest

from interferobounds import causal
from interferobounds.bounds import (
    BoundsReport,
    differential_force,
    displacement_shift,
    feasibility_report,
    optimize_eta,
    phase_difference,
    r_max_displacement,
    r_max_phase,
    ta_lower_bound,
    ta_min_one_way,
    ta_min_round_trip,
    ta_tb_min_one_way,
    ta_tb_min_round_trip,
    tb_displacement,
    tb_eta,
    tb_phase,
)
from interferobounds.errors import GeometryError, InvalidInputError
from interferobounds.scenario import CouplingKind, ScenarioParams
from interferobounds.units import LENGTH, TIME, Quantity, from_planck, to_planck


def scenario(**kw):
    base = dict(m_a=1.0, d=1.0, r=1000.0)
    base.update(kw)
    return ScenarioParams(**base)


# --- one-way / round-trip floors -------------------------------------------


def test_timing_floors_planck_identity():
    assert ta_tb_min_one_way(1.0) == 1.0
    assert ta_tb_min_round_trip(1.0) == 2.0


def test_round_trip_is_twice_one_way():
    rng = np.random.default_rng(3)
    for _ in range(50):
        r = float(10.0 ** rng.uniform(-6, 12))
        assert ta_tb_min_round_trip(r) == 2.0 * ta_tb_min_one_way(r)


def test_timing_floor_si_values():
    r = to_planck(Quantity(3e8, LENGTH))
    one_way = from_planck(ta_tb_min_one_way(r), TIME).value
    round_trip = from_planck(ta_tb_min_round_trip(r), TIME).value
    assert one_way == pytest.approx(1.0007, rel=1e-4)
    assert round_trip == pytest.approx(2.0014, rel=1e-4)


def test_timing_floors_reject_nonpositive():
    with pytest.raises(InvalidInputError):
        ta_tb_min_one_way(0.0)
    with pytest.raises(InvalidInputError):
        ta_tb_min_round_trip(-1.0)


# --- differential force ------------------------------------------------------


def test_differential_force_leading_order_substitution():
    p = scenario(m_a=1.0, m_b=1.0, d=1.0, r=100.0)
    assert differential_force(p, "approx") == pytest.approx(1e-6, rel=1e-12)


def test_differential_force_exact_over_approx_series():
    # Series oracle: ratio = 2*(1 - 1.5*(d/r)) + O((d/r)^2).
    p = scenario(d=1.0, r=1e4)
    ratio = differential_force(p, "exact") / differential_force(p, "approx")
    eps = 1.0 / 1e4
    assert ratio == pytest.approx(2.0 * (1.0 - 1.5 * eps), abs=5 * eps ** 2)
    assert ratio == pytest.approx(1.9997, abs=1e-4)


def test_differential_force_vanishes_with_separation():
    prev = None
    for d in (1e-6, 1e-9, 1e-12):
        p = scenario(d=d, r=1.0, override_geometry=True)
        exact = differential_force(p, "exact")
        approx = differential_force(p, "approx")
        assert 0.0 <= exact < 3.0 * d
        assert approx == pytest.approx(d, rel=1e-12)
        if prev is not None:
            assert exact < prev
        prev = exact


def test_differential_force_ratio_approaches_two_monotonically():
    ratios = []
    for rd in (1e2, 1e3, 1e4, 1e6):
        p = scenario(d=1.0, r=rd)
        ratios.append(differential_force(p, "exact") / differential_force(p, "approx"))
    assert all(a < b for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] == pytest.approx(2.0, abs=1e-5)


def test_geometry_gate_requires_override():
    p = scenario(d=1.0, r=10.0)
    with pytest.raises(GeometryError):
        differential_force(p)
    assert differential_force(replace(p, override_geometry=True)) > 0.0


def test_mode_validation():
    with pytest.raises(InvalidInputError):
        differential_force(scenario(), "quadrupole")


# --- displacement shift ------------------------------------------------------


def test_displacement_shift_zero_time():
    assert displacement_shift(2.0, 1.0, 0.0) == 0.0


def test_displacement_shift_quadratic_scaling():
    base = displacement_shift(1.3, 2.1, 1.7)
    assert displacement_shift(1.3, 2.1, 3.4) == pytest.approx(4.0 * base, rel=1e-12)


def test_displacement_shift_substitution():
    assert displacement_shift(2.0, 1.0, 1.0) == 1.0


# --- tb_displacement ---------------------------------------------------------


def test_tb_displacement_equals_light_time_at_r_equals_d():
    p = scenario(m_a=2.0, d=5.0, r=5.0, override_geometry=True)
    assert tb_displacement(p) == pytest.approx(5.0, rel=1e-12)


def test_tb_displacement_inverse_sqrt_mass_scaling():
    p = scenario(m_a=1.0, d=1.0, r=1e4)
    p4 = replace(p, m_a=4.0)
    assert tb_displacement(p4) == pytest.approx(0.5 * tb_displacement(p), rel=1e-12)


def test_tb_displacement_matches_tb_eta_on_grid():
    rng = np.random.default_rng(5)
    for _ in range(20):
        m_a = float(10.0 ** rng.uniform(0, 9))
        d = float(10.0 ** rng.uniform(-3, 6))
        for eta in np.linspace(0.1, 0.9, 9):
            r = 2.0 * eta * eta * m_a * d
            p = ScenarioParams(m_a=m_a, d=d, r=r, override_geometry=True)
            assert tb_displacement(p) == pytest.approx(
                tb_eta(float(eta), m_a, d), rel=1e-12
            )


def test_tb_displacement_slack_scaling():
    p = scenario(m_a=1.0, d=1.0, r=1e4)
    assert tb_displacement(p, slack=4.0) == pytest.approx(
        2.0 * tb_displacement(p), rel=1e-12
    )


def test_tb_displacement_coulomb_needs_explicit_floor():
    p = ScenarioParams(
        m_a=1.0, d=1.0, r=1e4, coupling=CouplingKind.COULOMB, q_a=10.0, q_b=10.0
    )
    with pytest.raises(InvalidInputError):
        tb_displacement(p)
    ok = replace(p, delta_x_min=1.0)
    # Same coupling K = 100 as a gravity pair with m_a*m_b = 100.
    grav = ScenarioParams(m_a=100.0, d=1.0, r=1e4)
    assert tb_displacement(ok) == pytest.approx(tb_displacement(grav), rel=1e-12)


# --- eta family --------------------------------------------------------------


def test_tb_eta_substitution():
    assert tb_eta(2.0 / 3.0, 1.0, 1.0) == pytest.approx(32.0 / 27.0, rel=1e-12)


def test_tb_eta_limits_and_rejection():
    assert tb_eta(1e-9, 1.0, 1.0) == pytest.approx(4e-27, rel=1e-12)
    for bad in (0.0, 1.0, -0.5, 1.5):
        with pytest.raises(InvalidInputError):
            tb_eta(bad, 1.0, 1.0)


def test_ta_lower_bound_values():
    assert ta_lower_bound(2.0 / 3.0, 1.0, 1.0) == pytest.approx(16.0 / 27.0, rel=1e-12)
    assert ta_lower_bound(0.5, 1.0, 1.0) == pytest.approx(0.5, rel=1e-12)


def test_eta_identity_web():
    rng = np.random.default_rng(17)
    for _ in range(100):
        m_a = float(10.0 ** rng.uniform(0, 10))
        d = float(10.0 ** rng.uniform(-2, 6))
        for eta in np.linspace(0.1, 0.9, 9):
            eta = float(eta)
            r = 2.0 * eta * eta * m_a * d
            tb = tb_eta(eta, m_a, d)
            assert tb == pytest.approx(eta * ta_tb_min_round_trip(r), rel=1e-12)
            assert ta_lower_bound(eta, m_a, d) == pytest.approx(
                ta_tb_min_round_trip(r) - tb, rel=1e-12
            )


def test_optimize_eta_matches_analytic():
    opt = optimize_eta()
    assert opt.eta_star == pytest.approx(2.0 / 3.0, abs=1e-9)
    assert opt.coefficient == pytest.approx(16.0 / 27.0, abs=1e-9)
    assert "golden-section" in opt.method


def test_optimize_eta_agrees_with_independent_grid():
    grid = np.linspace(0.0, 1.0, 1_000_001)
    values = 4.0 * (grid ** 2 - grid ** 3)
    i = int(np.argmax(values))
    opt = optimize_eta()
    assert abs(opt.eta_star - grid[i]) < 1e-6
    assert abs(opt.coefficient - values[i]) < 1e-9


def test_optimize_eta_coefficient_bounds_grid_of_ta():
    etas = np.linspace(1e-6, 1.0 - 1e-6, 200_001)
    m_a, d = 3.0, 7.0
    ta = 4.0 * (etas ** 2 - etas ** 3) * m_a * d
    coeff_grid = float(np.max(ta) / (m_a * d))
    assert optimize_eta().coefficient == pytest.approx(coeff_grid, abs=1e-9)


# --- strongest floors --------------------------------------------------------


def test_ta_min_round_trip_values():
    assert ta_min_round_trip(1.0, 1.0) == pytest.approx(16.0 / 27.0, rel=1e-12)
    assert ta_min_round_trip(27.0, 1.0) == pytest.approx(16.0, rel=1e-12)


def test_ta_min_one_way_values():
    assert ta_min_one_way(27.0, 1.0) == pytest.approx(2.0, rel=1e-12)
    assert ta_min_one_way(1.0, 1.0) == pytest.approx(2.0 / 27.0, rel=1e-12)


def test_ta_min_ratio_is_exactly_eight():
    rng = np.random.default_rng(23)
    for _ in range(200):
        m_a = float(10.0 ** rng.uniform(-3, 12))
        d = float(10.0 ** rng.uniform(-3, 12))
        assert ta_min_round_trip(m_a, d) / ta_min_one_way(m_a, d) == 8.0


def test_ta_min_linear_scaling():
    base = ta_min_round_trip(2.0, 3.0)
    assert ta_min_round_trip(4.0, 3.0) == pytest.approx(2.0 * base, rel=1e-12)
    assert ta_min_round_trip(2.0, 6.0) == pytest.approx(2.0 * base, rel=1e-12)


# --- back-reaction radii -----------------------------------------------------


def test_r_max_displacement_substitution():
    assert r_max_displacement(200.0, 1.0) == pytest.approx(100.0, rel=1e-12)
    assert r_max_displacement(200.0, 3.0) == pytest.approx(300.0, rel=1e-12)


def test_r_max_displacement_planck_mass_marginal():
    # m_a = 2 gives r_max = d: incompatible with r >> d, so only sources
    # far above the Planck mass admit back-reaction-free measurements.
    d = 5.0
    r_max = r_max_displacement(2.0, d)
    assert r_max == d
    p = ScenarioParams(m_a=2.0, d=d, r=r_max, override_geometry=True)
    assert not p.geometry_valid


def test_backreaction_iff_radius():
    rng = np.random.default_rng(29)
    for _ in range(500):
        m_a = float(10.0 ** rng.uniform(0, 10))
        d = float(10.0 ** rng.uniform(-2, 4))
        r = float(10.0 ** rng.uniform(-1, 12))
        p = ScenarioParams(m_a=m_a, d=d, r=r, override_geometry=True)
        lhs = causal.backreaction_free(tb_displacement(p), r)
        rhs = r < r_max_displacement(m_a, d)
        assert lhs == rhs


# --- phase model -------------------------------------------------------------


def test_phase_difference_modes_ratio():
    rng = np.random.default_rng(31)
    for _ in range(100):
        r = float(10.0 ** rng.uniform(1, 8))
        d = r / float(10.0 ** rng.uniform(2, 5))
        p = ScenarioParams(m_a=2.0, m_b=3.0, d=d, r=r, override_geometry=True)
        t = float(10.0 ** rng.uniform(0, 6))
        exact = phase_difference(p, t, "exact")
        approx = phase_difference(p, t, "approx")
        assert exact / approx == pytest.approx(r / (r + d), rel=1e-12)


def test_phase_difference_zero_time_and_linearity():
    p = scenario(m_a=2.0, m_b=3.0, d=1.0, r=1e4)
    assert phase_difference(p, 0.0) == 0.0
    base = phase_difference(p, 2.0)
    assert phase_difference(p, 4.0) == pytest.approx(2.0 * base, rel=1e-12)
    doubled_k = replace(p, m_a=4.0)
    assert phase_difference(doubled_k, 2.0) == pytest.approx(2.0 * base, rel=1e-12)


def test_phase_difference_approx_ratio_at_1e4():
    p = scenario(d=1.0, r=1e4)
    ratio = phase_difference(p, 1.0, "exact") / phase_difference(p, 1.0, "approx")
    assert ratio == pytest.approx(0.9999, abs=1e-5)


def test_tb_phase_planck_substitution():
    p = ScenarioParams(m_a=1.0, m_b=1.0, d=10.0, r=1000.0)
    assert tb_phase(p, "approx") == pytest.approx(math.pi * 1000.0 ** 2 / 10.0, rel=1e-12)
    assert tb_phase(p, "exact") / tb_phase(p, "approx") == pytest.approx(
        (1000.0 + 10.0) / 1000.0, rel=1e-12
    )


def test_tb_phase_planck_mass_pair_contradiction():
    # With m_a = m_b = m_P the phase back-reaction radius is d/pi, which
    # contradicts r >> d: the pair coupling must far exceed one.
    p = ScenarioParams(m_a=1.0, m_b=1.0, d=10.0, r=1000.0)
    r_max = r_max_phase(p.m_a, p.m_b, p.d)
    assert r_max == pytest.approx(10.0 / math.pi, rel=1e-12)
    assert r_max < p.d < p.r


def test_r_max_phase_values_and_symmetry():
    assert r_max_phase(1.0, 1.0, 3.0) == pytest.approx(3.0 / math.pi, rel=1e-12)
    assert r_max_phase(20.0 * math.pi, 5.0, 1.0) == pytest.approx(100.0, rel=1e-12)
    assert r_max_phase(3.0, 7.0, 2.0) == r_max_phase(7.0, 3.0, 2.0)


# --- homogeneity -------------------------------------------------------------


def test_bounds_scaling_exponents():
    rng = np.random.default_rng(37)
    for _ in range(50):
        m_a = float(10.0 ** rng.uniform(0, 8))
        d = float(10.0 ** rng.uniform(-2, 4))
        s = float(10.0 ** rng.uniform(-2, 2))
        assert ta_min_round_trip(s * m_a, d) == pytest.approx(
            s * ta_min_round_trip(m_a, d), rel=1e-12
        )
        assert r_max_displacement(m_a, s * d) == pytest.approx(
            s * r_max_displacement(m_a, d), rel=1e-12
        )
        p = ScenarioParams(m_a=m_a, d=d, r=1e6 * d)
        ps = replace(p, r=s * 1e6 * d, override_geometry=True)
        assert tb_displacement(ps) == pytest.approx(
            s ** 1.5 * tb_displacement(p), rel=1e-12
        )
        assert tb_phase(ps, "approx") == pytest.approx(
            s ** 2 * tb_phase(p, "approx"), rel=1e-12
        )


# --- feasibility report ------------------------------------------------------


def test_report_example_values():
    p = ScenarioParams(m_a=1e6, d=1e6, r=1e8)
    rep = feasibility_report(p)
    assert rep.r_max_displacement == pytest.approx(5e11, rel=1e-12)
    assert rep.displacement_backreaction_free is True
    assert rep.geometry_valid is True
    assert rep.ta_min_round_trip / rep.ta_min_one_way == 8.0
    assert rep.source_planck_ratio == 1e6
    assert rep.provenance["tb_displacement"].startswith("sqrt(")


def test_report_phase_infeasible_for_planck_masses():
    for rd in (100.0, 1e4, 1e8):
        p = ScenarioParams(m_a=1.0, m_b=1.0, d=1.0, r=rd)
        rep = feasibility_report(p, "phase")
        assert rep.phase_backreaction_free is False
        assert rep.tb_displacement is None


def test_report_model_subsets():
    p = ScenarioParams(m_a=1e6, d=1e6, r=1e8)
    disp = feasibility_report(p, "displacement")
    assert disp.tb_phase_exact is None
    assert disp.tb_displacement is not None
    with pytest.raises(InvalidInputError):
        feasibility_report(p, "everything")


def test_report_coulomb_substitution():
    p = ScenarioParams(
        m_a=1.0,
        m_b=1.0,
        d=10.0,
        r=2000.0,
        coupling=CouplingKind.COULOMB,
        q_a=1e3,
        q_b=1e3,
    )
    rep = feasibility_report(p, "phase")
    assert rep.pair_planck_ratio == 1e6
    assert rep.r_max_phase == pytest.approx(1e6 * 10.0 / math.pi, rel=1e-12)
    assert rep.phase_backreaction_free is True
    assert rep.provenance["source_planck_ratio"] == "q_A/q_P"
    with pytest.raises(InvalidInputError):
        feasibility_report(p, "both")


def test_report_flag_consistency_random():
    rng = np.random.default_rng(41)
    for _ in range(200):
        p = ScenarioParams(
            m_a=float(10.0 ** rng.uniform(0, 10)),
            d=float(10.0 ** rng.uniform(-2, 4)),
            r=float(10.0 ** rng.uniform(0, 12)),
            m_b=float(10.0 ** rng.uniform(-2, 4)),
        )
        rep = feasibility_report(p)
        assert rep.displacement_backreaction_free == (
            p.r < rep.r_max_displacement
        )
        assert rep.phase_backreaction_free == (p.r < rep.r_max_phase)
        assert rep.geometry_valid == (p.r / p.d >= p.r_over_d_min)


def test_report_field_order_covers_all_fields():
    p = ScenarioParams(m_a=1e6, d=1e6, r=1e8)
    rep = feasibility_report(p)
    assert set(rep.as_dict()) == set(BoundsReport.field_order())
