"""Static, buckling, and post-buckling solution drivers."""

import numpy as np
import pytest

from igaplate import (
    FgmSection,
    PhaseCoefficients,
    PlateModel,
    SolverError,
    TemperatureProfile,
    assemble_initial_stress,
    assemble_linear,
    build_constraints,
    build_mesh,
    center_deflection,
    critical_delta_T,
    lookup_phase,
    reduce_matrix,
    section_stiffness,
    solve_linear_buckling,
    solve_linear_static,
    solve_newton,
    solve_thermal_postbuckling,
    square_patch,
)


def iso_phase(E=1e9, nu=0.3, alpha=1e-6):
    z = (0.0, 0.0, 0.0)
    return PhaseCoefficients("iso", (0.0, E) + z, (0.0, nu) + z,
                             (0.0, alpha) + z, (0.0, 1.0) + z, (0.0, 1.0) + z)


def iso_model(L=1.0, h=0.01, degree=3, refinement=8, bc="ssss2", **kw):
    p = iso_phase()
    sec = FgmSection(ceramic=p, metal=p, thickness=h, index=0.0)
    mesh = build_mesh(square_patch(L, L, degree=degree), refinement=refinement)
    cons = build_constraints(mesh, bc)
    return PlateModel(mesh=mesh, section=sec, constraints=cons, **kw)


def uniform_rise(delta=100.0):
    return TemperatureProfile(kind="uniform", T_ref=300.0, T_bottom=300.0 + delta,
                              T_top=300.0 + delta, units="K")


def test_zero_load_equilibrium():
    model = iso_model(refinement=4)
    q = solve_linear_static(model).q
    assert np.abs(q).max() == 0.0
    res = solve_newton(model, steps=2)
    assert res.converged
    assert np.abs(res.q).max() == 0.0


def test_linear_static_matches_thin_plate_coefficient():
    # Navier series for a simply supported square under uniform pressure:
    # w_c = 0.0040623 q a^4 / D; at a/h = 100 the shear offset is tiny
    E, nu, h, L, f_z = 1e9, 0.3, 0.01, 1.0, -1e3
    D = E * h**3 / (12.0 * (1.0 - nu**2))
    for bc in ("ssss2", "ssss3"):
        model = iso_model(L=L, h=h, refinement=10, bc=bc, f_z=f_z)
        w = center_deflection(model, solve_linear_static(model).q)
        coef = abs(w) / (abs(f_z) * L**4 / D)
        assert coef == pytest.approx(0.0040623, rel=5e-3)


def test_linear_solve_scales_linearly():
    model = iso_model(refinement=5, f_z=-2e3)
    q1 = solve_linear_static(model).q
    q2 = solve_linear_static(model, scale=2.0).q
    assert np.abs(q2 - 2.0 * q1).max() < 1e-10 * np.abs(q1).max()


def test_newton_softening_and_step_invariance():
    # immovable edges stiffen the plate as membrane stretching builds up
    model = iso_model(L=1.0, h=0.1, refinement=6, bc="ssss2", f_z=-4e6)
    lin = center_deflection(model, solve_linear_static(model).q)
    res5 = solve_newton(model, steps=5)
    w5 = center_deflection(model, res5.q)
    assert res5.converged
    assert abs(w5) < abs(lin)
    assert abs(lin) > 0.04 * model.section.thickness  # meaningfully nonlinear
    res1 = solve_newton(model, steps=1)
    assert np.abs(res1.q - res5.q).max() < 1e-6 * np.abs(res5.q).max()
    # load scales recorded per step
    assert [s.scale for s in res5.steps] == pytest.approx(
        [0.2, 0.4, 0.6, 0.8, 1.0])
    assert all(s.converged for s in res5.steps)


def test_newton_quadratic_convergence():
    model = iso_model(L=1.0, h=0.05, refinement=5, bc="ssss2", f_z=-3e5)
    res = solve_newton(model, steps=1, tol=1e-12)
    hist = np.array(res.steps[-1].residuals)
    hist = hist[(hist > 0.0) & (hist < 1.0)]
    assert hist.size >= 3
    drops = np.log(hist[1:]) / np.log(hist[:-1])
    # the final contraction must look quadratic (slope >= 1.8) once the
    # iterate is inside the attraction basin
    tail = [d for r, d in zip(hist[:-1], drops) if r < 1e-2]
    assert tail and max(tail) >= 1.8


def test_newton_failure_raises():
    model = iso_model(L=1.0, h=0.01, refinement=4, bc="ssss2", f_z=-1e9)
    with pytest.raises(SolverError):
        solve_newton(model, steps=1, max_iter=2)


def test_thermal_and_mechanical_loads_combine():
    prof = TemperatureProfile(kind="linear", T_ref=0.0, T_bottom=20.0,
                              T_top=300.0, units="C")
    zr, al = lookup_phase("ZrO2"), lookup_phase("Al")
    sec = FgmSection(ceramic=zr, metal=al, thickness=0.01, index=0.0)
    mesh = build_mesh(square_patch(0.2, 0.2, degree=3), refinement=6)
    cons = build_constraints(mesh, "ssss1")
    both = PlateModel(mesh=mesh, section=sec, constraints=cons, profile=prof,
                      f_z=-1e7)
    w_both = center_deflection(both, solve_newton(both, steps=5).q)
    mech = PlateModel(mesh=mesh, section=sec, constraints=cons, f_z=-1e7)
    w_mech = center_deflection(mech, solve_newton(mech, steps=5).q)
    therm = PlateModel(mesh=mesh, section=sec, constraints=cons, profile=prof)
    w_th = center_deflection(therm, solve_newton(therm, steps=5).q)
    # thermal bowing lifts the plate against the pressure, and the coupled
    # response is not the sum of the parts
    assert w_mech < 0.0 < w_th
    assert w_mech < w_both < w_th
    assert abs(w_both - (w_mech + w_th)) > 0.05 * abs(w_both)


def test_buckling_matches_thin_plate_coefficient():
    # biaxially restrained isotropic plate under uniform rise:
    # alpha dT_cr = 2 pi^2 (h/a)^2 / (12 (1 + nu))
    h, L = 0.01, 1.0
    model = iso_model(L=L, h=h, refinement=10, bc="ssss2", profile=uniform_rise())
    res = solve_linear_buckling(model, n_modes=3)
    expected = 2.0 * np.pi**2 * (h / L) ** 2 / (12.0 * (1.0 + 0.3)) / 1e-6
    assert res.delta_T_cr == pytest.approx(expected, rel=3e-3)
    assert res.factors.size == 3
    assert np.all(np.diff(res.factors) > 0.0)
    assert res.load_factor == res.factors[0]
    # conversion consistency and mode normalization
    assert res.delta_T_cr == pytest.approx(
        critical_delta_T(res.n_cr, res.scalars, "uniform"), rel=1e-12)
    w = model.sampled_w(res.mode)
    assert np.abs(w).max() == pytest.approx(1.0, rel=1e-12)
    assert w[np.argmax(np.abs(w))] > 0.0  # sign convention


def test_buckling_is_deterministic():
    model = iso_model(refinement=6, profile=uniform_rise())
    a = solve_linear_buckling(model, n_modes=2)
    b = solve_linear_buckling(model, n_modes=2)
    assert a.load_factor == b.load_factor
    assert np.array_equal(a.mode, b.mode)


def test_buckling_eigen_homogeneity():
    model = iso_model(refinement=8, profile=uniform_rise())
    r1 = solve_linear_buckling(model, n_modes=2, ref_scale=1.0)
    rc = solve_linear_buckling(model, n_modes=2, ref_scale=3.7)
    # scaling the reference stress scales the factor exactly inversely
    assert rc.load_factor * 3.7 == pytest.approx(r1.load_factor, rel=1e-10)
    assert rc.n_cr == pytest.approx(r1.n_cr, rel=1e-10)
    assert rc.delta_T_cr == pytest.approx(r1.delta_T_cr, rel=1e-10)


def test_buckling_eigenpair_residual():
    model = iso_model(refinement=8, profile=uniform_rise())
    res = solve_linear_buckling(model, n_modes=2)
    dhat = section_stiffness(model.section).dhat()
    K = reduce_matrix(assemble_linear(model.mesh, dhat), model.constraints)
    n_unit = res.n_cr / res.load_factor
    K0 = reduce_matrix(
        assemble_initial_stress(model.mesh, n_unit * np.eye(2)),
        model.constraints)
    v = res.mode[model.constraints.free]
    r = K @ v - res.load_factor * (K0 @ v)
    assert np.linalg.norm(r) < 1e-8 * np.linalg.norm(K @ v)


def test_buckling_requires_profile_and_compression():
    model = iso_model(refinement=4)
    with pytest.raises(SolverError):
        solve_linear_buckling(model)
    with pytest.raises(SolverError):
        solve_thermal_postbuckling(model)


def si3n4_sus304_model(refinement=6, dependent=False):
    sec = FgmSection(ceramic=lookup_phase("Si3N4"), metal=lookup_phase("SUS304"),
                     thickness=0.01, index=1.0)
    mesh = build_mesh(square_patch(0.2, 0.2, degree=3), refinement=refinement)
    cons = build_constraints(mesh, "clamped")
    return PlateModel(mesh=mesh, section=sec, constraints=cons,
                      profile=uniform_rise(), temperature_dependent=dependent)


def test_postbuckling_small_amplitude_recovers_bifurcation():
    model = si3n4_sus304_model()
    lin = solve_linear_buckling(model, n_modes=2)
    trace = solve_thermal_postbuckling(model, amplitudes=(0.05,))
    assert trace.critical_delta_T == pytest.approx(lin.delta_T_cr, rel=1e-12)
    assert trace.temperatures[0] == pytest.approx(lin.delta_T_cr, rel=5e-3)
    assert trace.entries[0].converged
    assert not trace.entries[0].mode_switch


def test_postbuckling_paths_monotone_and_temperature_dependence():
    amps = (0.2, 0.6, 1.0)
    tid = solve_thermal_postbuckling(si3n4_sus304_model(), amplitudes=amps)
    td = solve_thermal_postbuckling(si3n4_sus304_model(dependent=True),
                                    amplitudes=amps)
    assert np.array_equal(tid.amplitudes, amps)
    # deeper post-buckling requires more temperature
    assert np.all(np.diff(tid.temperatures) > 0.0)
    assert np.all(np.diff(td.temperatures) > 0.0)
    assert np.all(tid.temperatures > tid.critical_delta_T * 0.99)
    # softening properties lower both the bifurcation point and the path
    assert td.critical_delta_T < tid.critical_delta_T
    assert np.all(td.temperatures < tid.temperatures)
    assert tid.temperature_dependent is False and td.temperature_dependent is True
    assert all(e.converged for e in tid.entries + td.entries)
    assert all(e.cycles <= 50 for e in tid.entries + td.entries)


def test_postbuckling_frozen_reference_values():
    # frozen regression values for the clamped graded square (a/h = 20)
    tid = solve_thermal_postbuckling(si3n4_sus304_model(), amplitudes=(0.2, 1.0))
    assert tid.critical_delta_T == pytest.approx(725.7589, rel=1e-4)
    assert tid.temperatures[0] == pytest.approx(738.062, rel=1e-3)
    assert tid.temperatures[1] == pytest.approx(1099.969, rel=1e-3)
    # the dependent sweep warm-starts from the previous amplitude, so the
    # frozen values pin the same grid they were recorded on
    td = solve_thermal_postbuckling(si3n4_sus304_model(dependent=True),
                                    amplitudes=(0.2, 0.6, 1.0))
    assert td.critical_delta_T == pytest.approx(525.6284, rel=1e-4)
    assert td.temperatures[0] == pytest.approx(532.637, rel=1e-3)
    assert td.temperatures[2] == pytest.approx(712.411, rel=1e-3)
