"""B-spline basis, NURBS patches, refinement, and geometry mapping."""

import numpy as np
import pytest

from igaplate import (
    GeometryError,
    KnotVector,
    disk_patch,
    eval_bspline_basis,
    make_open_knot_vector,
    refine_knots,
    skew_patch,
    square_patch,
)


def test_uniform_open_knot_vectors():
    kv = make_open_knot_vector(1, 2)
    assert np.array_equal(kv.knots, [0, 0, 0, 1, 1, 1])
    kv = make_open_knot_vector(2, 1)
    assert np.array_equal(kv.knots, [0, 0, 0.5, 1, 1])
    kv = make_open_knot_vector(5, 2, interior_multiplicity={0.6: 2})
    assert np.allclose(kv.knots, [0, 0, 0, 0.2, 0.4, 0.6, 0.6, 0.8, 1, 1, 1])
    assert kv.n_basis == 8


def test_knot_vector_validation():
    with pytest.raises(ValueError):
        make_open_knot_vector(0, 2)
    with pytest.raises(ValueError):
        make_open_knot_vector(4, 2, interior_multiplicity={0.3: 2})
    with pytest.raises(ValueError):
        make_open_knot_vector(4, 2, interior_multiplicity={0.5: 3})
    with pytest.raises(ValueError):
        KnotVector(2, [0, 0, 0, 0.7, 0.3, 1, 1, 1])
    with pytest.raises(ValueError):
        KnotVector(2, [0, 0, 0.5, 1, 1])  # not open for p = 2
    with pytest.raises(ValueError):
        KnotVector(2, [0, 0, 0, 0.5, 0.5, 0.5, 1, 1, 1])  # mult > p
    with pytest.raises(ValueError):
        KnotVector(0, [0, 0, 1, 1])


def test_bernstein_quadratic_values():
    # single span, degree 2: the basis is the Bernstein triple
    kv = make_open_knot_vector(1, 2)
    ev = eval_bspline_basis(kv, 0.5)
    assert np.allclose(ev.values, [0.25, 0.5, 0.25], atol=1e-15)
    assert np.allclose(ev.d1, [-1.0, 0.0, 1.0], atol=1e-14)
    assert np.allclose(ev.d2, [2.0, -4.0, 2.0], atol=1e-13)
    ev0 = eval_bspline_basis(kv, 0.0)
    assert np.allclose(ev0.values, [1.0, 0.0, 0.0], atol=1e-15)
    ev1 = eval_bspline_basis(kv, 1.0)
    assert np.allclose(ev1.values, [0.0, 0.0, 1.0], atol=1e-15)


@pytest.mark.parametrize("degree,n_elements,mult", [
    (2, 4, None),
    (3, 5, None),
    (4, 3, None),
    (2, 5, {0.6: 2}),
    (3, 4, {0.5: 2}),
])
def test_partition_of_unity_and_derivative_sums(degree, n_elements, mult):
    kv = make_open_knot_vector(n_elements, degree, interior_multiplicity=mult)
    rng = np.random.default_rng(7)
    pts = rng.random(1000)
    d1_scale = degree * n_elements
    for xi in pts:
        ev = eval_bspline_basis(kv, float(xi))
        assert abs(ev.values.sum() - 1.0) < 1e-12
        assert abs(ev.d1.sum()) < 1e-9 * d1_scale
        assert abs(ev.d2.sum()) < 1e-9 * d1_scale**2
        assert np.all(ev.values >= -1e-14)


@pytest.mark.parametrize("degree,n_elements", [(2, 4), (3, 6), (4, 5)])
def test_basis_derivatives_match_finite_differences(degree, n_elements):
    kv = make_open_knot_vector(n_elements, degree)
    rng = np.random.default_rng(11)
    step = 1e-5

    def dense(xi):
        ev = eval_bspline_basis(kv, xi)
        full = np.zeros(kv.n_basis)
        full[ev.span - degree: ev.span + 1] = ev.values
        return full

    for xi in 0.05 + 0.9 * rng.random(40):
        ev = eval_bspline_basis(kv, float(xi))
        d1 = np.zeros(kv.n_basis)
        d1[ev.span - degree: ev.span + 1] = ev.d1
        d2 = np.zeros(kv.n_basis)
        d2[ev.span - degree: ev.span + 1] = ev.d2
        fd1 = (dense(xi + step) - dense(xi - step)) / (2 * step)
        fd2 = (dense(xi + step) - 2 * dense(xi) + dense(xi - step)) / step**2
        scale1 = max(np.abs(d1).max(), 1.0)
        scale2 = max(np.abs(d2).max(), 1.0)
        assert np.abs(fd1 - d1).max() < 1e-6 * scale1
        assert np.abs(fd2 - d2).max() < 1e-4 * scale2


def test_span_lookup():
    kv = make_open_knot_vector(4, 2)
    assert kv.find_span(0.0) == 2
    assert kv.find_span(0.25) == 3  # right-continuous at breakpoints
    assert kv.find_span(0.999) == 5
    assert kv.find_span(1.0) == 5  # closed last span
    with pytest.raises(ValueError):
        kv.find_span(1.0001)
    assert np.array_equal(kv.spans(), [2, 3, 4, 5])


def test_greville_abscissae():
    kv = make_open_knot_vector(4, 3)
    g = kv.greville()
    assert g.size == kv.n_basis
    assert g[0] == 0.0 and g[-1] == 1.0
    assert np.all(np.diff(g) > 0)


def test_affine_patch_maps_linearly():
    surf = square_patch(1.3, 0.9, degree=3)
    rng = np.random.default_rng(3)
    for u, v in rng.random((50, 2)):
        x, y = surf.map_point(float(u), float(v))
        assert abs(x - 1.3 * u) < 1e-13
        assert abs(y - 0.9 * v) < 1e-13
    pb = surf.physical_basis(0.37, 0.52)
    # constant Jacobian of an affine map
    assert abs(pb.det_j - 1.3 * 0.9) < 1e-12


def test_skew_patch_corners():
    surf = skew_patch(2.0, 1.0, 30.0, degree=2)
    s, c = np.sin(np.radians(30.0)), np.cos(np.radians(30.0))
    assert np.allclose(surf.map_point(0, 0), [0, 0], atol=1e-14)
    assert np.allclose(surf.map_point(1, 0), [2, 0], atol=1e-14)
    assert np.allclose(surf.map_point(0, 1), [s, c], atol=1e-14)
    assert np.allclose(surf.map_point(1, 1), [2 + s, c], atol=1e-14)
    with pytest.raises(ValueError):
        skew_patch(1.0, 1.0, 80.0)


@pytest.mark.parametrize("degree", [2, 3, 4])
def test_disk_boundary_is_exact_circle(degree):
    radius = 1.7
    surf = disk_patch(radius, degree=degree)
    params = np.linspace(0.0, 1.0, 50)
    for t in params:
        for uv in ((t, 0.0), (t, 1.0), (0.0, t), (1.0, t)):
            x, y = surf.map_point(*uv)
            assert abs(np.hypot(x, y) - radius) < 1e-12


def test_disk_degree_elevation_preserves_map():
    base = disk_patch(1.0, degree=2)
    rng = np.random.default_rng(5)
    for degree in (3, 4):
        surf = disk_patch(1.0, degree=degree)
        assert surf.kv_xi.degree == degree
        for u, v in rng.random((60, 2)):
            assert np.allclose(surf.map_point(float(u), float(v)),
                               base.map_point(float(u), float(v)), atol=1e-13)
    with pytest.raises(ValueError):
        disk_patch(1.0, degree=1)
    with pytest.raises(ValueError):
        disk_patch(-1.0)


@pytest.mark.parametrize("make", [
    lambda: square_patch(1.1, 0.7, degree=3),
    lambda: disk_patch(0.9, degree=2),
    lambda: disk_patch(0.9, degree=3),
])
def test_refinement_preserves_geometry(make):
    surf = make()
    fine = refine_knots(surf, 3)
    assert len(fine.kv_xi.breakpoints) == 3 * (len(surf.kv_xi.breakpoints) - 1) + 1
    rng = np.random.default_rng(9)
    for u, v in rng.random((100, 2)):
        assert np.allclose(fine.map_point(float(u), float(v)),
                           surf.map_point(float(u), float(v)), atol=1e-12)
    assert refine_knots(surf, 1) is surf
    with pytest.raises(ValueError):
        refine_knots(surf, 0)


def test_rational_basis_reduces_to_bspline_for_unit_weights():
    surf = refine_knots(square_patch(1.0, 1.0, degree=2), 3)
    assert np.all(surf.weights == 1.0)
    kvx, kve = surf.kv_xi, surf.kv_eta
    rng = np.random.default_rng(13)
    for u, v in rng.random((25, 2)):
        R, ploc, idx = surf.rational_basis(float(u), float(v))
        bx = eval_bspline_basis(kvx, float(u))
        be = eval_bspline_basis(kve, float(v))
        assert np.allclose(R[(0, 0)], np.outer(bx.values, be.values), atol=1e-13)
        assert np.allclose(R[(1, 0)], np.outer(bx.d1, be.values), atol=1e-11)
        assert np.allclose(R[(0, 2)], np.outer(bx.values, be.d2), atol=1e-9)


def _fit_field(surf, func, n_sample=25):
    """Least-squares control coefficients reproducing func(x, y)."""
    n = surf.kv_xi.n_basis * surf.kv_eta.n_basis
    grid = np.linspace(0.0, 1.0, n_sample)
    rows, rhs = [], []
    for u in grid:
        for v in grid:
            R, _, idx = surf.rational_basis(float(u), float(v))
            row = np.zeros(n)
            row[idx.ravel()] = R[(0, 0)].ravel()
            rows.append(row)
            rhs.append(func(*surf.map_point(float(u), float(v))))
    coefs, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
    return coefs


def test_second_derivatives_reproduce_quadratic_field():
    # x^2 lies in the cubic space over an affine patch, so its discrete
    # second derivatives must be exact
    surf = refine_knots(square_patch(1.4, 1.0, degree=3), 2)
    coefs = _fit_field(surf, lambda x, y: x * x)
    rng = np.random.default_rng(17)
    for u, v in 0.05 + 0.9 * rng.random((30, 2)):
        pb = surf.physical_basis(float(u), float(v))
        w_xx = pb.R_xx @ coefs[pb.indices]
        w_yy = pb.R_yy @ coefs[pb.indices]
        w_xy = pb.R_xy @ coefs[pb.indices]
        assert abs(w_xx - 2.0) < 1e-9
        assert abs(w_yy) < 1e-9
        assert abs(w_xy) < 1e-9


def test_disk_coordinate_fields_have_zero_curvature():
    # the geometry's own coordinates are rational-spline fields, so the
    # physical second derivatives of x and y must vanish identically
    surf = refine_knots(disk_patch(1.0, degree=3), 2)
    cx = surf.points[..., 0].ravel()
    cy = surf.points[..., 1].ravel()
    for u, v in [(0.3, 0.4), (0.55, 0.62), (0.71, 0.28), (0.5, 0.5)]:
        pb = surf.physical_basis(u, v)
        assert abs(pb.R_x @ cx[pb.indices] - 1.0) < 1e-11
        assert abs(pb.R_y @ cx[pb.indices]) < 1e-11
        assert abs(pb.R_y @ cy[pb.indices] - 1.0) < 1e-11
        for d2 in (pb.R_xx, pb.R_yy, pb.R_xy):
            assert abs(d2 @ cx[pb.indices]) < 1e-9
            assert abs(d2 @ cy[pb.indices]) < 1e-9


def test_rational_second_derivatives_compose_with_the_map():
    # F,eta-eta from parametric finite differences must equal the chain-rule
    # expansion built from the physical derivatives and the map's Hessian
    surf = refine_knots(disk_patch(1.0, degree=2), 2)
    n = surf.kv_xi.n_basis * surf.kv_eta.n_basis
    rng = np.random.default_rng(23)
    coefs = rng.standard_normal(n)

    def field(u, v):
        R, _, idx = surf.rational_basis(u, v)
        return float(R[(0, 0)].ravel() @ coefs[idx.ravel()])

    step = 1e-4
    for u, v in [(0.33, 0.41), (0.57, 0.66), (0.72, 0.31)]:
        pb = surf.physical_basis(u, v)
        c = coefs[pb.indices]
        fx, fy = pb.R_x @ c, pb.R_y @ c
        fxx, fyy, fxy = pb.R_xx @ c, pb.R_yy @ c, pb.R_xy @ c

        def xy(uu, vv):
            return surf.map_point(uu, vv)

        for direction in ((1.0, 0.0), (0.0, 1.0)):
            du, dv = direction
            p = lambda s: (u + s * du, v + s * dv)
            f2 = (field(*p(step)) - 2 * field(u, v) + field(*p(-step))) / step**2
            g_p = (np.array(xy(*p(step))) - np.array(xy(*p(-step)))) / (2 * step)
            g_pp = (np.array(xy(*p(step))) - 2 * np.array(xy(u, v))
                    + np.array(xy(*p(-step)))) / step**2
            composed = (fxx * g_p[0] ** 2 + 2 * fxy * g_p[0] * g_p[1]
                        + fyy * g_p[1] ** 2 + fx * g_pp[0] + fy * g_pp[1])
            assert abs(f2 - composed) < 1e-4 * max(abs(f2), 1.0)


def test_disk_jacobian_positive_away_from_corners():
    surf = disk_patch(1.0, degree=2)
    for u in np.linspace(0.05, 0.95, 9):
        for v in np.linspace(0.05, 0.95, 9):
            assert surf.physical_basis(float(u), float(v)).det_j > 0.0


def test_degenerate_corner_raises():
    surf = disk_patch(1.0, degree=2)
    with pytest.raises(GeometryError):
        surf.physical_basis(0.0, 0.0)


def test_surface_validation():
    from igaplate import NurbsSurface

    kv = make_open_knot_vector(1, 2)
    pts = np.zeros((3, 3, 2))
    with pytest.raises(ValueError):
        NurbsSurface(kv, kv, pts[:2], np.ones((3, 3)))
    with pytest.raises(ValueError):
        NurbsSurface(kv, kv, pts, np.zeros((3, 3)))
    with pytest.raises(ValueError):
        square_patch(-1.0, 1.0)
