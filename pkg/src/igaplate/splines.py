"""B-spline and NURBS surface patches with derivatives up to second order.

Open knot vectors on [0, 1], tensor-product rational surfaces in the plane,
knot-insertion refinement, and evaluation of the rational basis together with
its first and second physical derivatives (full chain rule including the
geometry Hessian). Everything here is plain numpy; objects are treated as
immutable after construction and are safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GeometryError

__all__ = [
    "KnotVector",
    "BasisEvaluation",
    "NurbsSurface",
    "PhysicalBasis",
    "make_open_knot_vector",
    "eval_bspline_basis",
    "refine_knots",
    "square_patch",
    "skew_patch",
    "disk_patch",
]


@dataclass(frozen=True)
class KnotVector:
    """Open, normalized knot vector for one parametric direction.

    Attributes
    ----------
    degree : int
        Polynomial degree p >= 1.
    knots : ndarray
        Non-decreasing knots on [0, 1]; both ends repeated p + 1 times.
    """

    degree: int
    knots: np.ndarray

    def __post_init__(self):
        p = self.degree
        if not isinstance(p, (int, np.integer)) or p < 1:
            raise ValueError(f"degree must be a positive integer, got {p!r}")
        knots = np.asarray(self.knots, dtype=float)
        knots.setflags(write=False)
        object.__setattr__(self, "knots", knots)
        if knots.ndim != 1 or knots.size < 2 * (p + 1):
            raise ValueError("knot vector too short for the requested degree")
        if np.any(np.diff(knots) < 0.0):
            raise ValueError("knots must be non-decreasing")
        if knots[0] != 0.0 or knots[-1] != 1.0:
            raise ValueError("knot vector must span [0, 1]")
        if np.any(knots[: p + 1] != 0.0) or np.any(knots[-(p + 1):] != 1.0):
            raise ValueError("knot vector must be open (ends repeated p + 1 times)")
        interior = knots[p + 1:-(p + 1)]
        if interior.size:
            _, counts = np.unique(interior, return_counts=True)
            if np.any(counts > p):
                raise ValueError("interior knot multiplicity may not exceed the degree")

    @property
    def n_basis(self) -> int:
        return self.knots.size - self.degree - 1

    @property
    def breakpoints(self) -> np.ndarray:
        """Distinct knot values (element boundaries)."""
        return np.unique(self.knots)

    def spans(self) -> np.ndarray:
        """Indices i of all non-empty spans [knots[i], knots[i+1])."""
        return np.nonzero(np.diff(self.knots) > 0.0)[0]

    def find_span(self, xi: float) -> int:
        """Span index with knots[i] <= xi < knots[i+1]; the last span is closed."""
        if xi < 0.0 or xi > 1.0:
            raise ValueError(f"parameter {xi} outside [0, 1]")
        knots = self.knots
        if xi >= knots[self.n_basis]:
            return self.n_basis - 1
        i = int(np.searchsorted(knots, xi, side="right")) - 1
        return max(i, self.degree)

    def greville(self) -> np.ndarray:
        """Greville abscissae (knot averages), one per basis function."""
        p = self.degree
        return np.array(
            [self.knots[i + 1: i + p + 1].mean() for i in range(self.n_basis)]
        )


@dataclass(frozen=True)
class BasisEvaluation:
    """Non-vanishing B-spline basis values at one parameter.

    ``values``, ``d1`` and ``d2`` hold the p + 1 functions of index
    ``span - p .. span``; ``d1``/``d2`` are None beyond the requested
    derivative order.
    """

    span: int
    values: np.ndarray
    d1: np.ndarray | None
    d2: np.ndarray | None


def make_open_knot_vector(
    n_elements: int,
    degree: int,
    interior_multiplicity: dict[float, int] | None = None,
) -> KnotVector:
    """Uniform open knot vector with ``n_elements`` spans on [0, 1].

    ``interior_multiplicity`` maps interior breakpoints to a requested total
    multiplicity (> 1 lowers continuity there).
    """
    if not isinstance(n_elements, (int, np.integer)) or n_elements < 1:
        raise ValueError(f"n_elements must be a positive integer, got {n_elements!r}")
    breaks = np.linspace(0.0, 1.0, n_elements + 1)
    mult = {float(b): 1 for b in breaks[1:-1]}
    if interior_multiplicity:
        for value, m in interior_multiplicity.items():
            v = float(value)
            if not any(np.isclose(v, b) for b in mult):
                raise ValueError(f"{value} is not an interior breakpoint")
            if not 1 <= int(m) <= degree:
                raise ValueError("multiplicity must lie in 1..degree")
            key = min(mult, key=lambda b: abs(b - v))
            mult[key] = int(m)
    knots = [0.0] * (degree + 1)
    for b in sorted(mult):
        knots.extend([b] * mult[b])
    knots.extend([1.0] * (degree + 1))
    return KnotVector(degree, np.array(knots))


def eval_bspline_basis(kv: KnotVector, xi: float, derivative_order: int = 2) -> BasisEvaluation:
    """Evaluate the non-vanishing basis functions and derivatives at ``xi``.

    Triangular-table recurrence; repeated knots are handled by the span-local
    formulation (the 0/0 := 0 convention of the recursion never divides by a
    vanishing knot difference here).
    """
    if derivative_order not in (0, 1, 2):
        raise ValueError("derivative_order must be 0, 1 or 2")
    p = kv.degree
    n = min(derivative_order, p)
    span = kv.find_span(xi)
    U = kv.knots

    # ndu upper triangle: basis values by degree; lower triangle: knot spans
    ndu = np.zeros((p + 1, p + 1))
    left = np.zeros(p + 1)
    right = np.zeros(p + 1)
    ndu[0, 0] = 1.0
    for j in range(1, p + 1):
        left[j] = xi - U[span + 1 - j]
        right[j] = U[span + j] - xi
        saved = 0.0
        for r in range(j):
            ndu[j, r] = right[r + 1] + left[j - r]
            temp = ndu[r, j - 1] / ndu[j, r]
            ndu[r, j] = saved + right[r + 1] * temp
            saved = left[j - r] * temp
        ndu[j, j] = saved

    ders = np.zeros((derivative_order + 1, p + 1))
    ders[0] = ndu[:, p]
    a = np.zeros((2, p + 1))
    for r in range(p + 1):
        s1, s2 = 0, 1
        a[0, 0] = 1.0
        for k in range(1, n + 1):
            d = 0.0
            rk, pk = r - k, p - k
            if r >= k:
                a[s2, 0] = a[s1, 0] / ndu[pk + 1, rk]
                d = a[s2, 0] * ndu[rk, pk]
            j1 = 1 if rk >= -1 else -rk
            j2 = k - 1 if r - 1 <= pk else p - r
            for j in range(j1, j2 + 1):
                a[s2, j] = (a[s1, j] - a[s1, j - 1]) / ndu[pk + 1, rk + j]
                d += a[s2, j] * ndu[rk + j, pk]
            if r <= pk:
                a[s2, k] = -a[s1, k - 1] / ndu[pk + 1, r]
                d += a[s2, k] * ndu[r, pk]
            ders[k, r] = d
            s1, s2 = s2, s1
    fac = float(p)
    for k in range(1, n + 1):
        ders[k] *= fac
        fac *= p - k

    d1 = ders[1] if derivative_order >= 1 else None
    d2 = ders[2] if derivative_order >= 2 else None
    return BasisEvaluation(span, ders[0].copy(), d1, d2)


@dataclass(frozen=True)
class PhysicalBasis:
    """Rational basis data at one parametric point, mapped to physical space.

    ``indices`` are the global control-point indices (xi-major) of the
    (p+1)(q+1) non-vanishing functions; derivative arrays align with it.
    """

    indices: np.ndarray
    R: np.ndarray
    R_x: np.ndarray
    R_y: np.ndarray
    R_xx: np.ndarray
    R_yy: np.ndarray
    R_xy: np.ndarray
    det_j: float
    x: float
    y: float


@dataclass(frozen=True)
class NurbsSurface:
    """Tensor-product NURBS patch mapping [0,1]^2 into the plane.

    Attributes
    ----------
    kv_xi, kv_eta : KnotVector
    points : ndarray, shape (n_xi, n_eta, 2)
        Control point coordinates.
    weights : ndarray, shape (n_xi, n_eta)
        Strictly positive rational weights.
    """

    kv_xi: KnotVector
    kv_eta: KnotVector
    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        wts = np.asarray(self.weights, dtype=float)
        n_xi, n_eta = self.kv_xi.n_basis, self.kv_eta.n_basis
        if pts.shape != (n_xi, n_eta, 2):
            raise ValueError(
                f"control net shape {pts.shape} does not match basis counts "
                f"({n_xi}, {n_eta}, 2)"
            )
        if wts.shape != (n_xi, n_eta):
            raise ValueError("weights shape does not match the control net")
        if np.any(wts <= 0.0):
            raise ValueError("weights must be strictly positive")
        pts.setflags(write=False)
        wts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", wts)

    @property
    def shape(self) -> tuple[int, int]:
        return self.kv_xi.n_basis, self.kv_eta.n_basis

    def global_index(self, i: int, j: int) -> int:
        """Flatten (i, j) control indices, xi-major."""
        return i * self.kv_eta.n_basis + j

    def _local_data(self, xi: float, eta: float):
        """Weighted basis derivatives w^(a,b), B^(a,b) at a point."""
        bu = eval_bspline_basis(self.kv_xi, xi, 2)
        bv = eval_bspline_basis(self.kv_eta, eta, 2)
        p, q = self.kv_xi.degree, self.kv_eta.degree
        iu = np.arange(bu.span - p, bu.span + 1)
        iv = np.arange(bv.span - q, bv.span + 1)
        wloc = self.weights[np.ix_(iu, iv)]
        ploc = self.points[np.ix_(iu, iv)]

        def outer(a, b):
            return np.multiply.outer(a, b) * wloc

        B = {
            (0, 0): outer(bu.values, bv.values),
            (1, 0): outer(bu.d1, bv.values),
            (0, 1): outer(bu.values, bv.d1),
            (2, 0): outer(bu.d2, bv.values),
            (1, 1): outer(bu.d1, bv.d1),
            (0, 2): outer(bu.values, bv.d2),
        }
        idx = (iu[:, None] * self.kv_eta.n_basis + iv[None, :]).ravel()
        return B, ploc, idx

    def rational_basis(self, xi: float, eta: float):
        """Rational basis values/parametric derivatives (dict) and indices."""
        B, ploc, idx = self._local_data(xi, eta)
        w = {k: v.sum() for k, v in B.items()}
        w0 = w[(0, 0)]
        R = {(0, 0): B[(0, 0)] / w0}
        for k in ((1, 0), (0, 1)):
            R[k] = (B[k] - w[k] * R[(0, 0)]) / w0
        R[(2, 0)] = (B[(2, 0)] - 2.0 * w[(1, 0)] * R[(1, 0)] - w[(2, 0)] * R[(0, 0)]) / w0
        R[(0, 2)] = (B[(0, 2)] - 2.0 * w[(0, 1)] * R[(0, 1)] - w[(0, 2)] * R[(0, 0)]) / w0
        R[(1, 1)] = (
            B[(1, 1)]
            - w[(1, 0)] * R[(0, 1)]
            - w[(0, 1)] * R[(1, 0)]
            - w[(1, 1)] * R[(0, 0)]
        ) / w0
        return R, ploc, idx

    def map_point(self, xi: float, eta: float) -> np.ndarray:
        """Physical coordinates of a parametric point."""
        R, ploc, _ = self.rational_basis(xi, eta)
        return np.einsum("ij,ijk->k", R[(0, 0)], ploc)

    def physical_basis(self, xi: float, eta: float) -> PhysicalBasis:
        """Rational basis with physical derivatives to second order.

        Raises GeometryError when the geometric Jacobian is not positive.
        """
        R, ploc, idx = self.rational_basis(xi, eta)
        geo = {k: np.einsum("ij,ijk->k", v, ploc) for k, v in R.items()}
        x_d, y_d = {}, {}
        for k, v in geo.items():
            x_d[k], y_d[k] = v
        jac = np.array(
            [[x_d[(1, 0)], x_d[(0, 1)]], [y_d[(1, 0)], y_d[(0, 1)]]]
        )
        det = jac[0, 0] * jac[1, 1] - jac[0, 1] * jac[1, 0]
        scale = max(abs(jac).max() ** 2, np.finfo(float).tiny)
        if det <= 1e-12 * scale:
            raise GeometryError(
                f"non-positive Jacobian {det:.3e} at (xi, eta) = ({xi}, {eta})"
            )

        flat = {k: v.reshape(-1) for k, v in R.items()}
        # first derivatives: solve J^T [Rx; Ry] = [Rxi; Reta]
        d1 = np.linalg.solve(jac.T, np.vstack((flat[(1, 0)], flat[(0, 1)])))
        r_x, r_y = d1

        # second derivatives: subtract the geometry-curvature part, then solve
        # the 3x3 system mapping (Rxx, Rxy, Ryy) to parametric seconds
        m = np.array(
            [
                [jac[0, 0] ** 2, 2.0 * jac[0, 0] * jac[1, 0], jac[1, 0] ** 2],
                [
                    jac[0, 0] * jac[0, 1],
                    jac[0, 0] * jac[1, 1] + jac[0, 1] * jac[1, 0],
                    jac[1, 0] * jac[1, 1],
                ],
                [jac[0, 1] ** 2, 2.0 * jac[0, 1] * jac[1, 1], jac[1, 1] ** 2],
            ]
        )
        rhs = np.vstack(
            (
                flat[(2, 0)] - x_d[(2, 0)] * r_x - y_d[(2, 0)] * r_y,
                flat[(1, 1)] - x_d[(1, 1)] * r_x - y_d[(1, 1)] * r_y,
                flat[(0, 2)] - x_d[(0, 2)] * r_x - y_d[(0, 2)] * r_y,
            )
        )
        d2 = np.linalg.solve(m, rhs)
        return PhysicalBasis(
            indices=idx,
            R=flat[(0, 0)],
            R_x=r_x,
            R_y=r_y,
            R_xx=d2[0],
            R_yy=d2[2],
            R_xy=d2[1],
            det_j=float(det),
            x=float(x_d[(0, 0)]),
            y=float(y_d[(0, 0)]),
        )


def _insert_knot_1d(kv: KnotVector, hcoefs: np.ndarray, value: float):
    """Insert one knot into the homogeneous coefficient rows (axis 0)."""
    p = kv.degree
    U = kv.knots
    if not 0.0 < value < 1.0:
        raise ValueError("can only insert interior knots")
    k = kv.find_span(value)
    new = np.empty((hcoefs.shape[0] + 1,) + hcoefs.shape[1:])
    new[: k - p + 1] = hcoefs[: k - p + 1]
    new[k + 1:] = hcoefs[k:]
    for i in range(k - p + 1, k + 1):
        den = U[i + p] - U[i]
        a = (value - U[i]) / den if den > 0.0 else 0.0
        new[i] = a * hcoefs[i] + (1.0 - a) * hcoefs[i - 1]
    knots = np.insert(U, k + 1, value)
    return KnotVector(p, knots), new


def _refine_direction(surface: NurbsSurface, axis: int, subdivisions: int) -> NurbsSurface:
    kv = surface.kv_xi if axis == 0 else surface.kv_eta
    h = np.concatenate(
        (surface.points * surface.weights[..., None], surface.weights[..., None]),
        axis=2,
    )
    if axis == 1:
        h = h.transpose(1, 0, 2)
    breaks = kv.breakpoints
    for a, b in zip(breaks[:-1], breaks[1:]):
        for s in range(1, subdivisions):
            kv, h = _insert_knot_1d(kv, h, a + (b - a) * s / subdivisions)
    if axis == 1:
        h = h.transpose(1, 0, 2)
        return NurbsSurface(surface.kv_xi, kv, h[..., :2] / h[..., 2:], h[..., 2])
    return NurbsSurface(kv, surface.kv_eta, h[..., :2] / h[..., 2:], h[..., 2])


def refine_knots(surface: NurbsSurface, subdivisions: int) -> NurbsSurface:
    """Split every non-empty span into ``subdivisions`` equal parts.

    Pure knot insertion: the geometric map is preserved exactly.
    ``subdivisions = 1`` returns the surface unchanged.
    """
    if not isinstance(subdivisions, (int, np.integer)) or subdivisions < 1:
        raise ValueError("subdivisions must be a positive integer")
    if subdivisions == 1:
        return surface
    out = _refine_direction(surface, 0, subdivisions)
    return _refine_direction(out, 1, subdivisions)


def _affine_patch(degree: int, corner_map) -> NurbsSurface:
    """Patch at the requested degree reproducing an affine map exactly.

    Control points sit at the affine image of the Greville lattice (linear
    precision of the B-spline basis).
    """
    if degree < 2:
        raise ValueError("plate patches need degree >= 2 (C1 continuity)")
    kv = make_open_knot_vector(1, degree)
    g = kv.greville()
    pts = np.empty((kv.n_basis, kv.n_basis, 2))
    for i, gi in enumerate(g):
        for j, gj in enumerate(g):
            pts[i, j] = corner_map(gi, gj)
    return NurbsSurface(kv, kv, pts, np.ones((kv.n_basis, kv.n_basis)))


def square_patch(length: float, width: float, degree: int = 3) -> NurbsSurface:
    """Axis-aligned rectangle [0, L] x [0, W]."""
    if length <= 0.0 or width <= 0.0:
        raise ValueError("length and width must be positive")
    return _affine_patch(degree, lambda u, v: (length * u, width * v))


def skew_patch(length: float, width: float, angle_deg: float, degree: int = 3) -> NurbsSurface:
    """Parallelogram with the eta-sides inclined ``angle_deg`` from the y axis."""
    if length <= 0.0 or width <= 0.0:
        raise ValueError("length and width must be positive")
    if not -75.0 <= angle_deg <= 75.0:
        raise ValueError("skew angle outside the supported range")
    a = np.radians(angle_deg)
    s, c = np.sin(a), np.cos(a)
    return _affine_patch(degree, lambda u, v: (length * u + width * s * v, width * c * v))


def _elevate_bezier_1d(h: np.ndarray) -> np.ndarray:
    """One Bernstein degree elevation along the first axis (homogeneous)."""
    p = h.shape[0] - 1
    out = np.empty((p + 2,) + h.shape[1:])
    out[0] = h[0]
    out[p + 1] = h[p]
    for i in range(1, p + 1):
        a = i / (p + 1.0)
        out[i] = a * h[i - 1] + (1.0 - a) * h[i]
    return out


def _elevate_single_span(surface: NurbsSurface, times_xi: int = 0, times_eta: int = 0) -> NurbsSurface:
    """Raise the polynomial degree of a single-span patch (geometry unchanged).

    Internal constructor detail (general degree elevation of refined patches
    is out of scope): works in homogeneous coordinates so rational patches
    stay exact, and only accepts patches without interior knots.
    """
    if times_xi < 0 or times_eta < 0:
        raise ValueError("elevation counts must be non-negative")
    for kv in (surface.kv_xi, surface.kv_eta):
        if len(kv.breakpoints) != 2:
            raise ValueError("degree elevation requires a patch without interior knots")
    h = np.concatenate(
        [surface.points * surface.weights[:, :, None], surface.weights[:, :, None]],
        axis=2,
    )
    for _ in range(times_xi):
        h = _elevate_bezier_1d(h)
    h = h.transpose(1, 0, 2)
    for _ in range(times_eta):
        h = _elevate_bezier_1d(h)
    h = h.transpose(1, 0, 2)
    w = h[:, :, 2]
    pts = h[:, :, :2] / w[:, :, None]
    kv_xi = make_open_knot_vector(1, surface.kv_xi.degree + times_xi)
    kv_eta = make_open_knot_vector(1, surface.kv_eta.degree + times_eta)
    return NurbsSurface(kv_xi, kv_eta, pts, w)


def disk_patch(radius: float, degree: int = 2) -> NurbsSurface:
    """Full disk of given radius as a single rational patch.

    The base net has nine control points at degree 2; the boundary is the
    exact circle (corner weights 1/sqrt(2)); the map is regular at every
    interior point and degenerates only at the four parametric corners,
    which quadrature never samples. Higher degrees are produced by exact
    degree elevation of the quadratic patch.
    """
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    if degree < 2:
        raise ValueError("disk patch needs degree >= 2")
    kv = make_open_knot_vector(1, 2)
    s = radius / np.sqrt(2.0)
    d = radius * np.sqrt(2.0)
    w = np.sqrt(2.0) / 2.0
    pts = np.array(
        [
            [(-s, -s), (-d, 0.0), (-s, s)],
            [(0.0, -d), (0.0, 0.0), (0.0, d)],
            [(s, -s), (d, 0.0), (s, s)],
        ]
    )
    wts = np.array([[1.0, w, 1.0], [w, 1.0, w], [1.0, w, 1.0]])
    srf = NurbsSurface(kv, kv, pts, wts)
    if degree > 2:
        srf = _elevate_single_span(srf, degree - 2, degree - 2)
    return srf
