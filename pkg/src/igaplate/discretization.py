"""Plate discretization: Gauss-point basis caches, strain operators, assembly.

The kinematic unknowns per control point are (u0, v0, w0, beta_x, beta_y):
midsurface displacements, transverse deflection, and the two shear rotation
measures of the cubic-in-z displacement field. The generalized strain vector
stacks 11 components:

    (membrane 3 | deflection curvature 3 | rotation curvature 3 | shear 2)

with the deflection curvatures (-w,xx, -w,yy, -2 w,xy) carrying the fourth
order bending content, so the basis needs C1 continuity (degree >= 2).
Moderate-rotation (von Karman) membrane strain adds 1/2 (w,x, w,y) outer
products; the geometric operator Bg extracts the deflection gradient.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .errors import GeometryError
from .materials import FgmSection, effective_property
from .splines import NurbsSurface, refine_knots

__all__ = [
    "DOF_PER_POINT",
    "N_STRAIN",
    "DofMap",
    "PlateMesh",
    "build_mesh",
    "assemble_linear",
    "assemble_initial_stress",
    "assemble_nonlinear",
    "assemble_tangent_and_internal",
    "assemble_secant",
    "assemble_load",
    "ConstraintSet",
    "build_constraints",
    "reduce_matrix",
    "reduce_vector",
    "expand_vector",
    "deflection_sampler",
    "midsurface_state",
    "through_thickness_stress",
]

DOF_PER_POINT = 5
N_STRAIN = 11

U0, V0, W0, BX, BY = range(DOF_PER_POINT)


@dataclass(frozen=True)
class DofMap:
    """Control-point-major DOF numbering: dof(A, c) = 5 A + c."""

    n_points: int

    @property
    def n_dof(self) -> int:
        return DOF_PER_POINT * self.n_points

    def index(self, point: int, comp: int) -> int:
        return DOF_PER_POINT * point + comp

    def component(self, comp: int) -> np.ndarray:
        """All global indices of one displacement component."""
        return np.arange(self.n_points) * DOF_PER_POINT + comp


@dataclass
class PlateMesh:
    """Refined surface plus cached per-Gauss-point operator arrays.

    Shapes: n_e elements, ng points per element, nf functions per element,
    nd = 5 nf element DOFs.

    BL  (n_e, ng, 11, nd)  linear strain operator
    Bg  (n_e, ng, 2, nd)   deflection-gradient operator
    """

    surface: NurbsSurface
    dof: DofMap
    conn: np.ndarray
    edof: np.ndarray
    R: np.ndarray
    wdet: np.ndarray
    xy: np.ndarray
    BL: np.ndarray
    Bg: np.ndarray
    area: float

    @property
    def n_dof(self) -> int:
        return self.dof.n_dof

    @property
    def n_cp(self) -> tuple[int, int]:
        return self.surface.shape

    @property
    def n_elements(self) -> int:
        return self.conn.shape[0]


def build_mesh(surface: NurbsSurface, refinement: int = 1) -> PlateMesh:
    """Refine the patch and cache basis/operator arrays at Gauss points.

    refinement splits every non-empty knot span into that many pieces.
    Quadrature is (p+1) x (q+1) Gauss per element. Degree >= 2 in both
    directions is required by the curvature terms.
    """
    p, q = surface.kv_xi.degree, surface.kv_eta.degree
    if min(p, q) < 2:
        raise GeometryError("plate discretization needs degree >= 2 in both directions")
    srf = refine_knots(surface, refinement)
    nx, ny = srf.shape
    dof = DofMap(nx * ny)

    gx, gwx = np.polynomial.legendre.leggauss(p + 1)
    gy, gwy = np.polynomial.legendre.leggauss(q + 1)
    spans_u = srf.kv_xi.spans()
    spans_v = srf.kv_eta.spans()
    n_e = len(spans_u) * len(spans_v)
    ng = (p + 1) * (q + 1)
    nf = (p + 1) * (q + 1)

    conn = np.empty((n_e, nf), dtype=np.int64)
    R = np.empty((n_e, ng, nf))
    Rx = np.empty_like(R)
    Ry = np.empty_like(R)
    Rxx = np.empty_like(R)
    Ryy = np.empty_like(R)
    Rxy = np.empty_like(R)
    wdet = np.empty((n_e, ng))
    xy = np.empty((n_e, ng, 2))

    U, V = srf.kv_xi.knots, srf.kv_eta.knots
    e = 0
    for su in spans_u:
        ua, ub = U[su], U[su + 1]
        xg_u = 0.5 * (ua + ub) + 0.5 * (ub - ua) * gx
        wg_u = 0.5 * (ub - ua) * gwx
        for sv in spans_v:
            va, vb = V[sv], V[sv + 1]
            xg_v = 0.5 * (va + vb) + 0.5 * (vb - va) * gy
            wg_v = 0.5 * (vb - va) * gwy
            g = 0
            for iu, wu in zip(xg_u, wg_u):
                for iv, wv in zip(xg_v, wg_v):
                    pb = srf.physical_basis(iu, iv)
                    if g == 0:
                        conn[e] = pb.indices
                    R[e, g] = pb.R
                    Rx[e, g] = pb.R_x
                    Ry[e, g] = pb.R_y
                    Rxx[e, g] = pb.R_xx
                    Ryy[e, g] = pb.R_yy
                    Rxy[e, g] = pb.R_xy
                    wdet[e, g] = wu * wv * pb.det_j
                    xy[e, g] = (pb.x, pb.y)
                    g += 1
            e += 1

    nd = DOF_PER_POINT * nf
    BL = np.zeros((n_e, ng, N_STRAIN, nd))
    BL[:, :, 0, U0::5] = Rx
    BL[:, :, 1, V0::5] = Ry
    BL[:, :, 2, U0::5] = Ry
    BL[:, :, 2, V0::5] = Rx
    BL[:, :, 3, W0::5] = -Rxx
    BL[:, :, 4, W0::5] = -Ryy
    BL[:, :, 5, W0::5] = -2.0 * Rxy
    BL[:, :, 6, BX::5] = Rx
    BL[:, :, 7, BY::5] = Ry
    BL[:, :, 8, BX::5] = Ry
    BL[:, :, 8, BY::5] = Rx
    BL[:, :, 9, BX::5] = R
    BL[:, :, 10, BY::5] = R
    Bg = np.zeros((n_e, ng, 2, nd))
    Bg[:, :, 0, W0::5] = Rx
    Bg[:, :, 1, W0::5] = Ry

    edof = (DOF_PER_POINT * conn[:, :, None] + np.arange(DOF_PER_POINT)).reshape(n_e, nd)
    return PlateMesh(surface=srf, dof=dof, conn=conn, edof=edof, R=R, wdet=wdet,
                     xy=xy, BL=BL, Bg=Bg, area=float(wdet.sum()))


# ---------------------------------------------------------------------------
# assembly


def _scatter_matrix(mesh: PlateMesh, ke: np.ndarray) -> sparse.csr_matrix:
    nd = mesh.edof.shape[1]
    rows = np.repeat(mesh.edof, nd, axis=1).ravel()
    cols = np.tile(mesh.edof, (1, nd)).ravel()
    n = mesh.n_dof
    return sparse.coo_matrix((ke.reshape(-1), (rows, cols)), shape=(n, n)).tocsr()


def _scatter_vector(mesh: PlateMesh, fe: np.ndarray) -> np.ndarray:
    F = np.zeros(mesh.n_dof)
    np.add.at(F, mesh.edof.ravel(), fe.ravel())
    return F


def _theta(mesh: PlateMesh, q: np.ndarray) -> np.ndarray:
    """Deflection gradient (n_e, ng, 2) of a global solution vector."""
    return np.einsum("egjb,eb->egj", mesh.Bg, q[mesh.edof])


def _bnl(mesh: PlateMesh, theta: np.ndarray) -> np.ndarray:
    """Moderate-rotation strain operator: A_theta Bg in the membrane rows."""
    B = np.zeros_like(mesh.BL)
    t1 = theta[:, :, 0][..., None]
    t2 = theta[:, :, 1][..., None]
    g1 = mesh.Bg[:, :, 0, :]
    g2 = mesh.Bg[:, :, 1, :]
    B[:, :, 0, :] = t1 * g1
    B[:, :, 1, :] = t2 * g2
    B[:, :, 2, :] = t2 * g1 + t1 * g2
    return B


def _btdb(mesh: PlateMesh, b1: np.ndarray, dhat: np.ndarray, b2: np.ndarray) -> np.ndarray:
    return np.einsum("egia,ij,egjb,eg->eab", b1, dhat, b2, mesh.wdet, optimize=True)


def _kg_elements(mesh: PlateMesh, nmat: np.ndarray) -> np.ndarray:
    """Geometric stiffness elements for a membrane-force field.

    nmat is (2, 2) constant or (n_e, ng, 2, 2).
    """
    if nmat.ndim == 2:
        nmat = np.broadcast_to(nmat, mesh.Bg.shape[:2] + (2, 2))
    return np.einsum("egia,egij,egjb,eg->eab", mesh.Bg, nmat, mesh.Bg, mesh.wdet,
                     optimize=True)


def _n_field(sig: np.ndarray) -> np.ndarray:
    """Membrane rows of a stress-resultant field as 2x2 matrices."""
    out = np.empty(sig.shape[:2] + (2, 2))
    out[..., 0, 0] = sig[..., 0]
    out[..., 1, 1] = sig[..., 1]
    out[..., 0, 1] = sig[..., 2]
    out[..., 1, 0] = sig[..., 2]
    return out


def assemble_linear(mesh: PlateMesh, dhat: np.ndarray) -> sparse.csr_matrix:
    """Linear stiffness: integral of BL' Dhat BL."""
    return _scatter_matrix(mesh, _btdb(mesh, mesh.BL, dhat, mesh.BL))


def assemble_initial_stress(mesh: PlateMesh, n_ref: np.ndarray) -> sparse.csr_matrix:
    """Initial-stress (geometric) operator for a constant membrane force state.

    n_ref is the 2x2 matrix [[Nx, Nxy], [Nxy, Ny]]; for thermal buckling it
    holds the in-plane force of the reference temperature field.
    """
    n_ref = np.asarray(n_ref, dtype=float)
    if n_ref.shape != (2, 2):
        raise ValueError("n_ref must be a 2x2 membrane force matrix")
    return _scatter_matrix(mesh, _kg_elements(mesh, n_ref))


def assemble_nonlinear(mesh: PlateMesh, dhat: np.ndarray, q: np.ndarray) -> sparse.csr_matrix:
    """Displacement-dependent secant stiffness (generally non-symmetric).

    With X = int BL' Dhat BNL(q) and Y = int BNL' Dhat BNL, returns
    X/2 + X' + Y/2, so that (K_L + K_NL(q)) q equals the internal force of
    the moderate-rotation strain measure exactly.
    """
    Bnl = _bnl(mesh, _theta(mesh, q))
    ke_x = _btdb(mesh, mesh.BL, dhat, Bnl)
    ke_y = _btdb(mesh, Bnl, dhat, Bnl)
    ke = 0.5 * ke_x + ke_x.transpose(0, 2, 1) + 0.5 * ke_y
    return _scatter_matrix(mesh, ke)


def assemble_tangent_and_internal(mesh: PlateMesh, dhat: np.ndarray,
                                  sigma0: np.ndarray, q: np.ndarray):
    """Consistent tangent and internal force at state q.

    sigma0 is the 11-component initial (thermal) stress resultant. The
    internal force is int (BL+BNL)' (Dhat eps - sigma0), whose q-derivative
    is int (BL+BNL)' Dhat (BL+BNL) plus the geometric term driven by the
    current membrane force (thermal part included).
    """
    qe = q[mesh.edof]
    Bnl = _bnl(mesh, _theta(mesh, q))
    Bt = mesh.BL + Bnl
    eps = np.einsum("egib,eb->egi", mesh.BL + 0.5 * Bnl, qe)
    sig = np.einsum("ij,egj->egi", dhat, eps) - sigma0[None, None, :]
    fe = np.einsum("egia,egi,eg->ea", Bt, sig, mesh.wdet)
    ke = _btdb(mesh, Bt, dhat, Bt) + _kg_elements(mesh, _n_field(sig[..., :3]))
    return _scatter_matrix(mesh, ke), _scatter_vector(mesh, fe)


def assemble_secant(mesh: PlateMesh, dhat: np.ndarray, q: np.ndarray) -> sparse.csr_matrix:
    """Symmetric operator K(q) with K(q) q = (K_L + K_NL(q)) q exactly.

    Built from the half-rotation operator BH = BL + BNL/2 plus half the
    geometric stiffness of the displacement-driven membrane force; used as
    the symmetric pencil matrix in post-buckling eigenvalue sweeps.
    """
    qe = q[mesh.edof]
    Bnl = _bnl(mesh, _theta(mesh, q))
    Bh = mesh.BL + 0.5 * Bnl
    eps = np.einsum("egib,eb->egi", Bh, qe)
    sig = np.einsum("ij,egj->egi", dhat, eps)
    ke = _btdb(mesh, Bh, dhat, Bh) + 0.5 * _kg_elements(mesh, _n_field(sig[..., :3]))
    return _scatter_matrix(mesh, ke)


def assemble_load(mesh: PlateMesh, sigma0: np.ndarray | None = None,
                  f_z: float = 0.0) -> np.ndarray:
    """External load vector: thermal resultant work plus transverse pressure."""
    F = np.zeros(mesh.n_dof)
    if sigma0 is not None and np.any(sigma0):
        fe = np.einsum("egia,i,eg->ea", mesh.BL, np.asarray(sigma0, dtype=float),
                       mesh.wdet)
        F += _scatter_vector(mesh, fe)
    if f_z:
        fw = np.einsum("egf,eg->ef", mesh.R, mesh.wdet) * f_z
        fe = np.zeros(mesh.edof.shape)
        fe[:, W0::5] = fw
        F += _scatter_vector(mesh, fe)
    return F


# ---------------------------------------------------------------------------
# boundary conditions

_SS_SETS = {
    # (components on xi = const edges, components on eta = const edges)
    "ssss1": ((V0, W0, BY), (U0, W0, BX)),
    "ssss2": ((U0, V0, W0, BY), (U0, V0, W0, BX)),
    "ssss3": ((U0, V0, W0), (U0, V0, W0)),
}


@dataclass(frozen=True)
class ConstraintSet:
    """Homogeneous single-DOF constraints applied by symmetric elimination."""

    n_dof: int
    fixed: np.ndarray
    free: np.ndarray
    label: str


def _grid_points(mesh: PlateMesh, rows, cols) -> set[int]:
    nx, ny = mesh.n_cp
    pts = set()
    for i in rows:
        pts.update(i * ny + j for j in range(ny))
    for j in cols:
        pts.update(i * ny + j for i in range(nx))
    return pts


def build_constraints(mesh: PlateMesh, kind: str) -> ConstraintSet:
    """Edge constraint sets on the control net.

    ssss1    movable simple support: tangential in-plane displacement, w,
             and tangential rotation fixed per edge; edge-normal motion free
    ssss2    immovable simple support: both in-plane displacements, w, and
             the tangential rotation fixed on every edge
    ssss3    immovable with free rotations: u, v, w fixed on every edge
    clamped  all five DOFs on the boundary ring plus w on the next ring of
             control points, enforcing w = dw/dn = 0 along the edge
    free     no constraints

    "Tangential" is read per parametric edge family: edges of constant xi
    run along eta (second in-plane axis) and vice versa.
    """
    key = kind.strip().lower()
    nx, ny = mesh.n_cp
    dof = mesh.dof
    fixed: set[int] = set()
    if key == "free":
        pass
    elif key in _SS_SETS:
        comps_xi, comps_eta = _SS_SETS[key]
        for pt in _grid_points(mesh, (0, nx - 1), ()):
            fixed.update(dof.index(pt, c) for c in comps_xi)
        for pt in _grid_points(mesh, (), (0, ny - 1)):
            fixed.update(dof.index(pt, c) for c in comps_eta)
    elif key == "clamped":
        if nx < 5 or ny < 5:
            raise ValueError("clamped edges need at least a 5x5 control net")
        for pt in _grid_points(mesh, (0, nx - 1), (0, ny - 1)):
            fixed.update(dof.index(pt, c) for c in range(DOF_PER_POINT))
        for pt in _grid_points(mesh, (1, nx - 2), (1, ny - 2)):
            fixed.add(dof.index(pt, W0))
    else:
        raise ValueError(f"unknown constraint kind {kind!r}")
    fixed_arr = np.array(sorted(fixed), dtype=np.int64)
    mask = np.ones(dof.n_dof, dtype=bool)
    mask[fixed_arr] = False
    free = np.nonzero(mask)[0]
    if free.size == 0:
        raise ValueError("constraint set leaves no free DOFs")
    return ConstraintSet(n_dof=dof.n_dof, fixed=fixed_arr, free=free, label=key)


def reduce_matrix(K: sparse.spmatrix, cs: ConstraintSet) -> sparse.csr_matrix:
    K = K.tocsr()
    return K[cs.free][:, cs.free]


def reduce_vector(F: np.ndarray, cs: ConstraintSet) -> np.ndarray:
    return F[cs.free]


def expand_vector(q_red: np.ndarray, cs: ConstraintSet) -> np.ndarray:
    q = np.zeros(cs.n_dof)
    q[cs.free] = q_red
    return q


# ---------------------------------------------------------------------------
# field recovery


def deflection_sampler(mesh: PlateMesh, n: int = 21):
    """Matrix S (n*n, n_points) with (S q_w) = physical w on a parametric grid.

    Plain rational basis values are used (no Jacobian inversion), so the grid
    may include parametric corners where the geometry map is singular.
    """
    srf = mesh.surface
    t = np.linspace(0.0, 1.0, n)
    S = np.zeros((n * n, mesh.dof.n_points))
    for a, xi in enumerate(t):
        for b, eta in enumerate(t):
            R, _, idx = srf.rational_basis(xi, eta)
            S[a * n + b, idx.ravel()] = R[(0, 0)].ravel()
    return S


def midsurface_state(mesh: PlateMesh, q: np.ndarray, xi: float, eta: float) -> dict:
    """Displacements and generalized strains at one parametric point."""
    pb = mesh.surface.physical_basis(xi, eta)
    ql = q[(DOF_PER_POINT * pb.indices[:, None] + np.arange(DOF_PER_POINT)).ravel()]
    ql = ql.reshape(-1, DOF_PER_POINT)
    u = pb.R @ ql
    theta = np.array([pb.R_x @ ql[:, W0], pb.R_y @ ql[:, W0]])
    em = np.array([
        pb.R_x @ ql[:, U0] + 0.5 * theta[0] ** 2,
        pb.R_y @ ql[:, V0] + 0.5 * theta[1] ** 2,
        pb.R_y @ ql[:, U0] + pb.R_x @ ql[:, V0] + theta[0] * theta[1],
    ])
    k1 = -np.array([pb.R_xx @ ql[:, W0], pb.R_yy @ ql[:, W0], 2.0 * pb.R_xy @ ql[:, W0]])
    k2 = np.array([
        pb.R_x @ ql[:, BX],
        pb.R_y @ ql[:, BY],
        pb.R_y @ ql[:, BX] + pb.R_x @ ql[:, BY],
    ])
    beta = np.array([pb.R @ ql[:, BX], pb.R @ ql[:, BY]])
    return {"x": pb.x, "y": pb.y, "u": u, "theta": theta,
            "em": em, "k1": k1, "k2": k2, "beta": beta}


def through_thickness_stress(mesh: PlateMesh, q: np.ndarray, section: FgmSection,
                             delta_T=None, temperature=None,
                             xi: float = 0.5, eta: float = 0.5,
                             n_z: int = 81) -> dict:
    """In-plane and transverse-shear stresses through the thickness.

    delta_T: optional callable z -> temperature change (thermal strain).
    temperature: optional callable z -> absolute Kelvin temperature for the
    property evaluation; defaults to 300 K.
    """
    st = midsurface_state(mesh, q, xi, eta)
    h = section.thickness
    z = np.linspace(-h / 2.0, h / 2.0, n_z)
    f = z - 4.0 * z**3 / (3.0 * h * h)
    fp = 1.0 - 4.0 * z * z / (h * h)
    T = temperature(z) if temperature is not None else np.full_like(z, 300.0)
    E = effective_property(section, "E", z, T)
    nu = effective_property(section, "nu", z, T)
    eps = (st["em"][:, None] + z[None, :] * st["k1"][:, None]
           + f[None, :] * st["k2"][:, None])
    if delta_T is not None:
        alpha = effective_property(section, "alpha", z, T)
        th = alpha * np.asarray(delta_T(z), dtype=float)
        eps = eps - np.array([th, th, np.zeros_like(th)])
    c = E / (1.0 - nu * nu)
    sx = c * (eps[0] + nu * eps[1])
    sy = c * (eps[1] + nu * eps[0])
    sxy = E / (2.0 * (1.0 + nu)) * eps[2]
    g = E / (2.0 * (1.0 + nu))
    txz = g * fp * st["beta"][0]
    tyz = g * fp * st["beta"][1]
    return {"z": z, "sigma_x": sx, "sigma_y": sy, "tau_xy": sxy,
            "tau_xz": txz, "tau_yz": tyz}
