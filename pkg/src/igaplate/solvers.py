"""Static, buckling, and post-buckling drivers for the plate model.

A PlateModel bundles the discretized patch, the graded section, the
temperature profile, the edge constraints, and the transverse pressure.
Solvers share one loading convention: the load factor s scales the whole
temperature change and the pressure together (proportional loading), while
buckling sweeps replace the profile's rise parameter.

Temperature-dependent (TD) analyses re-evaluate the section integrals at the
absolute temperature field of the current state; temperature-independent
(TID) analyses evaluate everything at a fixed reference temperature.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
from scipy.sparse import linalg as spla

from . import discretization as disc
from . import materials as mat
from . import thermal as th
from .errors import SolverError

__all__ = [
    "PlateModel",
    "StaticResult",
    "NewtonStep",
    "NewtonResult",
    "BucklingResult",
    "TraceEntry",
    "PostBucklingTrace",
    "solve_linear_static",
    "solve_newton",
    "solve_linear_buckling",
    "solve_thermal_postbuckling",
]

_EIG_SEED = 12345


@dataclass
class PlateModel:
    """Discrete thermo-mechanical plate problem."""

    mesh: disc.PlateMesh
    section: mat.FgmSection
    constraints: disc.ConstraintSet
    profile: th.TemperatureProfile | None = None
    f_z: float = 0.0
    temperature_dependent: bool = False
    reference_temperature: float = 300.0
    convention: str = "consistent"
    _sampler: np.ndarray | None = field(default=None, repr=False, compare=False)

    def sampler(self) -> np.ndarray:
        """Deflection sampling matrix on a 21 x 21 parametric grid (cached)."""
        if self._sampler is None:
            self._sampler = disc.deflection_sampler(self.mesh, 21)
        return self._sampler

    def sampled_w(self, q: np.ndarray) -> np.ndarray:
        return self.sampler() @ q[disc.W0::disc.DOF_PER_POINT]


@dataclass
class StaticResult:
    q: np.ndarray
    scale: float


@dataclass
class NewtonStep:
    scale: float
    residuals: list[float]
    converged: bool
    q: np.ndarray | None = None


@dataclass
class NewtonResult:
    q: np.ndarray
    steps: list[NewtonStep]

    @property
    def converged(self) -> bool:
        return all(s.converged for s in self.steps)


@dataclass
class BucklingResult:
    load_factor: float
    n_cr: float
    delta_T_cr: float
    mode: np.ndarray
    factors: np.ndarray
    scalars: mat.ThermalScalars


@dataclass
class TraceEntry:
    amplitude: float
    delta_T: float
    cycles: int
    converged: bool
    mode_switch: bool


@dataclass
class PostBucklingTrace:
    critical_delta_T: float
    entries: list[TraceEntry]
    temperature_dependent: bool

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([e.amplitude for e in self.entries])

    @property
    def temperatures(self) -> np.ndarray:
        return np.array([e.delta_T for e in self.entries])


# ---------------------------------------------------------------------------
# material/state plumbing


def _mean_face_delta(profile: th.TemperatureProfile, scale: float, gradient=None) -> float:
    D = profile.gradient if gradient is None else gradient
    if profile.kind == "uniform":
        return scale * D
    return scale * (profile.delta_m + 0.5 * D)


def _state_fields(model: PlateModel, scale: float = 1.0, gradient=None):
    """Property-temperature (scalar or field) and temperature-change field."""
    prof = model.profile
    if prof is None:
        return model.reference_temperature, None, model.reference_temperature
    p = prof if gradient is None else prof.with_gradient(gradient)
    if model.temperature_dependent:
        contrast_T = p.T_ref + p.kelvin_offset + _mean_face_delta(p, scale)
        prop = th.absolute_field(p, model.section, scale, prop_T=contrast_T)
    else:
        contrast_T = model.reference_temperature
        prop = model.reference_temperature
    delta = th.delta_field(p, model.section, scale, prop_T=contrast_T)
    return prop, delta, contrast_T


@dataclass
class _SystemState:
    dhat: np.ndarray
    sigma0: np.ndarray
    F_mech: np.ndarray
    F_th: np.ndarray


def _system_state(model: PlateModel, scale: float) -> _SystemState:
    prop, delta, _ = _state_fields(model, scale)
    dhat = mat.section_stiffness(model.section, prop).dhat()
    if delta is None:
        sigma0 = np.zeros(disc.N_STRAIN)
    else:
        sigma0 = mat.thermal_resultants(model.section, delta, prop).sigma0()
    F_mech = disc.assemble_load(model.mesh, f_z=model.f_z * scale)
    F_th = disc.assemble_load(model.mesh, sigma0=sigma0)
    return _SystemState(dhat=dhat, sigma0=sigma0, F_mech=F_mech, F_th=F_th)


def _solve_sparse(K, rhs) -> np.ndarray:
    out = spla.spsolve(K.tocsc(), rhs)
    if not np.all(np.isfinite(out)):
        raise SolverError("linear solve produced non-finite values (singular system?)")
    return out


# ---------------------------------------------------------------------------
# statics


def solve_linear_static(model: PlateModel, scale: float = 1.0) -> StaticResult:
    """Small-deflection solution: K_L q = F_mech + F_th."""
    cs = model.constraints
    st = _system_state(model, scale)
    K = disc.reduce_matrix(disc.assemble_linear(model.mesh, st.dhat), cs)
    F = disc.reduce_vector(st.F_mech + st.F_th, cs)
    q = disc.expand_vector(_solve_sparse(K, F), cs)
    return StaticResult(q=q, scale=scale)


def solve_newton(model: PlateModel, steps: int = 5, tol: float = 1e-9,
                 max_iter: int = 25, q0: np.ndarray | None = None) -> NewtonResult:
    """Moderate-rotation solution by Newton iteration with load stepping.

    The residual is the internal force of the current state minus the
    mechanical load; the thermal loading enters through the initial stress
    resultant inside the internal force. Residual norms are measured against
    the combined mechanical + thermal load norm (absolute when both vanish).
    Raises SolverError when a step fails to converge.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    cs = model.constraints
    mesh = model.mesh
    q = np.zeros(mesh.n_dof) if q0 is None else q0.copy()
    records: list[NewtonStep] = []
    for k in range(1, steps + 1):
        s = k / steps
        st = _system_state(model, s)
        F_red = disc.reduce_vector(st.F_mech, cs)
        ref = float(np.linalg.norm(F_red) + np.linalg.norm(disc.reduce_vector(st.F_th, cs)))
        ref = ref if ref > 0.0 else 1.0
        hist: list[float] = []
        ok = False
        for _ in range(max_iter):
            Kt, fint = disc.assemble_tangent_and_internal(mesh, st.dhat, st.sigma0, q)
            r = disc.reduce_vector(fint, cs) - F_red
            rn = float(np.linalg.norm(r)) / ref
            hist.append(rn)
            if rn < tol:
                ok = True
                break
            dq = _solve_sparse(disc.reduce_matrix(Kt, cs), -r)
            q[cs.free] += dq
        records.append(NewtonStep(scale=s, residuals=hist, converged=ok, q=q.copy()))
        if not ok:
            raise SolverError(
                f"Newton did not converge at load factor {s:.3f}; "
                f"last residual {hist[-1]:.3e} after {max_iter} iterations"
            )
    return NewtonResult(q=q, steps=records)


def center_deflection(model: PlateModel, q: np.ndarray) -> float:
    """Transverse deflection at the parametric center of the patch."""
    state = disc.midsurface_state(model.mesh, q, 0.5, 0.5)
    return float(state["u"][disc.W0])


# ---------------------------------------------------------------------------
# eigenvalue buckling


def _eig_factors(K0_red, A_red, n_modes: int, v0: np.ndarray | None = None):
    """Smallest positive load factors of (A - lambda K0) v = 0.

    Solved in reciprocal form K0 v = mu A v for the largest mu (A must be
    positive definite); lambda = 1/mu. Falls back to a dense generalized
    solve when the iterative solver fails.
    """
    n = A_red.shape[0]
    k = max(1, min(n_modes, n - 2))
    mu = vecs = None
    if n > 50:
        rng = np.random.default_rng(_EIG_SEED)
        start = v0 if v0 is not None else rng.standard_normal(n)
        try:
            mu, vecs = spla.eigsh(K0_red, k=k, M=A_red, which="LA", v0=start,
                                  maxiter=max(4000, 40 * n))
        except Exception:
            mu = None
    if mu is None:
        mu, vecs = sla.eigh(K0_red.toarray(), A_red.toarray())
        mu, vecs = mu[::-1], vecs[:, ::-1]
    order = np.argsort(mu)[::-1]
    mu, vecs = mu[order], vecs[:, order]
    top = float(mu[0])
    if not top > 0.0:
        raise SolverError("no compressive buckling mode found")
    keep = mu > 1e-12 * top
    lams = 1.0 / mu[keep]
    return lams[:n_modes], vecs[:, keep][:, :n_modes]


def _fix_mode_sign(model: PlateModel, q_mode: np.ndarray):
    w = model.sampled_w(q_mode)
    i = int(np.argmax(np.abs(w)))
    if w[i] < 0.0:
        return -q_mode, -w
    return q_mode, w


@dataclass
class _BucklingState:
    dhat: np.ndarray
    K_L_red: object
    K0_red: object
    n_unit: float
    scalars: mat.ThermalScalars


def _buckling_state(model: PlateModel, gradient: float, scale: float) -> _BucklingState:
    """Stiffness, unit-rise initial-stress operator, and conversion scalars.

    gradient/scale set the temperature state for TD property evaluation;
    they are ignored for TID.
    """
    prop, _, contrast_T = _state_fields(model, scale=scale, gradient=gradient)
    sec = model.section
    dhat = mat.section_stiffness(sec, prop).dhat()
    n_unit = float(mat.thermal_resultants(sec, 1.0, prop).N[0])
    if not n_unit > 0.0:
        raise SolverError("unit temperature rise produces no compressive force")
    K_L = disc.assemble_linear(model.mesh, dhat)
    K0 = disc.assemble_initial_stress(model.mesh, np.diag((n_unit, n_unit)))
    eta = None
    if model.profile is not None and model.profile.kind == "conduction":
        trunc = model.profile.truncation
        eta = lambda z: th.eta_at(sec, z, truncation=trunc, T=contrast_T)  # noqa: E731
    scalars = mat.thermal_scalars(sec, prop, eta=eta, convention=model.convention)
    cs = model.constraints
    return _BucklingState(dhat=dhat, K_L_red=disc.reduce_matrix(K_L, cs),
                          K0_red=disc.reduce_matrix(K0, cs), n_unit=n_unit,
                          scalars=scalars)


def _convert(model: PlateModel, n_cr: float, scalars: mat.ThermalScalars) -> float:
    prof = model.profile
    return th.critical_delta_T(n_cr, scalars, prof.kind, prof.delta_m)


def solve_linear_buckling(model: PlateModel, n_modes: int = 4,
                          ref_scale: float = 1.0) -> BucklingResult:
    """Critical temperature of the flat state.

    The reference initial-stress operator is built from a uniform rise of
    ref_scale (so load factors scale as 1/ref_scale while the physical
    critical force n_cr stays invariant). Properties are evaluated at the
    initial temperature state; use solve_thermal_postbuckling for the
    self-consistent temperature-dependent critical point.
    """
    if model.profile is None:
        raise SolverError("thermal buckling needs a temperature profile")
    st = _buckling_state(model, gradient=0.0, scale=0.0)
    lams, vecs = _eig_factors(st.K0_red * ref_scale, st.K_L_red, n_modes)
    n_cr = lams[0] * st.n_unit * ref_scale
    mode = disc.expand_vector(np.ascontiguousarray(vecs[:, 0]), model.constraints)
    mode, w = _fix_mode_sign(model, mode)
    mode = mode / np.abs(w).max()
    return BucklingResult(load_factor=float(lams[0]), n_cr=float(n_cr),
                          delta_T_cr=float(_convert(model, n_cr, st.scalars)),
                          mode=mode, factors=np.asarray(lams) * ref_scale,
                          scalars=st.scalars)


def solve_thermal_postbuckling(model: PlateModel, amplitudes=None, tol: float = 0.01,
                               max_cycles: int = 50, n_modes: int = 4) -> PostBucklingTrace:
    """Post-buckling temperature vs deflection amplitude for bifurcating plates.

    For each amplitude a (max physical |w| / thickness) the previous mode is
    scaled to that amplitude, the displacement-dependent stiffness is rebuilt,
    and the eigenproblem (K(q) - lambda K0) v = 0 is re-solved, warm-starting
    from the previous mode; for TD sections the material state is also updated
    to the current critical temperature. A cycle converges when the relative
    change of the critical rise drops below tol. Entries that hit max_cycles
    are reported with converged=False. A drop of the mode-shape overlap below
    0.5 between cycles flags a mode switch (secondary instability).
    """
    if model.profile is None:
        raise SolverError("thermal post-buckling needs a temperature profile")
    if amplitudes is None:
        amplitudes = np.linspace(0.05, 2.0, 20)
    cs = model.constraints
    mesh = model.mesh
    h = model.section.thickness
    td = model.temperature_dependent

    # flat-state critical point, iterated to self-consistency when TD
    state = _buckling_state(model, gradient=0.0, scale=0.0)
    delta_T = None
    q_mode = None
    for _ in range(max_cycles):
        v0 = None if q_mode is None else disc.reduce_vector(q_mode, cs)
        lams, vecs = _eig_factors(state.K0_red, state.K_L_red, n_modes, v0=v0)
        new_T = _convert(model, lams[0] * state.n_unit, state.scalars)
        q_mode = disc.expand_vector(np.ascontiguousarray(vecs[:, 0]), cs)
        done = (not td) or (delta_T is not None
                            and abs(new_T - delta_T) <= tol * abs(new_T))
        delta_T = new_T
        if done:
            break
        state = _buckling_state(model, gradient=delta_T, scale=1.0)
    critical = float(delta_T)

    q_mode, w_prev = _fix_mode_sign(model, q_mode)
    entries: list[TraceEntry] = []
    for a in np.asarray(amplitudes, dtype=float):
        cycles = 0
        converged = False
        switched = False
        while cycles < max_cycles:
            cycles += 1
            if td:
                state = _buckling_state(model, gradient=delta_T, scale=1.0)
            q_a = q_mode * (a * h / np.abs(w_prev).max())
            K_sec = disc.reduce_matrix(disc.assemble_secant(mesh, state.dhat, q_a), cs)
            lams, vecs = _eig_factors(state.K0_red, K_sec, n_modes,
                                      v0=disc.reduce_vector(q_mode, cs))
            new_T = _convert(model, lams[0] * state.n_unit, state.scalars)
            q_new = disc.expand_vector(np.ascontiguousarray(vecs[:, 0]), cs)
            q_new, w_new = _fix_mode_sign(model, q_new)
            denom = np.linalg.norm(w_prev) * np.linalg.norm(w_new)
            if denom > 0.0 and abs(float(w_prev @ w_new)) / denom < 0.5:
                switched = True
            q_mode, w_prev = q_new, w_new
            shift = abs(new_T - delta_T)
            delta_T = new_T
            if shift <= tol * abs(new_T):
                converged = True
                break
        entries.append(TraceEntry(amplitude=float(a), delta_T=float(delta_T),
                                  cycles=cycles, converged=converged,
                                  mode_switch=switched))
    return PostBucklingTrace(critical_delta_T=critical, entries=entries,
                             temperature_dependent=td)
