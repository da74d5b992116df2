"""Functionally graded plate sections.

Two-phase power-law grading through the thickness, cubic-in-temperature phase
coefficients, and the through-thickness section integrals a shear-deformable
plate model needs: membrane/bending/higher-order stiffness blocks, thermal
force/moment resultants, and the scalar thermal integrals used to convert
critical in-plane forces to critical temperature rises.

Conventions: z runs over [-h/2, h/2]; the ceramic volume fraction is
(1/2 + z/h)^n so the top surface (z = +h/2) is ceramic-rich; temperatures fed
to phase coefficient evaluation are absolute (Kelvin).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError

__all__ = [
    "PhaseCoefficients",
    "FgmSection",
    "SectionStiffness",
    "ThermalResultants",
    "ThermalScalars",
    "MATERIALS",
    "property_at",
    "effective_property",
    "section_stiffness",
    "thermal_resultants",
    "thermal_scalars",
    "lookup_phase",
]

_PROPS = ("E", "nu", "alpha", "k", "rho")


@dataclass(frozen=True)
class PhaseCoefficients:
    """One constituent phase; each property is a (P-1, P0, P1, P2, P3) tuple.

    Property value at absolute temperature T:
        P(T) = P0 * (P-1 / T + 1 + P1 T + P2 T^2 + P3 T^3)
    Temperature-independent phases carry only P0.
    """

    name: str
    E: tuple
    nu: tuple
    alpha: tuple
    k: tuple
    rho: tuple

    def __post_init__(self):
        for prop in _PROPS:
            c = tuple(float(v) for v in getattr(self, prop))
            if len(c) != 5:
                raise ValueError(f"{self.name}.{prop}: expected 5 coefficients")
            object.__setattr__(self, prop, c)
        for prop in ("E", "k", "rho"):
            if getattr(self, prop)[1] <= 0.0:
                raise ValueError(f"{self.name}.{prop}: P0 must be positive")

    def value(self, prop: str, T):
        return property_at(self, prop, T)

    def is_constant(self) -> bool:
        return all(
            getattr(self, prop)[0] == 0.0 and all(c == 0.0 for c in getattr(self, prop)[2:])
            for prop in _PROPS
        )


def property_at(phase: PhaseCoefficients, prop: str, T):
    """Evaluate one phase property at absolute temperature(s) T."""
    if prop not in _PROPS:
        raise ValueError(f"unknown property {prop!r}")
    pm1, p0, p1, p2, p3 = getattr(phase, prop)
    T = np.asarray(T, dtype=float)
    if np.any(T <= 0.0) and pm1 != 0.0:
        raise ValueError("absolute temperature must be positive for P_-1 terms")
    with np.errstate(divide="ignore"):
        inv = np.where(T > 0.0, pm1 / np.where(T > 0.0, T, 1.0), 0.0)
    out = p0 * (inv + 1.0 + p1 * T + p2 * T**2 + p3 * T**3)
    return float(out) if out.ndim == 0 else out


def _tid(name, E, nu, alpha, k, rho) -> PhaseCoefficients:
    z = (0.0, 0.0, 0.0)
    return PhaseCoefficients(
        name,
        (0.0, E) + z,
        (0.0, nu) + z,
        (0.0, alpha) + z,
        (0.0, k) + z,
        (0.0, rho) + z,
    )


MATERIALS: dict[str, PhaseCoefficients] = {
    "Al": _tid("Al", 70e9, 0.3, 23e-6, 204.0, 2707.0),
    "Al2O3": _tid("Al2O3", 380e9, 0.3, 7.2e-6, 10.4, 3800.0),
    "ZrO2": _tid("ZrO2", 151e9, 0.3, 10e-6, 2.09, 3000.0),
    "Si3N4": PhaseCoefficients(
        "Si3N4",
        E=(0.0, 3.4843e11, -3.0700e-4, 2.1600e-7, -8.946e-11),
        nu=(0.0, 0.24, 0.0, 0.0, 0.0),
        alpha=(0.0, 5.8723e-6, 9.0950e-4, 0.0, 0.0),
        k=(0.0, 13.723, -1.0320e-3, 5.47e-7, -7.88e-11),
        rho=(0.0, 2370.0, 0.0, 0.0, 0.0),
    ),
    "SUS304": PhaseCoefficients(
        "SUS304",
        E=(0.0, 2.0104e11, 3.0790e-4, -6.534e-7, 0.0),
        nu=(0.0, 0.3262, -2.00e-4, 3.80e-7, 0.0),
        alpha=(0.0, 1.2330e-5, 8.0860e-4, 0.0, 0.0),
        k=(0.0, 15.379, -1.264e-3, 2.09e-6, -7.22e-10),
        rho=(0.0, 8166.0, 0.0, 0.0, 0.0),
    ),
}


def lookup_phase(name: str) -> PhaseCoefficients:
    """Database lookup, tolerant of case and subscript-free spellings."""
    key = name.replace("_", "").replace(" ", "").lower()
    for db_name, phase in MATERIALS.items():
        if db_name.lower() == key:
            return phase
    raise KeyError(f"unknown material {name!r}; known: {sorted(MATERIALS)}")


@dataclass(frozen=True)
class FgmSection:
    """Graded section: ceramic-rich top, metal-rich bottom.

    index is the power-law exponent n >= 0; n = 0 gives pure ceramic,
    n -> inf approaches pure metal.
    """

    ceramic: PhaseCoefficients
    metal: PhaseCoefficients
    thickness: float
    index: float

    def __post_init__(self):
        if self.thickness <= 0.0:
            raise ValueError("thickness must be positive")
        if self.index < 0.0:
            raise ValueError("gradient index must be non-negative")

    def volume_fraction(self, z):
        """Ceramic volume fraction at height(s) z in [-h/2, h/2]."""
        h = self.thickness
        z = np.asarray(z, dtype=float)
        if np.any(z < -h / 2 - 1e-12 * h) or np.any(z > h / 2 + 1e-12 * h):
            raise ValueError("z outside the section thickness")
        u = np.clip(z / h + 0.5, 0.0, 1.0)
        if self.index == 0.0:
            out = np.ones_like(u)
        else:
            out = u**self.index
        return float(out) if out.ndim == 0 else out

    def is_constant(self) -> bool:
        return self.ceramic.is_constant() and self.metal.is_constant()


def effective_property(section: FgmSection, prop: str, z, T):
    """Rule-of-mixture property at height z and absolute temperature T.

    T may be a scalar or an array matching z (a through-thickness field).
    """
    v = section.volume_fraction(z)
    pc = property_at(section.ceramic, prop, T)
    pm = property_at(section.metal, prop, T)
    out = pm + (pc - pm) * v
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class SectionStiffness:
    """Constitutive blocks of the shear-deformable plate law.

    A, B, D, E, F, H are the in-plane 3x3 blocks (weights 1, z, z^2, f, zf,
    f^2 over the plane-stress matrix); Ds is the 2x2 transverse shear block
    (weight f'^2 over the shear modulus).
    """

    A: np.ndarray
    B: np.ndarray
    D: np.ndarray
    E: np.ndarray
    F: np.ndarray
    H: np.ndarray
    Ds: np.ndarray

    def dhat(self) -> np.ndarray:
        """Full 11x11 generalized constitutive matrix."""
        out = np.zeros((11, 11))
        blocks = ((self.A, self.B, self.E), (self.B, self.D, self.F), (self.E, self.F, self.H))
        for i in range(3):
            for j in range(3):
                out[3 * i: 3 * i + 3, 3 * j: 3 * j + 3] = blocks[i][j]
        out[9:, 9:] = self.Ds
        return out


@dataclass(frozen=True)
class ThermalResultants:
    """Thermal force, moment and higher-order moment resultants (3-vectors)."""

    N: np.ndarray
    M: np.ndarray
    P: np.ndarray

    def sigma0(self) -> np.ndarray:
        """11-vector of initial (thermal) generalized stresses; shear rows 0."""
        return np.concatenate((self.N, self.M, self.P, np.zeros(2)))

    def n_matrix(self) -> np.ndarray:
        """2x2 in-plane thermal force matrix [[Nx, Nxy], [Nxy, Ny]]."""
        return np.array([[self.N[0], self.N[2]], [self.N[2], self.N[1]]])


@dataclass(frozen=True)
class ThermalScalars:
    """Through-thickness integrals converting in-plane force to temperature.

    X: weight 1 (uniform rise), Y: weight z/h + 1/2 (linear rise),
    Z: weight eta(z) (conduction rise, None when no profile was supplied).
    """

    X: float
    Y: float
    Z: float | None


@lru_cache(maxsize=32)
def _gauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _adaptive_integral(fn, h: float, tol: float = 1e-10, start: int = 20, cap: int = 20480):
    """Integrate fn(z) (vectorized, returns (..., nz)) over [-h/2, h/2].

    Gauss-Legendre with point-count doubling until the result settles to
    relative tolerance; fractional grading exponents are not polynomials, so
    fixed low-order rules are not trusted.
    """
    prev = None
    n = start
    while n <= cap:
        x, w = _gauss(n)
        z = 0.5 * h * x
        val = fn(z) @ (0.5 * h * w)
        if prev is not None:
            scale = max(float(np.abs(val).max()), np.finfo(float).tiny)
            if float(np.abs(val - prev).max()) <= tol * scale:
                return val
        prev = val
        n *= 2
    raise ConvergenceError(
        f"thickness integral did not settle to {tol:g} within {cap} points"
    )


def _temperature_field(prop_temperature):
    if callable(prop_temperature):
        return prop_temperature
    T = float(prop_temperature)
    if T <= 0.0:
        raise ValueError("absolute property temperature must be positive")
    return lambda z: np.full_like(np.asarray(z, dtype=float), T)


def section_stiffness(section: FgmSection, prop_temperature=300.0) -> SectionStiffness:
    """Section constitutive blocks at a property temperature (scalar or field z->T)."""
    h = section.thickness
    temp = _temperature_field(prop_temperature)

    def integrand(z):
        T = temp(z)
        E = effective_property(section, "E", z, T)
        nu = effective_property(section, "nu", z, T)
        c11 = E / (1.0 - nu**2)
        c12 = nu * c11
        g = E / (2.0 * (1.0 + nu))
        f = z - 4.0 * z**3 / (3.0 * h**2)
        fp = 1.0 - 4.0 * z**2 / h**2
        weights = np.stack((np.ones_like(z), z, z**2, f, z * f, f**2))
        rows = [c11 * wgt for wgt in weights]
        rows += [c12 * wgt for wgt in weights]
        rows += [g * wgt for wgt in weights]
        rows.append(g * fp**2)
        return np.stack(rows)

    vals = _adaptive_integral(integrand, h)
    i11, i12, ig = vals[0:6], vals[6:12], vals[12:18]
    blocks = []
    for m in range(6):
        blocks.append(
            np.array(
                [
                    [i11[m], i12[m], 0.0],
                    [i12[m], i11[m], 0.0],
                    [0.0, 0.0, ig[m]],
                ]
            )
        )
    ds = vals[18] * np.eye(2)
    return SectionStiffness(*blocks, Ds=ds)


def thermal_resultants(section: FgmSection, delta_T, prop_temperature=300.0) -> ThermalResultants:
    """Thermal resultants for a temperature change field delta_T(z).

    delta_T may be a scalar (uniform change) or a vectorized callable of z.
    The in-plane direction carries no shear coupling, so the third component
    of each resultant is identically zero.
    """
    h = section.thickness
    temp = _temperature_field(prop_temperature)
    if not callable(delta_T):
        dval = float(delta_T)
        delta_T = lambda z: np.full_like(np.asarray(z, dtype=float), dval)

    def integrand(z):
        T = temp(z)
        E = effective_property(section, "E", z, T)
        nu = effective_property(section, "nu", z, T)
        alpha = effective_property(section, "alpha", z, T)
        base = E * alpha / (1.0 - nu) * delta_T(z)
        f = z - 4.0 * z**3 / (3.0 * h**2)
        return np.stack((base, base * z, base * f))

    n, m, p = _adaptive_integral(integrand, h)
    return ThermalResultants(
        N=np.array([n, n, 0.0]), M=np.array([m, m, 0.0]), P=np.array([p, p, 0.0])
    )


def thermal_scalars(
    section: FgmSection,
    prop_temperature=300.0,
    eta=None,
    convention: str = "consistent",
) -> ThermalScalars:
    """Scalar integrals of E alpha / (1 -+ nu) with rise-shape weights.

    convention="consistent" uses 1 - nu (what the assembled thermal force
    integrates); convention="plus_nu" uses 1 + nu, a variant some published
    tabulations adopt. eta is the conduction shape function z -> eta(z) in
    [0, 1]; Z is None without it.
    """
    if convention not in ("consistent", "plus_nu"):
        raise ValueError("convention must be 'consistent' or 'plus_nu'")
    sign = -1.0 if convention == "consistent" else 1.0
    h = section.thickness
    temp = _temperature_field(prop_temperature)

    def integrand(z):
        T = temp(z)
        E = effective_property(section, "E", z, T)
        nu = effective_property(section, "nu", z, T)
        alpha = effective_property(section, "alpha", z, T)
        base = E * alpha / (1.0 + sign * nu)
        rows = [base, base * (z / h + 0.5)]
        if eta is not None:
            rows.append(base * eta(z))
        return np.stack(rows)

    vals = _adaptive_integral(integrand, h)
    return ThermalScalars(
        X=float(vals[0]),
        Y=float(vals[1]),
        Z=float(vals[2]) if eta is not None else None,
    )
