"""Declarative case runner: JSON case files and built-in presets to CSV results.

A case file describes geometry, section grading, boundary conditions, the
temperature program, and the analysis to run. Outputs are deterministic:
``summary.json`` (machine-readable results and diagnostics), ``curve.csv``
(step, load or temperature, deflection or amplitude), and for static
analyses ``through_thickness.csv`` (normalized stresses at the center).

Normalizations follow the plate-benchmark conventions:
    w_bar   = w / h
    sigma_bar = sigma h^2 / (f_z a^2),  tau_bar = tau h / (f_z a)
    P_bar   = f_z a^4 / (E_m h^4)
    delta_T_star = alpha_m * delta_T_cr * 1e4
    T_star  = delta_T_cr * E_m alpha_m a^2 h / (pi^2 D),  D = E_m h^3 / (12 (1 - nu_m^2))
with a the edge length (radius for circular plates) and metal-phase
properties at the reference temperature.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import discretization as disc
from . import materials as mat
from . import solvers as sol
from . import splines as sp
from . import thermal as th
from .errors import CaseError, ConvergenceError, SolverError

__all__ = [
    "GeometrySpec",
    "MeshSpec",
    "MaterialSpec",
    "TemperatureSpec",
    "AnalysisSpec",
    "CaseSpec",
    "load_case",
    "preset",
    "build_surface",
    "build_model",
    "run_case",
    "main",
]

_SHAPES = ("square", "circle", "skew")
_ANALYSES = ("linear", "newton", "buckling", "postbuckling")
_BOUNDARIES = ("ssss1", "ssss2", "ssss3", "clamped")


def _check_keys(d: dict, allowed, required, path: str) -> None:
    unknown = sorted(set(d) - set(allowed))
    if unknown:
        raise CaseError(f"unknown field(s) {unknown} in '{path}'")
    missing = sorted(set(required) - set(d))
    if missing:
        raise CaseError(f"missing required field(s) {missing} in '{path}'")


def _number(d: dict, key: str, path: str, default=None):
    if key not in d:
        return default
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise CaseError(f"'{path}.{key}' must be a number, got {v!r}")
    return float(v)


def _integer(d: dict, key: str, path: str, default=None):
    if key not in d:
        return default
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise CaseError(f"'{path}.{key}' must be an integer, got {v!r}")
    return int(v)


def _string(d: dict, key: str, path: str, default=None, choices=None):
    if key not in d:
        return default
    v = d[key]
    if not isinstance(v, str):
        raise CaseError(f"'{path}.{key}' must be a string, got {v!r}")
    if choices is not None and v.lower() not in choices:
        raise CaseError(f"'{path}.{key}' must be one of {list(choices)}, got {v!r}")
    return v


# ---------------------------------------------------------------------------
# case schema


@dataclass(frozen=True)
class GeometrySpec:
    shape: str
    thickness: float
    length: float | None = None
    width: float | None = None
    radius: float | None = None
    angle_deg: float | None = None

    @staticmethod
    def from_dict(d: dict, path: str = "geometry") -> "GeometrySpec":
        _check_keys(d, ("shape", "thickness", "length", "width", "radius", "angle_deg"),
                    ("shape", "thickness"), path)
        shape = _string(d, "shape", path, choices=_SHAPES).lower()
        h = _number(d, "thickness", path)
        if h is None or h <= 0.0:
            raise CaseError(f"'{path}.thickness' must be positive")
        g = GeometrySpec(shape=shape, thickness=h,
                         length=_number(d, "length", path),
                         width=_number(d, "width", path),
                         radius=_number(d, "radius", path),
                         angle_deg=_number(d, "angle_deg", path))
        if shape == "circle":
            if g.radius is None or g.radius <= 0.0:
                raise CaseError(f"'{path}.radius' must be positive for circle")
        else:
            if g.length is None or g.length <= 0.0:
                raise CaseError(f"'{path}.length' must be positive for {shape}")
            w = g.length if g.width is None else g.width
            if w <= 0.0:
                raise CaseError(f"'{path}.width' must be positive")
            g = dataclasses.replace(g, width=w)
            if shape == "skew" and g.angle_deg is None:
                raise CaseError(f"'{path}.angle_deg' is required for skew")
        return g

    def to_dict(self) -> dict:
        d = {"shape": self.shape, "thickness": self.thickness}
        for k in ("length", "width", "radius", "angle_deg"):
            v = getattr(self, k)
            if v is not None:
                d[k] = v
        return d

    @property
    def char_length(self) -> float:
        return self.radius if self.shape == "circle" else self.length


@dataclass(frozen=True)
class MeshSpec:
    degree: int = 3
    refinement: int = 12

    @staticmethod
    def from_dict(d: dict, path: str = "mesh") -> "MeshSpec":
        _check_keys(d, ("degree", "refinement"), (), path)
        m = MeshSpec(degree=_integer(d, "degree", path, 3),
                     refinement=_integer(d, "refinement", path, 12))
        if m.degree < 2:
            raise CaseError(f"'{path}.degree' must be >= 2")
        if m.refinement < 1:
            raise CaseError(f"'{path}.refinement' must be >= 1")
        return m

    def to_dict(self) -> dict:
        return {"degree": self.degree, "refinement": self.refinement}


def _phase_from(value, path: str) -> mat.PhaseCoefficients:
    if isinstance(value, str):
        try:
            return mat.lookup_phase(value)
        except KeyError as e:
            raise CaseError(f"'{path}': unknown material name {value!r}") from e
    if not isinstance(value, dict):
        raise CaseError(f"'{path}' must be a material name or an inline table")
    _check_keys(value, ("name", "E", "nu", "alpha", "k", "rho"),
                ("name", "E", "nu", "alpha", "k", "rho"), path)

    def coeffs(key):
        v = value[key]
        if isinstance(v, (int, float)) and not isinstance(v, bool):
            return (0.0, float(v), 0.0, 0.0, 0.0)
        if isinstance(v, (list, tuple)) and len(v) == 5 and all(
                isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
            return tuple(float(x) for x in v)
        raise CaseError(f"'{path}.{key}' must be a number or a 5-coefficient list")

    name = value["name"]
    if not isinstance(name, str):
        raise CaseError(f"'{path}.name' must be a string")
    return mat.PhaseCoefficients(name=name, E=coeffs("E"), nu=coeffs("nu"),
                                 alpha=coeffs("alpha"), k=coeffs("k"), rho=coeffs("rho"))


def _phase_to_dict(p: mat.PhaseCoefficients) -> dict:
    return {"name": p.name, "E": list(p.E), "nu": list(p.nu),
            "alpha": list(p.alpha), "k": list(p.k), "rho": list(p.rho)}


@dataclass(frozen=True)
class MaterialSpec:
    ceramic: mat.PhaseCoefficients
    metal: mat.PhaseCoefficients
    index: float

    @staticmethod
    def from_dict(d: dict, path: str = "material") -> "MaterialSpec":
        _check_keys(d, ("ceramic", "metal", "index"), ("ceramic", "metal", "index"), path)
        index = _number(d, "index", path)
        if index < 0.0:
            raise CaseError(f"'{path}.index' must be >= 0")
        return MaterialSpec(ceramic=_phase_from(d["ceramic"], f"{path}.ceramic"),
                            metal=_phase_from(d["metal"], f"{path}.metal"),
                            index=index)

    def to_dict(self) -> dict:
        return {"ceramic": _phase_to_dict(self.ceramic),
                "metal": _phase_to_dict(self.metal), "index": self.index}


@dataclass(frozen=True)
class TemperatureSpec:
    """Temperature program: T_i initial (stress free), T_m bottom, T_c top."""

    profile: th.TemperatureProfile
    dependent: bool = False

    @staticmethod
    def from_dict(d: dict, path: str = "temperature") -> "TemperatureSpec":
        _check_keys(d, ("kind", "T_i", "T_m", "T_c", "units", "truncation", "dependent"),
                    ("kind", "T_i", "T_m", "T_c"), path)
        kind = _string(d, "kind", path, choices=("uniform", "linear", "conduction")).lower()
        units = _string(d, "units", path, default="C")
        if units not in ("C", "K"):
            raise CaseError(f"'{path}.units' must be 'C' or 'K'")
        trunc = d.get("truncation", 5)
        if trunc is not None:
            trunc = _integer(d, "truncation", path, 5)
        dep = d.get("dependent", False)
        if not isinstance(dep, bool):
            raise CaseError(f"'{path}.dependent' must be a boolean")
        try:
            profile = th.TemperatureProfile(kind=kind, T_ref=_number(d, "T_i", path),
                                            T_bottom=_number(d, "T_m", path),
                                            T_top=_number(d, "T_c", path),
                                            units=units, truncation=trunc)
        except ValueError as e:
            raise CaseError(f"'{path}': {e}") from e
        return TemperatureSpec(profile=profile, dependent=dep)

    def to_dict(self) -> dict:
        p = self.profile
        return {"kind": p.kind, "T_i": p.T_ref, "T_m": p.T_bottom, "T_c": p.T_top,
                "units": p.units, "truncation": p.truncation, "dependent": self.dependent}


@dataclass(frozen=True)
class AnalysisSpec:
    type: str
    steps: int = 5
    tolerance: float = 1e-9
    max_iterations: int = 25
    modes: int = 4
    amplitudes: tuple[float, ...] | None = None

    @staticmethod
    def from_dict(d: dict, path: str = "analysis") -> "AnalysisSpec":
        _check_keys(d, ("type", "steps", "tolerance", "max_iterations", "modes",
                        "amplitudes"), ("type",), path)
        a_type = _string(d, "type", path, choices=_ANALYSES).lower()
        amps = d.get("amplitudes")
        if amps is not None:
            if not isinstance(amps, (list, tuple)) or not amps or not all(
                    isinstance(x, (int, float)) and not isinstance(x, bool) and x > 0
                    for x in amps):
                raise CaseError(f"'{path}.amplitudes' must be a non-empty list of positive numbers")
            amps = tuple(float(x) for x in amps)
        spec = AnalysisSpec(type=a_type,
                            steps=_integer(d, "steps", path, 5),
                            tolerance=_number(d, "tolerance", path, 1e-9),
                            max_iterations=_integer(d, "max_iterations", path, 25),
                            modes=_integer(d, "modes", path, 4),
                            amplitudes=amps)
        if spec.steps < 1 or spec.max_iterations < 1 or spec.modes < 1:
            raise CaseError(f"'{path}': steps, max_iterations, and modes must be >= 1")
        if not spec.tolerance > 0.0:
            raise CaseError(f"'{path}.tolerance' must be positive")
        return spec

    def to_dict(self) -> dict:
        d = {"type": self.type, "steps": self.steps, "tolerance": self.tolerance,
             "max_iterations": self.max_iterations, "modes": self.modes}
        if self.amplitudes is not None:
            d["amplitudes"] = list(self.amplitudes)
        return d


@dataclass(frozen=True)
class CaseSpec:
    geometry: GeometrySpec
    material: MaterialSpec
    boundary: str
    analysis: AnalysisSpec
    mesh: MeshSpec = MeshSpec()
    temperature: TemperatureSpec | None = None
    pressure: float = 0.0
    name: str = "case"

    @staticmethod
    def from_dict(d: dict) -> "CaseSpec":
        if not isinstance(d, dict):
            raise CaseError("case file must hold a JSON object")
        _check_keys(d, ("name", "geometry", "mesh", "material", "boundary",
                        "temperature", "pressure", "analysis"),
                    ("geometry", "material", "boundary", "analysis"), "case")
        for key in ("geometry", "material", "analysis"):
            if not isinstance(d[key], dict):
                raise CaseError(f"'{key}' must be an object")
        boundary = _string(d, "boundary", "case", choices=_BOUNDARIES).lower()
        mesh = MeshSpec.from_dict(d["mesh"]) if "mesh" in d else MeshSpec()
        if "mesh" in d and not isinstance(d["mesh"], dict):
            raise CaseError("'mesh' must be an object")
        temp = None
        if d.get("temperature") is not None:
            if not isinstance(d["temperature"], dict):
                raise CaseError("'temperature' must be an object or null")
            temp = TemperatureSpec.from_dict(d["temperature"])
        name = _string(d, "name", "case", default="case")
        spec = CaseSpec(geometry=GeometrySpec.from_dict(d["geometry"]),
                        material=MaterialSpec.from_dict(d["material"]),
                        boundary=boundary,
                        analysis=AnalysisSpec.from_dict(d["analysis"]),
                        mesh=mesh, temperature=temp,
                        pressure=_number(d, "pressure", "case", 0.0),
                        name=name)
        if spec.analysis.type in ("buckling", "postbuckling") and spec.temperature is None:
            raise CaseError("'temperature' is required for buckling analyses")
        return spec

    def to_dict(self) -> dict:
        d = {"name": self.name,
             "geometry": self.geometry.to_dict(),
             "mesh": self.mesh.to_dict(),
             "material": self.material.to_dict(),
             "boundary": self.boundary,
             "pressure": self.pressure,
             "analysis": self.analysis.to_dict()}
        if self.temperature is not None:
            d["temperature"] = self.temperature.to_dict()
        return d


def load_case(path) -> CaseSpec:
    """Parse a JSON case file into a validated CaseSpec."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise CaseError(f"cannot read case file {path}: {e}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise CaseError(f"invalid JSON in {path}: {e}") from e
    return CaseSpec.from_dict(data)


# ---------------------------------------------------------------------------
# presets


def _iso_phase() -> dict:
    return {"name": "unit-isotropic", "E": 1.0e9, "nu": 0.3, "alpha": 1.0e-6,
            "k": 1.0, "rho": 1.0}


def preset(name: str, index: float | None = None) -> CaseSpec:
    """Built-in benchmark skeletons: 'square', 'circle', or 'skew'."""
    key = name.strip().lower()
    if key == "square":
        # graded Al/ZrO2 square plate under combined heating and pressure
        d = {
            "name": "square-thermomechanical",
            "geometry": {"shape": "square", "length": 0.2, "thickness": 0.01},
            "mesh": {"degree": 3, "refinement": 12},
            "material": {"ceramic": "ZrO2", "metal": "Al",
                         "index": 0.0 if index is None else index},
            "boundary": "ssss1",
            "temperature": {"kind": "linear", "T_i": 0.0, "T_m": 20.0, "T_c": 300.0,
                            "units": "C"},
            "pressure": -1.0e7,
            "analysis": {"type": "newton", "steps": 5},
        }
    elif key == "circle":
        # clamped alumina/aluminum circular plate, R/h = 100, critical rise
        d = {
            "name": "circle-thermal-buckling",
            "geometry": {"shape": "circle", "radius": 1.0, "thickness": 0.01},
            "mesh": {"degree": 3, "refinement": 12},
            "material": {
                "ceramic": {"name": "alumina", "E": 380.0e9, "nu": 0.3,
                            "alpha": 7.4e-6, "k": 10.4, "rho": 3800.0},
                "metal": "Al",
                "index": 0.0 if index is None else index,
            },
            "boundary": "clamped",
            "temperature": {"kind": "uniform", "T_i": 300.0, "T_m": 400.0,
                            "T_c": 400.0, "units": "K"},
            "analysis": {"type": "buckling"},
        }
    elif key == "skew":
        # simply supported isotropic skew plate, 45 degree sweep
        d = {
            "name": "skew-thermal-buckling",
            "geometry": {"shape": "skew", "length": 1.0, "width": 1.0,
                         "angle_deg": 45.0, "thickness": 0.1},
            "mesh": {"degree": 3, "refinement": 12},
            "material": {"ceramic": _iso_phase(), "metal": _iso_phase(),
                         "index": 0.0 if index is None else index},
            "boundary": "ssss2",
            "temperature": {"kind": "uniform", "T_i": 300.0, "T_m": 400.0,
                            "T_c": 400.0, "units": "K"},
            "analysis": {"type": "buckling"},
        }
    else:
        raise CaseError(f"unknown preset {name!r}; choose from square, circle, skew")
    return CaseSpec.from_dict(d)


# ---------------------------------------------------------------------------
# running


def build_surface(spec: CaseSpec) -> sp.NurbsSurface:
    g, deg = spec.geometry, spec.mesh.degree
    if g.shape == "square":
        return sp.square_patch(g.length, g.width, degree=deg)
    if g.shape == "skew":
        return sp.skew_patch(g.length, g.width, g.angle_deg, degree=deg)
    return sp.disk_patch(g.radius, degree=deg)


def build_model(spec: CaseSpec) -> sol.PlateModel:
    mesh = disc.build_mesh(build_surface(spec), refinement=spec.mesh.refinement)
    constraints = disc.build_constraints(mesh, spec.boundary)
    section = mat.FgmSection(ceramic=spec.material.ceramic, metal=spec.material.metal,
                             thickness=spec.geometry.thickness, index=spec.material.index)
    profile = spec.temperature.profile if spec.temperature is not None else None
    dependent = spec.temperature.dependent if spec.temperature is not None else False
    return sol.PlateModel(mesh=mesh, section=section, constraints=constraints,
                          profile=profile, f_z=spec.pressure,
                          temperature_dependent=dependent)


def _fmt(x) -> str:
    return format(float(x), ".12g")


def _write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _metal_reference(model: sol.PlateModel):
    T = model.reference_temperature
    m = model.section.metal
    return (mat.property_at(m, "E", T), mat.property_at(m, "nu", T),
            mat.property_at(m, "alpha", T))


def _normalized_buckling(model: sol.PlateModel, spec: CaseSpec, delta_T: float) -> dict:
    E, nu, alpha = _metal_reference(model)
    a = spec.geometry.char_length
    h = spec.geometry.thickness
    D = E * h**3 / (12.0 * (1.0 - nu**2))
    return {"delta_T_star": alpha * delta_T * 1.0e4,
            "T_star": delta_T * E * alpha * a**2 * h / (np.pi**2 * D)}


def _stress_rows(model: sol.PlateModel, spec: CaseSpec, q: np.ndarray):
    """through-thickness rows (z/h, normalized or raw sigma_x and tau_xz)."""
    delta = None
    prop = model.reference_temperature
    if model.profile is not None:
        prop_field, delta, _ = sol._state_fields(model, 1.0)
        prop = prop_field
    st = disc.through_thickness_stress(model.mesh, q, model.section, delta_T=delta,
                                       temperature=prop if callable(prop) else None)
    h = spec.geometry.thickness
    a = spec.geometry.char_length
    fz = spec.pressure
    if fz != 0.0:
        header = ["z_over_h", "sigma_x_bar", "tau_xz_bar"]
        sx = st["sigma_x"] * h**2 / (fz * a**2)
        tx = st["tau_xz"] * h / (fz * a)
    else:
        header = ["z_over_h", "sigma_x", "tau_xz"]
        sx, tx = st["sigma_x"], st["tau_xz"]
    rows = list(zip(st["z"] / h, sx, tx))
    return header, rows


def run_case(spec: CaseSpec, out_dir) -> dict:
    """Run one case and write summary.json plus CSV outputs; returns the summary."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    model = build_model(spec)
    h = spec.geometry.thickness
    a = spec.geometry.char_length
    E_m = _metal_reference(model)[0]
    summary = {
        "name": spec.name,
        "analysis": spec.analysis.type,
        "n_elements": model.mesh.n_elements,
        "n_dof": model.mesh.n_dof,
        "n_free_dof": int(model.constraints.free.size),
        "case": spec.to_dict(),
    }
    files = {"summary": "summary.json", "curve": "curve.csv"}
    an = spec.analysis

    if an.type in ("linear", "newton"):
        if an.type == "linear":
            q = sol.solve_linear_static(model).q
            rows = [(1, 1.0, sol.center_deflection(model, q) / h)]
            iterations = None
        else:
            res = sol.solve_newton(model, steps=an.steps, tol=an.tolerance,
                                   max_iter=an.max_iterations)
            q = res.q
            rows = [(k + 1, s.scale, sol.center_deflection(model, s.q) / h)
                    for k, s in enumerate(res.steps)]
            iterations = [len(s.residuals) for s in res.steps]
        w_c = sol.center_deflection(model, q)
        w_grid = model.sampled_w(q)
        results = {
            "w_center": w_c,
            "w_bar": w_c / h,
            "w_max_abs": float(np.abs(w_grid).max()),
            "P_bar": spec.pressure * a**4 / (E_m * h**4),
        }
        if iterations is not None:
            results["newton_iterations"] = iterations
        _write_csv(out / "curve.csv", ["step", "load_factor", "w_bar"], rows)
        header, srows = _stress_rows(model, spec, q)
        _write_csv(out / "through_thickness.csv", header, srows)
        files["through_thickness"] = "through_thickness.csv"

    elif an.type == "buckling":
        res = sol.solve_linear_buckling(model, n_modes=an.modes)
        results = {
            "delta_T_cr": res.delta_T_cr,
            "n_cr": res.n_cr,
            "load_factor": res.load_factor,
            "mode_count": int(res.factors.size),
        }
        results.update(_normalized_buckling(model, spec, res.delta_T_cr))
        n_unit = res.n_cr / res.load_factor
        rows = [(k + 1, f, th.critical_delta_T(f * n_unit, res.scalars,
                                               model.profile.kind,
                                               model.profile.delta_m))
                for k, f in enumerate(res.factors)]
        _write_csv(out / "curve.csv", ["mode", "load_factor", "delta_T_cr"], rows)

    else:  # postbuckling
        res = sol.solve_thermal_postbuckling(model, amplitudes=an.amplitudes,
                                             tol=an.tolerance if an.tolerance != 1e-9 else 0.01,
                                             max_cycles=an.max_iterations
                                             if an.max_iterations != 25 else 50,
                                             n_modes=an.modes)
        results = {
            "critical_delta_T": res.critical_delta_T,
            "temperature_dependent": res.temperature_dependent,
            "unconverged_entries": [e.amplitude for e in res.entries if not e.converged],
            "mode_switches": [e.amplitude for e in res.entries if e.mode_switch],
        }
        results.update(_normalized_buckling(model, spec, res.critical_delta_T))
        rows = [(k + 1, e.delta_T, e.amplitude) for k, e in enumerate(res.entries)]
        _write_csv(out / "curve.csv", ["step", "delta_T", "amplitude"], rows)

    summary["results"] = results
    summary["files"] = files
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return summary


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="igaplate",
        description="Isogeometric thermo-mechanical analysis of graded plates",
    )
    src = parser.add_mutually_exclusive_group(required=True)
    src.add_argument("--case", metavar="FILE", help="JSON case file to run")
    src.add_argument("--preset", choices=("square", "circle", "skew"),
                     help="run a built-in benchmark skeleton")
    parser.add_argument("--output", metavar="DIR", default="igaplate-out",
                        help="output directory (default: %(default)s)")
    parser.add_argument("--refine", type=int, metavar="K",
                        help="override mesh refinement")
    parser.add_argument("--degree", type=int, metavar="P",
                        help="override basis degree")
    parser.add_argument("--gradient-index", type=float, metavar="N",
                        help="override the material gradient index")
    parser.add_argument("--deterministic", action="store_true",
                        help="accepted for compatibility; runs are always deterministic")
    args = parser.parse_args(argv)
    try:
        if args.case is not None:
            spec = load_case(args.case)
        else:
            spec = preset(args.preset, index=args.gradient_index)
        mesh = spec.mesh
        if args.refine is not None:
            mesh = dataclasses.replace(mesh, refinement=args.refine)
        if args.degree is not None:
            mesh = dataclasses.replace(mesh, degree=args.degree)
        spec = dataclasses.replace(spec, mesh=mesh)
        if args.gradient_index is not None and args.case is not None:
            spec = dataclasses.replace(
                spec, material=dataclasses.replace(spec.material,
                                                   index=float(args.gradient_index)))
        summary = run_case(spec, args.output)
    except CaseError as e:
        print(f"case error: {e}", file=sys.stderr)
        return 2
    except (SolverError, ConvergenceError) as e:
        print(f"solver error: {e}", file=sys.stderr)
        return 3
    res = summary["results"]
    key_line = {k: res[k] for k in ("w_bar", "delta_T_cr", "critical_delta_T")
                if k in res}
    print(f"wrote {Path(args.output) / 'summary.json'}")
    for k, v in key_line.items():
        print(f"{k} = {v:.6g}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
