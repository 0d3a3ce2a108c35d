"""End-to-end analysis of one surface, producing a JSON-ready record."""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field

from . import bounds as _bounds
from .spectrum import (
    DEGENERACY_TOL,
    assemble_index,
    build_potential,
    default_count,
    kernel_residual_u0,
    solve_spectrum_1d,
    verify_minus_one_pair,
)
from .surface import (
    ClosureNotFound,
    SurfaceParams,
    closure_for,
    closure_search,
    geometry,
    refine_closing,
)

SCHEMA_VERSION = "1.0.0"
DEFAULT_CLOSURE_TOL = 1e-1
DEFAULT_MODES = 512


@dataclass
class AnalysisRecord:
    inputs: dict
    params: dict
    closure: dict
    geometry: dict
    spectrum: dict
    index: dict
    bounds: dict
    timings: dict = field(default_factory=dict)
    schema_version: str = SCHEMA_VERSION

    def to_dict(self) -> dict:
        d = asdict(self)
        return {"schema_version": d.pop("schema_version"), **d}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisRecord":
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "AnalysisRecord":
        return cls.from_dict(json.loads(text))


def _samples_for(modes: int, k: int) -> int:
    n = 1 << (8 * modes - 1).bit_length()
    while n / k < 64:
        n *= 2
    return n


def analyze(
    s: float,
    t: float,
    *,
    modes: int = DEFAULT_MODES,
    spectral_tol: float = 1e-6,
    closure_tol: float = DEFAULT_CLOSURE_TOL,
    k_max: int = 24,
    degeneracy_tol: float = DEGENERACY_TOL,
    k: int | None = None,
    w: int | None = None,
    refine: bool = False,
    surface_class: str | None = None,
    refine_precision: tuple[float, float] = (5e-5, 5e-5),
) -> AnalysisRecord:
    """Run the full pipeline on (s, t).

    With ``k`` and ``w`` given the closure is checked against them instead of
    searched for. ``refine`` moves (s, t) to the nearest exactly closing
    pair, distance measured in units of ``refine_precision``, before the
    spectrum is computed. ``surface_class`` overrides the
    computed classification when selecting index bounds.
    """
    timings = {}
    t_start = time.perf_counter()
    params = SurfaceParams.from_st(s, t)
    if (k is None) != (w is None):
        raise ValueError("give both k and w or neither")
    if k is None:
        closure = closure_search(params, k_max=k_max, tol=closure_tol)
    else:
        closure = closure_for(params, k, w)
        if closure.residual > closure_tol:
            raise ClosureNotFound(
                f"closure not found: (k,w)=({k},{w}) leaves residual {closure.residual:.3e} > {closure_tol:g}"
            )
    published = params
    if refine and not params.flat:
        params = refine_closing(params, closure.k, closure.w, refine_precision)
        closure = closure_for(params, closure.k, closure.w)
    timings["closure"] = time.perf_counter() - t_start

    geo = geometry(params)
    t0 = time.perf_counter()
    potential = build_potential(params, closure, _samples_for(modes, closure.k))
    sp = solve_spectrum_1d(potential, N=modes, tol=spectral_tol, count=default_count(closure.k))
    timings["spectrum"] = time.perf_counter() - t0

    report = assemble_index(sp, degeneracy_tol)
    cls = surface_class or geo.surface_class.value
    if params.flat:
        flat = _bounds.flat_index(params.H)
        bounds = {"class": cls, "flat": asdict(flat), "satisfied": report.index == flat.index}
        u0_res = None
    else:
        br = _bounds.verify_surface(cls, closure.k, closure.w, report.index, report.nullity)
        bounds = asdict(br)
        bounds["applicable_bound"] = br.applicable_bound
        notes = []
        if closure.k == 1:
            notes.append("k = 1: lower bounds reported without any claim of sharpness")
        if report.nullity > br.nullity_bound:
            notes.append(f"numerical nullity {report.nullity} exceeds the lower bound "
                         f"{br.nullity_bound}; observed, not asserted exact")
        bounds["notes"] = notes
        u0_res = kernel_residual_u0(params, closure, potential)
    timings["total"] = time.perf_counter() - t_start

    return AnalysisRecord(
        inputs={"s": s, "t": t, "k": k, "w": w, "refine": refine, "modes": modes,
                "closure_tol": closure_tol, "degeneracy_tol": degeneracy_tol},
        params={"s": params.s, "t": params.t, "gamma": params.gamma, "tau": params.tau,
                "H": params.H, "constraint_residual": params.constraint_residual,
                "refined_ds": params.s - published.s, "refined_dt": params.t - published.t},
        closure={"k": closure.k, "w": closure.w, "x0": closure.x0, "x1": closure.x1,
                 "angle_per_period": closure.angle_per_period, "residual": closure.residual},
        geometry={"H": geo.H, "mu_plus": geo.mu_plus, "mu_minus": geo.mu_minus,
                  "X_plus": geo.X_plus, "X_minus": geo.X_minus, "r_plus": geo.r_plus,
                  "r_minus": geo.r_minus, "class": geo.surface_class.value},
        spectrum={"eigenvalues": [float(x) for x in sp.eigenvalues], "N": sp.truncation,
                  "convergence_gap": sp.convergence_gap,
                  "lambda_1": float(sp.eigenvalues[0]),
                  "minus_one_pair": verify_minus_one_pair(sp, degeneracy_tol),
                  "u0_residual": u0_res},
        index={"B_minus": report.B_minus, "B_plus": report.B_plus,
               "n_minus_one": report.n_minus_one, "n_zero": report.n_zero,
               "index": report.index, "nullity": report.nullity,
               "shortcut_index": report.shortcut_index, "agrees": report.agrees,
               "warnings": report.warnings},
        bounds=bounds,
        timings=timings,
    )


def bounds_satisfied(record: AnalysisRecord) -> bool:
    return bool(record.bounds.get("satisfied"))

