"""Command-line front end.

Exit codes: 0 success, 1 input or convergence error, 2 a bound violation
(a numerical finding, not a crash).
"""

from __future__ import annotations

import csv
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path

import click
import numpy as np

from . import bounds as _bounds
from . import table as _table
from .analysis import DEFAULT_CLOSURE_TOL, DEFAULT_MODES, AnalysisRecord, analyze, bounds_satisfied
from .numerics import NumericsError
from .spectrum import SpectrumError
from .surface import (
    SurfaceError,
    SurfaceParams,
    closure_for,
    closure_search,
    find_closing_brackets,
    flat_closure,
    geometry,
    profile_curve,
    solve_closing,
)

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2

log = logging.getLogger("cmctori")


class CommandError(click.ClickException):
    """Reported as a JSON object on stdout with exit code 1."""

    exit_code = EXIT_ERROR

    def __init__(self, message: str, kind: str = "error"):
        super().__init__(message)
        self.kind = kind

    def show(self, file=None):
        click.echo(json.dumps({"error": self.kind, "message": self.message}), file=file)


def _fail(exc: Exception) -> CommandError:
    text = str(exc)
    kind = "closure not found" if "closure not found" in text else type(exc).__name__
    return CommandError(text, kind)


def _pair(text: str, cast=float, n: int = 2) -> tuple:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != n:
        raise click.BadParameter(f"expected {n} comma-separated values, got {text!r}")
    try:
        return tuple(c(p) for c, p in zip(cast if isinstance(cast, tuple) else (cast,) * n, parts))
    except ValueError as exc:
        raise click.BadParameter(str(exc)) from exc


def _write_json(path: str | None, payload) -> None:
    text = json.dumps(payload, indent=2)
    if path in (None, "-"):
        click.echo(text)
    else:
        Path(path).write_text(text + "\n")


def _setting(ctx: click.Context, name: str, value):
    return ctx.obj[name] if value is None else value


@click.group()
@click.option("--tol", type=float, default=DEFAULT_CLOSURE_TOL, show_default=True,
              help="Closure tolerance |k*phi - 2*pi*w| for accepting a surface.")
@click.option("--modes", type=int, default=DEFAULT_MODES, show_default=True,
              help="Fourier truncation N (2N+1 basis functions).")
@click.option("--quiet", is_flag=True, help="Only print errors.")
@click.pass_context
def main(ctx, tol, modes, quiet):
    """CMC tori of revolution in the 3-sphere: closing, spectra, index and nullity."""
    logging.basicConfig(level=logging.ERROR if quiet else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    ctx.obj = {"tol": tol, "modes": modes, "quiet": quiet}


@main.command("analyze")
@click.option("--s", "s", type=float, help="Parameter s > 0.")
@click.option("--t", "t", type=float, help="Parameter t in (-s, s], t != 0.")
@click.option("--params-file", type=click.Path(exists=True, dir_okay=False),
              help="JSON file with keys s, t and optionally k, w.")
@click.option("--k", "k", type=int, help="Expected number of bulges (skips the search).")
@click.option("--w", "w", type=int, help="Expected wrapping number (with --k).")
@click.option("--tol", type=float, default=None, help="Overrides the global closure tolerance.")
@click.option("--modes", type=int, default=None, help="Overrides the global truncation.")
@click.option("--refine", is_flag=True, help="Move (s, t) to the nearest exactly closing pair first.")
@click.option("--json", "json_out", type=click.Path(dir_okay=False, allow_dash=True),
              help="Write the record here ('-' for stdout).")
@click.option("--csv-spectrum", type=click.Path(dir_okay=False), help="Write 'j,lambda_j0' rows here.")
@click.pass_context
def cmd_analyze(ctx, s, t, params_file, k, w, tol, modes, refine, json_out, csv_spectrum):
    """Run the full pipeline on one surface."""
    if params_file:
        data = json.loads(Path(params_file).read_text())
        s, t = data.get("s", s), data.get("t", t)
        k, w = data.get("k", k), data.get("w", w)
    if s is None or t is None:
        raise CommandError("give --s and --t, or --params-file", "usage")
    try:
        record = analyze(s, t, k=k, w=w, refine=refine,
                         closure_tol=_setting(ctx, "tol", tol),
                         modes=_setting(ctx, "modes", modes))
    except (SurfaceError, SpectrumError, NumericsError, ValueError) as exc:
        raise _fail(exc) from exc
    if csv_spectrum:
        with open(csv_spectrum, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["j", "lambda_j0"])
            for j, lam in enumerate(record.spectrum["eigenvalues"], start=1):
                writer.writerow([j, repr(lam)])
    if json_out:
        _write_json(json_out, record.to_dict())
    if not ctx.obj["quiet"] and json_out != "-":
        click.echo(_summary(record))
    ctx.exit(EXIT_OK if bounds_satisfied(record) else EXIT_VIOLATION)


def _summary(record: AnalysisRecord) -> str:
    c, i, g = record.closure, record.index, record.geometry
    b = record.bounds
    bound = b.get("applicable_bound", b.get("flat", {}).get("index"))
    return (
        f"s={record.params['s']:.6g} t={record.params['t']:.6g} H={record.params['H']:.6g} "
        f"class={g['class']} k={c['k']} w={c['w']} residual={c['residual']:.2e}\n"
        f"lambda_1={record.spectrum['lambda_1']:.6f} B-={i['B_minus']} B+={i['B_plus']} "
        f"Ind={i['index']} Null={i['nullity']} bound={bound} satisfied={b['satisfied']}"
    )


@main.command("close")
@click.option("--s", "s", type=float, required=True)
@click.option("--k", "k", type=int, required=True)
@click.option("--w", "w", type=int, required=True)
@click.option("--t-bracket", help="lo,hi; scanned automatically when omitted.")
@click.option("--json", "json_out", type=click.Path(dir_okay=False, allow_dash=True), default="-")
def cmd_close(s, k, w, t_bracket, json_out):
    """Solve k*phi(s, t) = 2*pi*w for t with s fixed."""
    try:
        if t_bracket:
            brackets = [_pair(t_bracket)]
        else:
            brackets = find_closing_brackets(s, k, w)
            if not brackets:
                raise SurfaceError(f"no sign change of the closing residual for s={s}, (k,w)=({k},{w})")
        solutions = [solve_closing(s, k, w, br) for br in brackets]
    except (SurfaceError, NumericsError, ValueError) as exc:
        raise _fail(exc) from exc
    payload = []
    for p in solutions:
        cl = closure_for(p, k, w)
        payload.append({"s": p.s, "t": p.t, "gamma": p.gamma, "tau": p.tau, "H": p.H,
                        "k": k, "w": w, "residual": cl.residual,
                        "class": geometry(p).surface_class.value})
    _write_json(json_out, {**payload[0], "solutions": payload})


def _table_row(name: str, refine: bool, modes: int) -> dict:
    return _table.reproduce_table([name], refine=refine, modes=modes)[0]


@main.command("table")
@click.option("--rows", default="all", show_default=True, help="'all', 'A..O', 'A-D' or 'A,E,M'.")
@click.option("--refine/--no-refine", default=True, show_default=True,
              help="Count eigenvalues on the nearest exactly closing surface.")
@click.option("--jobs", type=int, default=1, show_default=True, help="Rows processed in parallel.")
@click.option("--json", "json_out", type=click.Path(dir_okay=False, allow_dash=True))
@click.option("--markdown", "md_out", type=click.Path(dir_okay=False, allow_dash=True))
@click.pass_context
def cmd_table(ctx, rows, refine, jobs, json_out, md_out):
    """Reproduce the built-in table of 15 non-flat tori, cell by cell."""
    try:
        names = _table.parse_rows(rows)
    except (KeyError, ValueError) as exc:
        raise CommandError(str(exc), "usage") from exc
    modes = ctx.obj["modes"]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_table_row, names, [refine] * len(names), [modes] * len(names)))
    else:
        results = [_table_row(n, refine, modes) for n in names]
    md = _table.to_markdown(results)
    if json_out:
        _write_json(json_out, results)
    if md_out and md_out != "-":
        Path(md_out).write_text(md)
    elif not ctx.obj["quiet"] or md_out == "-":
        click.echo(md, nl=False)
    ctx.exit(EXIT_OK if all(r["passed"] for r in results) else EXIT_VIOLATION)


@main.command("flat")
@click.option("--H", "H", type=float, help="Mean curvature H >= 0.")
@click.option("--sweep", help="lo,hi,n: n evenly spaced values of H.")
@click.option("--json", "json_out", type=click.Path(dir_okay=False, allow_dash=True))
@click.pass_context
def cmd_flat(ctx, H, sweep, json_out):
    """Closed-form index and nullity of flat tori, checked against lattice enumeration."""
    if (H is None) == (sweep is None):
        raise CommandError("give exactly one of --H and --sweep", "usage")
    if sweep:
        lo, hi, n = _pair(sweep, (float, float, int), 3)
        values = np.linspace(lo, hi, n).tolist()
    else:
        values = [H]
    if any(h < 0 for h in values):
        raise CommandError("H must be non-negative", "usage")
    out = []
    for h in values:
        res = _bounds.flat_index(h)
        lat_index, lat_null = _bounds.flat_lattice_index(h)
        out.append({**asdict(res), "lattice_index": lat_index, "lattice_nullity": lat_null,
                    "agrees": res.index == lat_index and res.nullity == lat_null})
    if json_out:
        _write_json(json_out, out)
    if not ctx.obj["quiet"] and json_out != "-" and len(out) > 20:
        click.echo(f"{len(out)} values of H in [{values[0]:g}, {values[-1]:g}]: "
                   f"{sum(r['agrees'] for r in out)} agree with the lattice count, "
                   f"{sum(r['nullity'] == 6 for r in out)} with nullity 6")
    elif not ctx.obj["quiet"] and json_out != "-":
        for r in out:
            click.echo(f"H={r['H']:.6g} alpha={r['alpha']:.6g} b={r['b']} index={r['index']} "
                       f"nullity={r['nullity']} agrees={r['agrees']}")
    ctx.exit(EXIT_OK if all(r["agrees"] for r in out) else EXIT_VIOLATION)


def profile_svg(curve, size: int = 480) -> str:
    """SVG of a projected profile in the unit axis circle (y up)."""
    pts = curve.points
    d = "M " + " L ".join(f"{x:.6f},{y:.6f}" for x, y in pts) + " Z"
    marks = []
    for cls, arr, color in (("bulge", curve.bulges, "#c0392b"), ("neck", curve.necks, "#2471a3")):
        for x, y in arr:
            marks.append(f'    <circle class="{cls}" cx="{x:.6f}" cy="{y:.6f}" r="0.018" fill="{color}"/>')
    return "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="-1.05 -1.05 2.1 2.1">',
        '  <g transform="scale(1,-1)">',
        '    <circle class="axis" cx="0" cy="0" r="1" fill="none" stroke="#888" stroke-width="0.006"/>',
        f'    <path class="profile" d="{d}" fill="none" stroke="#000" stroke-width="0.006"/>',
        *marks,
        "  </g>",
        "</svg>",
        "",
    ])


@main.command("plot")
@click.option("--s", "s", type=float, required=True)
@click.option("--t", "t", type=float, required=True)
@click.option("--samples", type=int, default=2000, show_default=True)
@click.option("--tol", type=float, default=None, help="Overrides the global closure tolerance.")
@click.option("--svg", "svg_out", type=click.Path(dir_okay=False))
@click.option("--csv", "csv_out", type=click.Path(dir_okay=False))
@click.pass_context
def cmd_plot(ctx, s, t, samples, tol, svg_out, csv_out):
    """Profile curve of a closed surface, stereographically projected to the unit disk."""
    try:
        params = SurfaceParams.from_st(s, t)
        closure = flat_closure(params) if params.flat else closure_search(
            params, tol=_setting(ctx, "tol", tol))
        curve = profile_curve(params, closure, samples)
    except (SurfaceError, NumericsError, ValueError) as exc:
        raise _fail(exc) from exc
    if svg_out:
        Path(svg_out).write_text(profile_svg(curve))
    if csv_out:
        with open(csv_out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "u", "v", "axis_distance"])
            for x, (u, v), dist in zip(curve.x, curve.points, curve.axis_distance):
                writer.writerow([repr(float(x)), repr(float(u)), repr(float(v)), repr(float(dist))])
    if not ctx.obj["quiet"]:
        click.echo(f"k={closure.k} w={closure.w} bulges={len(curve.bulges)} necks={len(curve.necks)} "
                   f"points={len(curve.x)}")


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
