"""Command-line front end.

Subcommands: ``verify`` (identity suites over catalog entries),
``distance`` (pairwise plane distances), ``scan-ric`` (Ricci sign/sup scans
over expanding boxes), and ``fuzz`` (random-plane property checks).

Exit codes: 0 all checks passed, 1 verification failure, 2 usage error.
With ``--out DIR`` every report is written as both JSON and CSV; stdout
carries a text summary unless ``--format`` selects json or csv.
"""

from __future__ import annotations

import json
import re
import sys
from pathlib import Path

import click
import numpy as np

from . import catalog, suites
from .catalog import Grid, UnknownEntryError
from .grassmann import (
    OrientedPlane,
    canonical_distance,
    embedded_sphere_distance,
    orthonormalize,
    pluecker_embed,
    principal_cosines,
    spherical_distance,
)
from .report import VerificationReport

USAGE_ERROR = 2
VERIFICATION_FAILURE = 1


def _fail_usage(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(USAGE_ERROR)


def _parse_shape(text: str | None, dims: int):
    if text is None:
        return None
    parts = [p for p in re.split(r"[x,]", text.strip()) if p]
    try:
        shape = tuple(int(p) for p in parts)
    except ValueError:
        _fail_usage(f"bad --grid {text!r}; expected e.g. 41x41")
    if len(shape) == 1 and dims > 1:
        shape = shape * dims
    if len(shape) != dims or any(n < 2 for n in shape):
        _fail_usage(f"--grid {text!r} does not match a {dims}-dimensional chart")
    return shape


def _parse_box(text: str | None, dims: int):
    if text is None:
        return None
    try:
        values = [float(p) for p in text.split(",")]
    except ValueError:
        _fail_usage(f"bad --box {text!r}; expected comma-separated floats")
    if len(values) != 2 * dims:
        _fail_usage(f"--box {text!r} needs {2 * dims} numbers for a {dims}-dimensional chart")
    box = tuple((values[2 * i], values[2 * i + 1]) for i in range(dims))
    if any(lo >= hi for lo, hi in box):
        _fail_usage(f"--box {text!r} has an empty side")
    return box


def _resolve_grid(entry, grid_text, box_text) -> Grid:
    dims = entry.immersion.domain_dim
    shape = _parse_shape(grid_text, dims) or entry.default_grid.shape
    box = _parse_box(box_text, dims) or entry.default_grid.box
    return Grid(box, shape)


def _safe_filename(name: str) -> str:
    return re.sub(r"[^\w.+-]", "_", name)


def _emit(report: VerificationReport, out: str | None, fmt: str | None, stem: str) -> None:
    if out is not None:
        directory = Path(out)
        directory.mkdir(parents=True, exist_ok=True)
        (directory / f"{stem}.json").write_text(report.to_json())
        (directory / f"{stem}.csv").write_text(report.to_csv())
    if fmt == "json":
        click.echo(report.to_json(), nl=False)
    elif fmt == "csv":
        click.echo(report.to_csv(), nl=False)
    else:
        click.echo(report.text_summary())


def _get_entry(name: str):
    try:
        return catalog.get(name)
    except UnknownEntryError as exc:
        _fail_usage(str(exc.args[0]) if exc.args else str(exc))
    except catalog.CatalogValidationError as exc:
        _fail_usage(str(exc))


@click.group()
@click.version_option(version="0.1.0", prog_name="gaussric")
def cli():
    """Numerical verification of Gauss-map curvature identities on minimal
    submanifolds, plus oriented-plane distance utilities."""


@cli.command()
@click.argument("entries", nargs=-1, required=True)
@click.option("--suite", type=click.Choice(["euclid", "sphere", "grassmann"]), required=True)
@click.option("--grid", "grid_text", default=None, help="Resolution override, e.g. 41x41.")
@click.option("--box", "box_text", default=None, help="Box override: lo,hi per axis.")
@click.option("--tol-id", type=float, default=None, help="Identity residual tolerance.")
@click.option("--tol-min", type=float, default=None, help="Mean-curvature trace tolerance.")
@click.option("--seed", type=int, default=0, show_default=True, help="Unused by verify; accepted for flag parity.")
@click.option("--out", type=click.Path(file_okay=False), default=None, help="Directory for JSON+CSV reports.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default=None)
def verify(entries, suite, grid_text, box_text, tol_id, tol_min, seed, out, fmt):
    """Run an identity suite over one or more catalog ENTRIES."""
    all_passed = True
    for name in entries:
        entry = _get_entry(name)
        grid = _resolve_grid(entry, grid_text, box_text)
        if suite == "euclid":
            report = suites.verify_minimal_euclidean(entry, grid, tol_min=tol_min, tol_id=tol_id)
        elif suite == "sphere":
            if entry.nested is None:
                _fail_usage(f"entry {name!r} is not a chart on the unit sphere; cannot run the sphere suite")
            report = suites.verify_minimal_spherical(entry, grid, tol_min=tol_min, tol_id=tol_id)
        else:
            report = suites.verify_grassmann_image(entry, grid)
        _emit(report, out, fmt, f"{suite}_{_safe_filename(entry.name)}")
        all_passed = all_passed and report.passed
    sys.exit(0 if all_passed else VERIFICATION_FAILURE)


def _load_plane(spec, label: str, reorthonormalize: bool) -> OrientedPlane:
    try:
        rows = np.array(spec, dtype=float)
    except (TypeError, ValueError):
        _fail_usage(f"plane {label!r} is not a numeric matrix")
    if rows.ndim != 2:
        _fail_usage(f"plane {label!r} must be a list of basis vectors")
    try:
        if reorthonormalize:
            return OrientedPlane.spanning(rows)
        return OrientedPlane(rows)
    except ValueError as exc:
        _fail_usage(f"plane {label!r}: {exc}")


@cli.command()
@click.argument("plane_p", required=False)
@click.argument("plane_q", required=False)
@click.option("--file", "file_", type=click.Path(), default=None,
              help='JSON file {"p": [[...]], "q": [[...]]} instead of inline arguments.')
@click.option("--orthonormalize", "reorthonormalize", is_flag=True,
              help="Gram-Schmidt the input rows before use.")
@click.option("--format", "fmt", type=click.Choice(["json"]), default=None)
def distance(plane_p, plane_q, file_, reorthonormalize, fmt):
    """Distances between two oriented planes given as JSON bases.

    Prints the principal cosines, the canonical (principal-angle) distance,
    the spherical distance, and the great-circle distance between the
    Pluecker images (which is orientation-sensitive).
    """
    if file_ is not None:
        try:
            payload = json.loads(Path(file_).read_text())
            specs = (payload["p"], payload["q"])
        except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
            _fail_usage(f"cannot read planes from {file_!r}: {exc}")
    else:
        if plane_p is None or plane_q is None:
            _fail_usage("provide two inline JSON planes or --file")
        try:
            specs = (json.loads(plane_p), json.loads(plane_q))
        except json.JSONDecodeError as exc:
            _fail_usage(f"bad inline plane JSON: {exc}")
    p = _load_plane(specs[0], "p", reorthonormalize)
    q = _load_plane(specs[1], "q", reorthonormalize)
    try:
        cosines = principal_cosines(p, q)
        d_c = canonical_distance(p, q)
        d_s = spherical_distance(p, q)
        u, v = pluecker_embed(p), pluecker_embed(q)
        d_e = embedded_sphere_distance(u, v)
    except ValueError as exc:
        _fail_usage(str(exc))
    if fmt == "json":
        click.echo(json.dumps({
            "principal_cosines": [float(c) for c in cosines.values],
            "canonical_distance": d_c,
            "spherical_distance": d_s,
            "embedded_sphere_distance": d_e,
            "pluecker_p": u.to_list(),
            "pluecker_q": v.to_list(),
        }, indent=2, sort_keys=True))
    else:
        click.echo(f"principal cosines        : {[float(c) for c in cosines.values]}")
        click.echo(f"canonical distance (d_c) : {d_c!r}")
        click.echo(f"spherical distance (d_s) : {d_s!r}")
        click.echo(f"embedded sphere distance : {d_e!r}")


@cli.command("scan-ric")
@click.argument("entry_name", metavar="ENTRY")
@click.option("--radii", "-V", default="1,2,3,5", show_default=True,
              help="Comma-separated half-widths of the expanding v-box.")
@click.option("--grid", "grid_text", default=None, help="Resolution override, e.g. 41x41.")
@click.option("--out", type=click.Path(file_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default=None)
def scan_ric(entry_name, radii, grid_text, out, fmt):
    """Frame-Ricci eigenvalue scan over expanding boxes of a minimal chart.

    Reports, per half-width V, the extreme eigenvalues over the grid
    v in [-V, V] and the sampled Gauss-image diameter; fails unless every
    eigenvalue is strictly negative with a non-decreasing maximum.
    """
    entry = _get_entry(entry_name)
    try:
        values = [float(r) for r in radii.split(",") if r.strip()]
    except ValueError:
        _fail_usage(f"bad --radii {radii!r}")
    if not values:
        _fail_usage("empty --radii")
    shape = _parse_shape(grid_text, 2) or (41, 41)
    try:
        report = suites.scan_ricci(entry, values, shape)
    except ValueError as exc:
        _fail_usage(str(exc))
    _emit(report, out, fmt, f"scan-ric_{_safe_filename(entry.name)}")
    sys.exit(0 if report.passed else VERIFICATION_FAILURE)


@cli.command()
@click.option("--count", type=int, default=10000, show_default=True)
@click.option("--dims", default="2x4", show_default=True,
              help="Comma-separated plane dimensions as mxk, e.g. 1x3,2x4.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(file_okay=False), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default=None)
def fuzz(count, dims, seed, out, fmt):
    """Random-plane property checks (distance ordering, symmetry, Pluecker
    determinant identities), deterministic under a fixed seed."""
    if count < 0:
        _fail_usage("--count must be non-negative")
    parsed = []
    for chunk in dims.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        match = re.fullmatch(r"(\d+)x(\d+)", chunk)
        if not match:
            _fail_usage(f"bad --dims chunk {chunk!r}; expected mxk")
        m, k = int(match.group(1)), int(match.group(2))
        if not 1 <= m <= k:
            _fail_usage(f"bad dims {chunk!r}: need 1 <= m <= k")
        parsed.append((m, k))
    if not parsed:
        _fail_usage("empty --dims")
    report = suites.fuzz_grassmann(count, parsed, seed)
    _emit(report, out, fmt, "fuzz")
    if not report.passed:
        click.echo(f"violations found; reproduce with --seed {seed}", err=True)
        sys.exit(VERIFICATION_FAILURE)
    sys.exit(0)


def main():
    cli()


if __name__ == "__main__":
    main()
