"""Registry of exact immersions with analytic derivatives and closed-form
curvature oracles.

Every entry ships its evaluator, analytic jacobian and hessian, and the
classical closed forms (metric, frame Ricci, mean-curvature norm) used as
independent ground truth by the verification suites.  On first access each
entry is self-tested: closed forms are re-derived numerically and analytic
derivatives are compared against finite differences.

Parametrized families are addressed as ``name(value)``, e.g.
``small_circle(0.3)`` or ``torus(0.6)``; the bare name uses the default
parameter.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterator, Optional

import numpy as np

from .immersion import (
    ParametrizedImmersion,
    fundamental_data,
    hessian_at,
    jacobian_at,
    metric_at,
    ricci_extrinsic,
)
from .spherical import NestedImmersion, split_second_form

SELF_TEST_TOL = 1e-6


class UnknownEntryError(KeyError):
    """Raised for a catalog name that is not registered."""


class CatalogValidationError(ValueError):
    """Raised when an entry's closed forms disagree with its own numerics."""


@dataclass(frozen=True)
class Grid:
    """Axis-aligned sampling box with per-axis resolution."""

    box: tuple
    shape: tuple

    def axes(self) -> list:
        return [np.linspace(lo, hi, n) for (lo, hi), n in zip(self.box, self.shape)]

    def points(self) -> Iterator[np.ndarray]:
        """Row-major iteration (first axis slowest); deterministic order."""
        for values in product(*self.axes()):
            yield np.array(values)

    def interior_fractions(self, fractions) -> list:
        """Points at the given fractional positions along the box diagonal."""
        out = []
        for f in fractions:
            out.append(np.array([lo + f * (hi - lo) for lo, hi in self.box]))
        return out

    def to_dict(self) -> dict:
        return {
            "box": [[float(lo), float(hi)] for lo, hi in self.box],
            "shape": [int(n) for n in self.shape],
        }


@dataclass
class CatalogEntry:
    """A named immersion plus its documentation-grade oracles.

    ``minimal_in`` is one of ``euclidean``, ``sphere``, ``none``.
    ``closed_forms`` maps oracle names to callables of the chart point:
    ``metric`` -> (m, m), ``ricci_frame`` -> (m, m), and
    ``mean_curvature_norm`` -> float (ambient trace norm for Euclidean
    entries, within-sphere trace norm for sphere entries).
    """

    name: str
    immersion: ParametrizedImmersion
    minimal_in: str
    closed_forms: dict
    default_grid: Grid
    nested: Optional[NestedImmersion] = None
    description: str = ""

    def __post_init__(self):
        if self.minimal_in not in ("euclidean", "sphere", "none"):
            raise ValueError(f"bad minimal_in flag {self.minimal_in!r}")
        if self.minimal_in == "sphere" and self.nested is None:
            raise ValueError("sphere-minimal entries must be nested in the unit sphere")


# --------------------------------------------------------------------------
# entry factories


def _plane() -> CatalogEntry:
    def f(u):
        return np.array([u[0], u[1], 0.0])

    def jac(u):
        return np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])

    def hess(u):
        return np.zeros((2, 2, 3))

    return CatalogEntry(
        name="plane",
        immersion=ParametrizedImmersion(2, 3, f, jac, hess),
        minimal_in="euclidean",
        closed_forms={
            "metric": lambda u: np.eye(2),
            "ricci_frame": lambda u: np.zeros((2, 2)),
            "mean_curvature_norm": lambda u: 0.0,
        },
        default_grid=Grid(((-1.0, 1.0), (-1.0, 1.0)), (11, 11)),
        description="flat plane x(u,v) = (u, v, 0); g = I, K = 0, trB = 0",
    )


def _catenoid() -> CatalogEntry:
    def f(u):
        return np.array([math.cosh(u[1]) * math.cos(u[0]), math.cosh(u[1]) * math.sin(u[0]), u[1]])

    def jac(u):
        c, s = math.cos(u[0]), math.sin(u[0])
        ch, sh = math.cosh(u[1]), math.sinh(u[1])
        return np.array([[-ch * s, ch * c, 0.0], [sh * c, sh * s, 1.0]])

    def hess(u):
        c, s = math.cos(u[0]), math.sin(u[0])
        ch, sh = math.cosh(u[1]), math.sinh(u[1])
        h = np.empty((2, 2, 3))
        h[0, 0] = (-ch * c, -ch * s, 0.0)
        h[0, 1] = h[1, 0] = (-sh * s, sh * c, 0.0)
        h[1, 1] = (ch * c, ch * s, 0.0)
        return h

    return CatalogEntry(
        name="catenoid",
        immersion=ParametrizedImmersion(2, 3, f, jac, hess),
        minimal_in="euclidean",
        closed_forms={
            "metric": lambda u: math.cosh(u[1]) ** 2 * np.eye(2),
            "ricci_frame": lambda u: -math.cosh(u[1]) ** -4 * np.eye(2),
            "mean_curvature_norm": lambda u: 0.0,
        },
        default_grid=Grid(((0.0, 2.0 * math.pi), (-2.0, 2.0)), (41, 41)),
        description=(
            "catenoid x(u,v) = (cosh v cos u, cosh v sin u, v); "
            "g = cosh^2 v I, K = -sech^4 v, trB = 0"
        ),
    )


def _helicoid() -> CatalogEntry:
    def f(u):
        return np.array([u[1] * math.cos(u[0]), u[1] * math.sin(u[0]), u[0]])

    def jac(u):
        c, s = math.cos(u[0]), math.sin(u[0])
        return np.array([[-u[1] * s, u[1] * c, 1.0], [c, s, 0.0]])

    def hess(u):
        c, s = math.cos(u[0]), math.sin(u[0])
        h = np.empty((2, 2, 3))
        h[0, 0] = (-u[1] * c, -u[1] * s, 0.0)
        h[0, 1] = h[1, 0] = (-s, c, 0.0)
        h[1, 1] = (0.0, 0.0, 0.0)
        return h

    return CatalogEntry(
        name="helicoid",
        immersion=ParametrizedImmersion(2, 3, f, jac, hess),
        minimal_in="euclidean",
        closed_forms={
            "metric": lambda u: np.diag([1.0 + u[1] ** 2, 1.0]),
            "ricci_frame": lambda u: -((1.0 + u[1] ** 2) ** -2) * np.eye(2),
            "mean_curvature_norm": lambda u: 0.0,
        },
        default_grid=Grid(((0.0, 2.0 * math.pi), (-2.0, 2.0)), (41, 41)),
        description=(
            "helicoid x(u,v) = (v cos u, v sin u, u); "
            "g = diag(1+v^2, 1), K = -(1+v^2)^-2, trB = 0"
        ),
    )


def _enneper() -> CatalogEntry:
    def f(u):
        a, b = u
        return np.array([a - a**3 / 3.0 + a * b**2, -b + b**3 / 3.0 - b * a**2, a**2 - b**2])

    def jac(u):
        a, b = u
        return np.array(
            [[1.0 - a**2 + b**2, -2.0 * a * b, 2.0 * a], [2.0 * a * b, -1.0 + b**2 - a**2, -2.0 * b]]
        )

    def hess(u):
        a, b = u
        h = np.empty((2, 2, 3))
        h[0, 0] = (-2.0 * a, -2.0 * b, 2.0)
        h[0, 1] = h[1, 0] = (2.0 * b, -2.0 * a, 0.0)
        h[1, 1] = (2.0 * a, 2.0 * b, -2.0)
        return h

    def conf(u):
        return (1.0 + u[0] ** 2 + u[1] ** 2) ** 2

    return CatalogEntry(
        name="enneper",
        immersion=ParametrizedImmersion(2, 3, f, jac, hess),
        minimal_in="euclidean",
        closed_forms={
            "metric": lambda u: conf(u) * np.eye(2),
            "ricci_frame": lambda u: -4.0 / conf(u) ** 2 * np.eye(2),
            "mean_curvature_norm": lambda u: 0.0,
        },
        default_grid=Grid(((-1.0, 1.0), (-1.0, 1.0)), (41, 41)),
        description=(
            "Enneper surface x(u,v) = (u - u^3/3 + u v^2, -v + v^3/3 - v u^2, u^2 - v^2); "
            "g = (1+u^2+v^2)^2 I, K = -4 (1+u^2+v^2)^-4, trB = 0"
        ),
    )


def _holo_z2() -> CatalogEntry:
    # graph of z -> z^2 over C, viewed in R^4
    def f(u):
        a, b = u
        return np.array([a, b, a**2 - b**2, 2.0 * a * b])

    def jac(u):
        a, b = u
        return np.array([[1.0, 0.0, 2.0 * a, 2.0 * b], [0.0, 1.0, -2.0 * b, 2.0 * a]])

    def hess(u):
        h = np.empty((2, 2, 4))
        h[0, 0] = (0.0, 0.0, 2.0, 0.0)
        h[0, 1] = h[1, 0] = (0.0, 0.0, 0.0, 2.0)
        h[1, 1] = (0.0, 0.0, -2.0, 0.0)
        return h

    def conf(u):
        return 1.0 + 4.0 * (u[0] ** 2 + u[1] ** 2)

    return CatalogEntry(
        name="holo_z2",
        immersion=ParametrizedImmersion(2, 4, f, jac, hess),
        minimal_in="euclidean",
        closed_forms={
            "metric": lambda u: conf(u) * np.eye(2),
            "ricci_frame": lambda u: -8.0 / conf(u) ** 3 * np.eye(2),
            "mean_curvature_norm": lambda u: 0.0,
        },
        default_grid=Grid(((-1.0, 1.0), (-1.0, 1.0)), (41, 41)),
        description=(
            "holomorphic graph x(u,v) = (u, v, u^2 - v^2, 2uv) of z -> z^2 in R^4; "
            "g = (1+4(u^2+v^2)) I, K = -8 (1+4(u^2+v^2))^-3, trB = 0"
        ),
    )


def _sphere_chart_maps():
    def f(u):
        return np.array([math.cos(u[0]) * math.cos(u[1]), math.sin(u[0]) * math.cos(u[1]), math.sin(u[1])])

    def jac(u):
        cu, su = math.cos(u[0]), math.sin(u[0])
        cv, sv = math.cos(u[1]), math.sin(u[1])
        return np.array([[-su * cv, cu * cv, 0.0], [-cu * sv, -su * sv, cv]])

    def hess(u):
        cu, su = math.cos(u[0]), math.sin(u[0])
        cv, sv = math.cos(u[1]), math.sin(u[1])
        h = np.empty((2, 2, 3))
        h[0, 0] = (-cu * cv, -su * cv, 0.0)
        h[0, 1] = h[1, 0] = (su * sv, -cu * sv, 0.0)
        h[1, 1] = (-cu * cv, -su * cv, -sv)
        return h

    return f, jac, hess


def _round_sphere() -> CatalogEntry:
    f, jac, hess = _sphere_chart_maps()
    domain = np.array([[-np.inf, np.inf], [-1.45, 1.45]])
    return CatalogEntry(
        name="sphere",
        immersion=ParametrizedImmersion(2, 3, f, jac, hess, chart_domain=domain),
        minimal_in="none",
        closed_forms={
            "metric": lambda u: np.diag([math.cos(u[1]) ** 2, 1.0]),
            "ricci_frame": lambda u: np.eye(2),
            "mean_curvature_norm": lambda u: 2.0,
        },
        default_grid=Grid(((0.0, 2.0 * math.pi), (-1.2, 1.2)), (21, 21)),
        description=(
            "round unit sphere chart x(u,v) = (cos u cos v, sin u cos v, sin v); "
            "g = diag(cos^2 v, 1), K = 1, |trB| = 2; negative control"
        ),
    )


def _small_circle(theta: float, name: str) -> CatalogEntry:
    ct, st = math.cos(theta), math.sin(theta)
    if abs(ct) < 1e-3:
        raise CatalogValidationError("small circle latitude too close to the pole")

    def f(u):
        return np.array([ct * math.cos(u[0]), ct * math.sin(u[0]), st])

    def jac(u):
        return np.array([[-ct * math.sin(u[0]), ct * math.cos(u[0]), 0.0]])

    def hess(u):
        return np.array([[[-ct * math.cos(u[0]), -ct * math.sin(u[0]), 0.0]]])

    minimal = "sphere" if abs(math.tan(theta)) <= 1e-12 else "none"
    imm = ParametrizedImmersion(1, 3, f, jac, hess)
    return CatalogEntry(
        name=name,
        immersion=imm,
        minimal_in=minimal,
        closed_forms={
            "metric": lambda u: np.array([[ct**2]]),
            "ricci_frame": lambda u: np.zeros((1, 1)),
            "mean_curvature_norm": lambda u: abs(math.tan(theta)),
        },
        default_grid=Grid(((0.0, 2.0 * math.pi),), (41,)),
        nested=NestedImmersion(imm),
        description=(
            f"latitude circle x(u) = (cos{theta:.6g} cos u, cos{theta:.6g} sin u, sin{theta:.6g}) "
            "on S^2; g = cos^2(theta), within-sphere |trB| = |tan(theta)|"
        ),
    )


def _great_sphere() -> CatalogEntry:
    f3, jac3, hess3 = _sphere_chart_maps()

    def f(u):
        return np.append(f3(u), 0.0)

    def jac(u):
        return np.hstack([jac3(u), np.zeros((2, 1))])

    def hess(u):
        return np.concatenate([hess3(u), np.zeros((2, 2, 1))], axis=2)

    domain = np.array([[-np.inf, np.inf], [-1.45, 1.45]])
    imm = ParametrizedImmersion(2, 4, f, jac, hess, chart_domain=domain)
    return CatalogEntry(
        name="great_sphere",
        immersion=imm,
        minimal_in="sphere",
        closed_forms={
            "metric": lambda u: np.diag([math.cos(u[1]) ** 2, 1.0]),
            "ricci_frame": lambda u: np.eye(2),
            "mean_curvature_norm": lambda u: 0.0,
        },
        default_grid=Grid(((0.0, 2.0 * math.pi), (-1.2, 1.2)), (21, 21)),
        nested=NestedImmersion(imm),
        description=(
            "totally geodesic S^2 in S^3 (equatorial chart, 4th coordinate 0); "
            "Ric = I, within-sphere trB = 0, constant normal-space map"
        ),
    )


def _torus(a: float, name: str) -> CatalogEntry:
    if not 0.05 < a < 0.999:
        raise CatalogValidationError("torus radius parameter must lie in (0.05, 0.999)")
    b = math.sqrt(1.0 - a * a)

    def f(u):
        return np.array([a * math.cos(u[0]), a * math.sin(u[0]), b * math.cos(u[1]), b * math.sin(u[1])])

    def jac(u):
        return np.array(
            [
                [-a * math.sin(u[0]), a * math.cos(u[0]), 0.0, 0.0],
                [0.0, 0.0, -b * math.sin(u[1]), b * math.cos(u[1])],
            ]
        )

    def hess(u):
        h = np.zeros((2, 2, 4))
        h[0, 0] = (-a * math.cos(u[0]), -a * math.sin(u[0]), 0.0, 0.0)
        h[1, 1] = (0.0, 0.0, -b * math.cos(u[1]), -b * math.sin(u[1]))
        return h

    trace_norm = abs(b / a - a / b)
    minimal = "sphere" if trace_norm <= 1e-12 else "none"
    imm = ParametrizedImmersion(2, 4, f, jac, hess)
    return CatalogEntry(
        name=name,
        immersion=imm,
        minimal_in=minimal,
        closed_forms={
            "metric": lambda u: np.diag([a**2, b**2]),
            "ricci_frame": lambda u: np.zeros((2, 2)),
            "mean_curvature_norm": lambda u: trace_norm,
        },
        default_grid=Grid(((0.0, 2.0 * math.pi), (0.0, 2.0 * math.pi)), (21, 21)),
        nested=NestedImmersion(imm),
        description=(
            f"product torus S^1({a:.6g}) x S^1({b:.6g}) in S^3; flat (Ric = 0), "
            "within-sphere |trB| = |b/a - a/b| (zero only at a = 1/sqrt(2))"
        ),
    )


_INV_SQRT2 = 1.0 / math.sqrt(2.0)

_FACTORIES: dict[str, Callable[[Optional[float]], CatalogEntry]] = {
    "plane": lambda p: _plane(),
    "catenoid": lambda p: _catenoid(),
    "helicoid": lambda p: _helicoid(),
    "enneper": lambda p: _enneper(),
    "holo_z2": lambda p: _holo_z2(),
    "sphere": lambda p: _round_sphere(),
    "great_circle": lambda p: _small_circle(0.0, "great_circle"),
    "small_circle": lambda p: _small_circle(
        math.pi / 6.0 if p is None else p, "small_circle" if p is None else f"small_circle({p:g})"
    ),
    "great_sphere": lambda p: _great_sphere(),
    "clifford_torus": lambda p: _torus(_INV_SQRT2, "clifford_torus"),
    "torus": lambda p: _torus(
        _INV_SQRT2 if p is None else p, "torus" if p is None else f"torus({p:g})"
    ),
}

_PARAMETRIZED = {"small_circle", "torus"}

_NAME_RE = re.compile(r"^([A-Za-z_][\w]*)(?:\(([-+0-9.eE]+)\))?$")

_validated: set[str] = set()
_plugins: dict[str, CatalogEntry] = {}


def _self_test(entry: CatalogEntry) -> None:
    """Re-derive the closed forms and cross-check analytic derivatives at a
    few interior points of the default grid."""
    imm = entry.immersion
    fd_only = ParametrizedImmersion(
        imm.domain_dim, imm.ambient_dim, imm.evaluator, None, None,
        imm.finite_difference_step, imm.chart_domain,
    )
    for u in entry.default_grid.interior_fractions((0.32, 0.57, 0.81)):
        if imm.jacobian is not None:
            resid = np.max(np.abs(jacobian_at(imm, u) - jacobian_at(fd_only, u)))
            if resid > SELF_TEST_TOL:
                raise CatalogValidationError(
                    f"{entry.name}: analytic jacobian vs finite differences residual {resid:.3e}"
                )
        if imm.hessian is not None:
            resid = np.max(np.abs(hessian_at(imm, u) - hessian_at(fd_only, u)))
            if resid > SELF_TEST_TOL:
                raise CatalogValidationError(
                    f"{entry.name}: analytic hessian vs finite differences residual {resid:.3e}"
                )
        forms = entry.closed_forms
        fd = fundamental_data(imm, u)
        if "metric" in forms:
            resid = np.max(np.abs(metric_at(imm, u) - np.asarray(forms["metric"](u), dtype=float)))
            if resid > SELF_TEST_TOL:
                raise CatalogValidationError(f"{entry.name}: metric closed form residual {resid:.3e}")
        if "ricci_frame" in forms:
            resid = np.max(
                np.abs(ricci_extrinsic(fd).components - np.asarray(forms["ricci_frame"](u), dtype=float))
            )
            if resid > SELF_TEST_TOL:
                raise CatalogValidationError(f"{entry.name}: Ricci closed form residual {resid:.3e}")
        if "mean_curvature_norm" in forms:
            if entry.nested is not None:
                measured = float(np.linalg.norm(split_second_form(entry.nested, u).trace()))
            else:
                measured = float(np.linalg.norm(fd.mean_curvature))
            resid = abs(measured - float(forms["mean_curvature_norm"](u)))
            if resid > SELF_TEST_TOL:
                raise CatalogValidationError(
                    f"{entry.name}: mean-curvature closed form residual {resid:.3e}"
                )
        # flag consistency: minimal entries must actually be minimal
        if entry.minimal_in == "euclidean":
            measured = float(np.linalg.norm(fd.mean_curvature))
        elif entry.minimal_in == "sphere":
            measured = float(np.linalg.norm(split_second_form(entry.nested, u).trace()))
        else:
            measured = 0.0
        if measured > SELF_TEST_TOL:
            raise CatalogValidationError(
                f"{entry.name}: flagged minimal_in={entry.minimal_in} but trace norm {measured:.3e}"
            )


def valid_names() -> list:
    return list(_FACTORIES.keys()) + sorted(_plugins.keys())


def list_entries() -> list:
    """Default-parameter entries in registration order (deterministic)."""
    entries = [factory(None) for factory in _FACTORIES.values()]
    entries.extend(_plugins[name] for name in sorted(_plugins))
    return entries


def get(name: str) -> CatalogEntry:
    """Entry by name, with optional ``name(param)`` parameter syntax.

    The first access of each distinct name runs the registration self-test.
    """
    if name in _plugins:
        entry = _plugins[name]
    else:
        match = _NAME_RE.match(name.strip())
        if not match or match.group(1) not in _FACTORIES:
            raise UnknownEntryError(
                f"unknown catalog entry {name!r}; valid entries: {', '.join(valid_names())}"
            )
        base, param = match.group(1), match.group(2)
        if param is not None and base not in _PARAMETRIZED:
            raise UnknownEntryError(
                f"catalog entry {base!r} does not take a parameter; valid entries: "
                f"{', '.join(valid_names())}"
            )
        entry = _FACTORIES[base](None if param is None else float(param))
    if entry.name not in _validated:
        _self_test(entry)
        _validated.add(entry.name)
    return entry


def register(entry: CatalogEntry, overwrite: bool = False) -> None:
    """Register a user-supplied entry (the plugin contract).

    The entry is self-tested immediately: closed forms and the minimality
    flag must be consistent with its own numerics.
    """
    if not overwrite and (entry.name in _FACTORIES or entry.name in _plugins):
        raise ValueError(f"catalog entry {entry.name!r} already registered")
    _self_test(entry)
    _plugins[entry.name] = entry
    _validated.add(entry.name)


def unregister(name: str) -> None:
    _plugins.pop(name, None)
    _validated.discard(name)
