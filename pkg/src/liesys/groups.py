"""Concrete Lie-group charts: composition laws, inverses, adjoints,
one-parameter subgroups, chart conversions and log-derivatives.

A chart is either a matrix chart (coords = row-major matrix entries,
composition = matrix product) or a canonical chart of first/second kind
in which exp(s a_i) is the coordinate line s e_i.  Second-kind charts
carry their ordering as part of the chart identity; mixing orderings is
a chart mismatch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import LieAlgebra, _expm_taylor, catalog_algebra, exp_ad
from .errors import ChartError, UnknownNameError

DEFAULT_FD_STEP = 1e-5
_CONSTRAINT_TOL = 1e-8


def _wrap_angle(t):
    # wrap to (-pi, pi]
    w = math.fmod(t + math.pi, 2.0 * math.pi)
    if w <= 0.0:
        w += 2.0 * math.pi
    return w - math.pi


@dataclass(frozen=True)
class GroupChart:
    group_name: str
    chart_kind: str                       # 'matrix' | 'canonical_first' | 'canonical_second' | 'quaternion'
    coord_dim: int
    algebra: LieAlgebra
    ordering: tuple | None = None         # for canonical_second, 1-based
    matrix_shape: tuple | None = None
    algebra_rep: tuple | None = field(default=None, repr=False)   # matrices per basis element
    compose_fn: Callable = field(default=None, repr=False)
    inverse_fn: Callable = field(default=None, repr=False)
    identity_coords: np.ndarray = field(default=None, repr=False)
    adjoint_fn: Callable | None = field(default=None, repr=False)
    constraint_fn: Callable | None = field(default=None, repr=False)
    right_log_fn: Callable | None = field(default=None, repr=False)  # closed form, coords,dcoords -> vec
    left_log_fn: Callable | None = field(default=None, repr=False)
    wrap_fn: Callable | None = field(default=None, repr=False)
    exp_fn: Callable | None = field(default=None, repr=False)      # (index, s) -> coords
    to_matrix_fn: Callable | None = field(default=None, repr=False)

    def element(self, coords) -> "GroupElement":
        return GroupElement(self, np.asarray(coords, dtype=float))

    def identity(self) -> "GroupElement":
        return GroupElement(self, self.identity_coords.copy())


@dataclass(frozen=True)
class GroupElement:
    chart: GroupChart
    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float)
        if c.shape != (self.chart.coord_dim,):
            raise ChartError(
                f"{self.chart.group_name}: expected {self.chart.coord_dim} coords, got {c.shape}"
            )
        if self.chart.wrap_fn is not None:
            c = self.chart.wrap_fn(c)
        object.__setattr__(self, "coords", c)
        if self.chart.constraint_fn is not None:
            err = self.chart.constraint_fn(c)
            if err > _CONSTRAINT_TOL:
                raise ChartError(
                    f"{self.chart.group_name}: chart constraint violated ({err:.3g})"
                )

    def matrix(self) -> np.ndarray:
        if self.chart.chart_kind == "matrix":
            return self.coords.reshape(self.chart.matrix_shape)
        if self.chart.to_matrix_fn is not None:
            return self.chart.to_matrix_fn(self.coords)
        return matrix_rep(self)


def _same_chart(g: GroupElement, h: GroupElement):
    cg, ch = g.chart, h.chart
    if (cg.group_name, cg.chart_kind, cg.ordering) != (ch.group_name, ch.chart_kind, ch.ordering):
        raise ChartError(f"chart mismatch: {cg.group_name}/{cg.chart_kind} vs {ch.group_name}/{ch.chart_kind}")


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    _same_chart(g, h)
    return GroupElement(g.chart, g.chart.compose_fn(g.coords, h.coords))


def inverse(g: GroupElement) -> GroupElement:
    return GroupElement(g.chart, g.chart.inverse_fn(g.coords))


def exp_chart(chart: GroupChart, index: int, s: float = 1.0) -> GroupElement:
    """exp(s a_index) in the chart (index is 0-based into the algebra basis)."""
    if chart.exp_fn is not None:
        return GroupElement(chart, chart.exp_fn(index, s))
    if chart.chart_kind == "matrix":
        A = chart.algebra_rep[index]
        return GroupElement(chart, _expm_taylor(s * A).reshape(-1))
    coords = chart.identity_coords.copy()
    if chart.chart_kind == "canonical_second":
        coords[chart.ordering.index(index + 1)] += s
    else:
        coords[index] += s
    return GroupElement(chart, coords)


def exp_chart_vector(chart: GroupChart, vec, s: float = 1.0) -> GroupElement:
    """exp(s * sum_i vec_i a_i); exact for matrix and first-kind charts."""
    vec = np.asarray(vec, dtype=float)
    if chart.chart_kind == "matrix":
        A = sum(v * M for v, M in zip(vec, chart.algebra_rep))
        return GroupElement(chart, _expm_taylor(s * A).reshape(-1))
    if chart.chart_kind == "canonical_first":
        return GroupElement(chart, chart.identity_coords + s * vec)
    raise ChartError("general exponentials need a matrix or first-kind chart")


def group_adjoint(g: GroupElement) -> np.ndarray:
    """Matrix of Ad(g) in the algebra basis.

    Matrix charts expand g a g^{-1} on the basis; canonical charts use the
    exact product of exp(ad) factors, which only needs structure constants.
    """
    chart = g.chart
    if chart.adjoint_fn is not None:
        return chart.adjoint_fn(g.coords)
    if chart.chart_kind == "matrix":
        G = g.matrix()
        Gi = inverse(g).matrix()
        cols = []
        B = np.stack([M.reshape(-1) for M in chart.algebra_rep], axis=1)
        Bpinv = np.linalg.pinv(B)
        for M in chart.algebra_rep:
            cols.append(Bpinv @ (G @ M @ Gi).reshape(-1))
        return np.column_stack(cols)
    alg = chart.algebra
    if chart.chart_kind == "canonical_first":
        return exp_ad(alg, g.coords, 1.0)
    # second kind: Ad(prod exp(v_i a_{s_i})) = prod exp(v_i ad a_{s_i))
    out = np.eye(alg.dim)
    for pos, idx in enumerate(chart.ordering):
        out = out @ exp_ad(alg, alg.basis_vector(idx - 1), g.coords[pos])
    return out


def _coords_of_displacement(chart, base, moved, invert_left):
    """coords of moved * base^{-1} (right) or base^{-1} * moved (left)."""
    b = GroupElement(chart, base)
    m = GroupElement(chart, moved)
    if invert_left:
        return compose(inverse(b), m).coords
    return compose(m, inverse(b)).coords


def _stencil_derivative(sample, t, h, order):
    """Derivative of a vector-valued callable; order 2 or 4 central stencil."""
    if order == 4:
        return (8.0 * (sample(t + h) - sample(t - h))
                - (sample(t + 2 * h) - sample(t - 2 * h))) / (12.0 * h)
    return (sample(t + h) - sample(t - h)) / (2.0 * h)


def right_log_derivative(curve, t: float, h: float = DEFAULT_FD_STEP,
                         order: int = 2) -> np.ndarray:
    """The algebra vector R_{g^{-1}*g}(dg/dt) at time t.

    Uses the chart closed form when cataloged, else a central difference of
    s -> g(t+s) g(t)^{-1} pulled back to the identity (canonical charts have
    identity-centred coordinates, so the pullback is just the coordinates).
    order=4 switches to the five-point stencil.
    """
    g0 = curve(t)
    chart = g0.chart
    if chart.right_log_fn is not None:
        dcoords = _stencil_derivative(lambda s: curve(s).coords, t, h, order)
        return chart.right_log_fn(g0.coords, dcoords)
    if chart.chart_kind == "matrix":
        Gdot = _stencil_derivative(lambda s: curve(s).matrix(), t, h, order)
        xi = Gdot @ np.linalg.inv(g0.matrix())
        B = np.stack([M.reshape(-1) for M in chart.algebra_rep], axis=1)
        sol, *_ = np.linalg.lstsq(B, xi.reshape(-1), rcond=None)
        return sol
    base = g0.coords
    return _stencil_derivative(
        lambda s: _coords_of_displacement(chart, base, curve(s).coords, False),
        t, h, order)


def left_log_derivative(curve, t: float, h: float = DEFAULT_FD_STEP,
                        order: int = 2) -> np.ndarray:
    """The algebra vector L_{g^{-1}*g}(dg/dt) at time t."""
    g0 = curve(t)
    chart = g0.chart
    if chart.left_log_fn is not None:
        dcoords = _stencil_derivative(lambda s: curve(s).coords, t, h, order)
        return chart.left_log_fn(g0.coords, dcoords)
    if chart.chart_kind == "matrix":
        Gdot = _stencil_derivative(lambda s: curve(s).matrix(), t, h, order)
        xi = np.linalg.inv(g0.matrix()) @ Gdot
        B = np.stack([M.reshape(-1) for M in chart.algebra_rep], axis=1)
        sol, *_ = np.linalg.lstsq(B, xi.reshape(-1), rcond=None)
        return sol
    if chart.chart_kind == "quaternion":
        # L = Ad(g^{-1}) R, both sides exact given the closed right form
        return group_adjoint(inverse(g0)) @ right_log_derivative(curve, t, h, order)
    base = g0.coords
    return _stencil_derivative(
        lambda s: _coords_of_displacement(chart, base, curve(s).coords, True),
        t, h, order)


def element_to_dict(g: GroupElement) -> dict:
    """JSON-ready serialization: (group_name, chart_kind, ordering?, coords)."""
    out = {"group_name": g.chart.group_name, "chart_kind": g.chart.chart_kind,
           "coords": g.coords.tolist()}
    if g.chart.ordering is not None:
        out["ordering"] = list(g.chart.ordering)
    return out


def element_from_dict(d: dict) -> GroupElement:
    key = (d["group_name"], d["chart_kind"],
           tuple(d["ordering"]) if "ordering" in d else None)
    if key not in _CHARTS:
        raise UnknownNameError(f"no chart registered for {key}")
    return GroupElement(_CHARTS[key], np.asarray(d["coords"], dtype=float))


def matrix_rep(g: GroupElement) -> np.ndarray:
    """Faithful matrix representative of a canonical-chart element.

    Built as the product of matrix exponentials matching the chart's
    definition (first kind: expm of the full vector)."""
    chart = g.chart
    if chart.algebra_rep is None:
        raise ChartError(f"{chart.group_name}: no matrix representation cataloged")
    if chart.chart_kind == "canonical_first":
        A = sum(v * M for v, M in zip(g.coords, chart.algebra_rep))
        return _expm_taylor(A)
    out = None
    for pos, idx in enumerate(chart.ordering):
        F = _expm_taylor(g.coords[pos] * chart.algebra_rep[idx - 1])
        out = F if out is None else out @ F
    return out


# ---------------------------------------------------------------------------
# chart registry
# ---------------------------------------------------------------------------

_CHARTS: dict = {}
_CONVERSIONS: dict = {}


def register_chart(key, chart):
    _CHARTS[key] = chart


def get_chart(group_name: str, chart_kind: str = "canonical_second",
              ordering=None, eps=None) -> GroupChart:
    name = group_name if eps is None else f"{group_name}({eps:+d})"
    key = (name, chart_kind, tuple(ordering) if ordering else None)
    if key in _CHARTS:
        return _CHARTS[key]
    # default orderings
    if chart_kind == "canonical_second" and ordering is None:
        for k in _CHARTS:
            if k[0] == name and k[1] == chart_kind:
                return _CHARTS[k]
    raise UnknownNameError(f"no chart registered for {key}")


def register_conversion(src_key, dst_key, fn):
    _CONVERSIONS[(src_key, dst_key)] = fn


def chart_convert(g: GroupElement, target: GroupChart) -> GroupElement:
    src = g.chart
    if src is target:
        return g
    key = (
        (src.group_name, src.chart_kind, src.ordering),
        (target.group_name, target.chart_kind, target.ordering),
    )
    fn = _CONVERSIONS.get(key)
    if fn is None:
        raise ChartError(f"no conversion registered: {key[0]} -> {key[1]}")
    return GroupElement(target, fn(g.coords))


def _mk_matrix_chart(group, alg, rep, constraint=None):
    n = rep[0].shape[0]
    ident = np.eye(n).reshape(-1)
    chart = GroupChart(
        group_name=group,
        chart_kind="matrix",
        coord_dim=n * n,
        algebra=alg,
        matrix_shape=(n, n),
        algebra_rep=tuple(np.asarray(M, dtype=float) for M in rep),
        compose_fn=lambda a, b: (a.reshape(n, n) @ b.reshape(n, n)).reshape(-1),
        inverse_fn=lambda a: np.linalg.inv(a.reshape(n, n)).reshape(-1),
        identity_coords=ident,
        constraint_fn=constraint,
    )
    register_chart((group, "matrix", None), chart)
    return chart


# --- Heisenberg group H(3) --------------------------------------------------

def _build_h3():
    alg = catalog_algebra("h3")
    # 3x3 unipotent representation with [A1, A2] = A3
    A1 = np.zeros((3, 3)); A1[0, 1] = 1.0
    A2 = np.zeros((3, 3)); A2[1, 2] = 1.0
    A3 = np.zeros((3, 3)); A3[0, 2] = 1.0
    rep = (A1, A2, A3)

    def compose2(g, h):
        a, b, c = g
        ap, bp, cp = h
        return np.array([a + ap, b + bp, c + cp - b * ap])

    def inverse2(g):
        a, b, c = g
        return np.array([-a, -b, -c - a * b])

    def adjoint12(g):
        a, b = g[0], g[1]
        return np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [-b, a, 1.0]])

    chart2 = GroupChart(
        "H3", "canonical_second", 3, alg, ordering=(1, 2, 3),
        algebra_rep=rep, compose_fn=compose2, inverse_fn=inverse2,
        identity_coords=np.zeros(3), adjoint_fn=adjoint12,
        right_log_fn=lambda g, dg: np.array([dg[0], dg[1], dg[2] + g[0] * dg[1]]),
        left_log_fn=lambda g, dg: np.array([dg[0], dg[1], dg[2] + g[1] * dg[0]]),
    )
    register_chart(("H3", "canonical_second", (1, 2, 3)), chart2)

    def compose1(g, h):
        a, b, c = g
        ap, bp, cp = h
        return np.array([a + ap, b + bp, c + cp + 0.5 * (a * bp - b * ap)])

    chart1 = GroupChart(
        "H3", "canonical_first", 3, alg, algebra_rep=rep,
        compose_fn=compose1, inverse_fn=lambda g: -g,
        identity_coords=np.zeros(3), adjoint_fn=adjoint12,
        right_log_fn=lambda g, dg: np.array(
            [dg[0], dg[1], dg[2] - 0.5 * (g[1] * dg[0] - g[0] * dg[1])]),
        left_log_fn=lambda g, dg: np.array(
            [dg[0], dg[1], dg[2] + 0.5 * (g[1] * dg[0] - g[0] * dg[1])]),
    )
    register_chart(("H3", "canonical_first", None), chart1)

    k2, k1 = ("H3", "canonical_second", (1, 2, 3)), ("H3", "canonical_first", None)
    register_conversion(k2, k1, lambda g: np.array([g[0], g[1], g[2] + 0.5 * g[0] * g[1]]))
    register_conversion(k1, k2, lambda g: np.array([g[0], g[1], g[2] - 0.5 * g[0] * g[1]]))
    _mk_matrix_chart("H3", alg, rep)
    register_conversion(
        k2, ("H3", "matrix", None),
        lambda g: (np.eye(3) + g[0] * A1 + g[1] * A2 + (g[2] + g[0] * g[1]) * A3).reshape(-1),
    )


# --- rigid body with two oscillators: G4 ------------------------------------

def _build_g4():
    alg = catalog_algebra("g4")

    def compose1(g, h):
        a, b, c, d = g
        ap, bp, cp, dp = h
        w = a * bp - b * ap
        return np.array([
            a + ap, b + bp,
            c + cp + 0.5 * w,
            d + dp + 0.5 * (a * cp - c * ap) + 0.5 * (b * cp - c * bp)
            + w * (a - ap + b - bp) / 12.0,
        ])

    chart1 = GroupChart(
        "G4", "canonical_first", 4, alg,
        compose_fn=compose1, inverse_fn=lambda g: -g,
        identity_coords=np.zeros(4),
    )
    register_chart(("G4", "canonical_first", None), chart1)

    def compose2(g, h):
        a, b, c, d = g
        ap, bp, cp, dp = h
        return np.array([
            a + ap, b + bp,
            c + cp - b * ap,
            d + dp - c * (ap + bp) + 0.5 * b * ap * (b + 2.0 * bp + ap),
        ])

    def conv21(g):
        a, b, c, d = g
        return np.array([
            a, b, c + 0.5 * a * b,
            d + 0.5 * (a + b) * c + a * b * (a - b) / 12.0,
        ])

    def conv12(g):
        a, b, c1, d1 = g
        c2 = c1 - 0.5 * a * b
        d2 = d1 - 0.5 * (a + b) * c2 - a * b * (a - b) / 12.0
        return np.array([a, b, c2, d2])

    def inverse2(g):
        return conv12(-conv21(g))

    chart2 = GroupChart(
        "G4", "canonical_second", 4, alg, ordering=(1, 2, 3, 4),
        compose_fn=compose2, inverse_fn=inverse2, identity_coords=np.zeros(4),
    )
    register_chart(("G4", "canonical_second", (1, 2, 3, 4)), chart2)
    k2, k1 = ("G4", "canonical_second", (1, 2, 3, 4)), ("G4", "canonical_first", None)
    register_conversion(k2, k1, conv21)
    register_conversion(k1, k2, conv12)


# --- second-degree Brockett extension: G5 -----------------------------------

def _build_g5():
    alg = catalog_algebra("g5")

    def compose1(g, h):
        a, b, c, d, e = g
        ap, bp, cp, dp, ep = h
        w = a * bp - b * ap
        return np.array([
            a + ap, b + bp,
            c + cp + 0.5 * w,
            d + dp + 0.5 * (a * cp - c * ap) + (a - ap) * w / 12.0,
            e + ep + 0.5 * (b * cp - c * bp) + (b - bp) * w / 12.0,
        ])

    chart1 = GroupChart(
        "G5", "canonical_first", 5, alg,
        compose_fn=compose1, inverse_fn=lambda g: -g, identity_coords=np.zeros(5),
    )
    register_chart(("G5", "canonical_first", None), chart1)

    def compose2(g, h):
        a, b, c, d, e = g
        ap, bp, cp, dp, ep = h
        return np.array([
            a + ap, b + bp,
            c + cp - b * ap,
            d + dp - c * ap + 0.5 * b * ap**2,
            e + ep - c * bp + b * ap * bp + 0.5 * b**2 * ap,
        ])

    def conv21(g):
        a, b, c, d, e = g
        return np.array([
            a, b, c + 0.5 * a * b,
            d + 0.5 * a * c + a * a * b / 12.0,
            e + 0.5 * b * c - a * b * b / 12.0,
        ])

    def conv12(g):
        a, b, c1, d1, e1 = g
        c2 = c1 - 0.5 * a * b
        d2 = d1 - 0.5 * a * c2 - a * a * b / 12.0
        e2 = e1 - 0.5 * b * c2 + a * b * b / 12.0
        return np.array([a, b, c2, d2, e2])

    chart2 = GroupChart(
        "G5", "canonical_second", 5, alg, ordering=(1, 2, 3, 4, 5),
        compose_fn=compose2, inverse_fn=lambda g: conv12(-conv21(g)),
        identity_coords=np.zeros(5),
    )
    register_chart(("G5", "canonical_second", (1, 2, 3, 4, 5)), chart2)
    k2, k1 = ("G5", "canonical_second", (1, 2, 3, 4, 5)), ("G5", "canonical_first", None)
    register_conversion(k2, k1, conv21)
    register_conversion(k1, k2, conv12)


# --- third-degree Brockett extension: G7 ------------------------------------

def _build_g7():
    alg = catalog_algebra("g7")

    def compose1(g, h):
        a, b, c, d, e, f, k = g
        ap, bp, cp, dp, ep, fp, kp = h
        w = a * bp - b * ap
        return np.array([
            a + ap, b + bp,
            c + cp + 0.5 * w,
            d + dp + 0.5 * (a * cp - c * ap) + (a - ap) * w / 12.0,
            e + ep + 0.5 * (b * cp - c * bp) + (b - bp) * w / 12.0,
            f + fp + 0.5 * (a * dp - d * ap) + (a - ap) * (a * cp - c * ap) / 12.0
            + a * ap * (b * ap - a * bp) / 24.0,
            k + kp + 0.5 * (b * ep - e * bp) + (b - bp) * (b * cp - c * bp) / 12.0
            + b * bp * (b * ap - a * bp) / 24.0,
        ])

    chart1 = GroupChart(
        "G7", "canonical_first", 7, alg,
        compose_fn=compose1, inverse_fn=lambda g: -g, identity_coords=np.zeros(7),
    )
    register_chart(("G7", "canonical_first", None), chart1)


# --- non-sinusoid-steerable system: G8 --------------------------------------

def _build_g8():
    alg = catalog_algebra("g8")

    def compose1(g, h):
        a, b, c, d, e, f, k, l = g
        ap, bp, cp, dp, ep, fp, kp, lp = h
        w = a * bp - b * ap
        return np.array([
            a + ap, b + bp,
            c + cp + 0.5 * w,
            d + dp + 0.5 * (a * cp - c * ap) + (a - ap) * w / 12.0,
            e + ep + 0.5 * (b * cp - c * bp) + (b - bp) * w / 12.0,
            f + fp + 0.5 * (a * dp - d * ap) + (a - ap) * (a * cp - c * ap) / 12.0
            + a * ap * (b * ap - a * bp) / 24.0,
            k + kp + 0.5 * (a * ep - e * ap) + 0.5 * (b * dp - d * bp)
            + (a * b * cp + ap * bp * c) / 6.0
            - (c + cp) * (a * bp + b * ap) / 12.0
            + (a * bp + b * ap) * (b * ap - a * bp) / 24.0,
            l + lp + 0.5 * (b * ep - e * bp) + (b - bp) * (b * cp - c * bp) / 12.0
            + b * bp * (b * ap - a * bp) / 24.0,
        ])

    chart1 = GroupChart(
        "G8", "canonical_first", 8, alg,
        compose_fn=compose1, inverse_fn=lambda g: -g, identity_coords=np.zeros(8),
    )
    register_chart(("G8", "canonical_first", None), chart1)


# --- chained-form groups Gbar_n (n = 4, 5 with closed laws) ------------------

def _build_gbar4():
    alg = catalog_algebra("gbar", n=4)

    def compose1(g, h):
        a, b, c, d = g
        ap, bp, cp, dp = h
        w = a * bp - b * ap
        return np.array([
            a + ap, b + bp,
            c + cp + 0.5 * w,
            d + dp + 0.5 * (a * cp - c * ap) + w * (a - ap) / 12.0,
        ])

    chart1 = GroupChart(
        "Gbar4", "canonical_first", 4, alg,
        compose_fn=compose1, inverse_fn=lambda g: -g, identity_coords=np.zeros(4),
    )
    register_chart(("Gbar4", "canonical_first", None), chart1)

    def compose2(g, h):
        a, b, c, d = g
        ap, bp, cp, dp = h
        return np.array([
            a + ap, b + bp,
            c + cp - b * ap,
            d + dp - c * ap + 0.5 * b * ap**2,
        ])

    def conv21(g):
        a, b, c, d = g
        return np.array([a, b, c + 0.5 * a * b, d + 0.5 * a * c + a * a * b / 12.0])

    def conv12(g):
        a, b, c1, d1 = g
        c2 = c1 - 0.5 * a * b
        d2 = d1 - 0.5 * a * c2 - a * a * b / 12.0
        return np.array([a, b, c2, d2])

    chart2 = GroupChart(
        "Gbar4", "canonical_second", 4, alg, ordering=(1, 2, 3, 4),
        compose_fn=compose2, inverse_fn=lambda g: conv12(-conv21(g)),
        identity_coords=np.zeros(4),
    )
    register_chart(("Gbar4", "canonical_second", (1, 2, 3, 4)), chart2)
    k2, k1 = ("Gbar4", "canonical_second", (1, 2, 3, 4)), ("Gbar4", "canonical_first", None)
    register_conversion(k2, k1, conv21)
    register_conversion(k1, k2, conv12)


def _build_gbar5():
    alg = catalog_algebra("gbar", n=5)

    def compose1(g, h):
        a, b, c, d, e = g
        ap, bp, cp, dp, ep = h
        w = a * bp - b * ap
        return np.array([
            a + ap, b + bp,
            c + cp + 0.5 * w,
            d + dp + 0.5 * (a * cp - c * ap) + (a - ap) * w / 12.0,
            e + ep + 0.5 * (a * dp - d * ap) + (a - ap) * (a * cp - c * ap) / 12.0
            - a * ap * w / 24.0,
        ])

    chart1 = GroupChart(
        "Gbar5", "canonical_first", 5, alg,
        compose_fn=compose1, inverse_fn=lambda g: -g, identity_coords=np.zeros(5),
    )
    register_chart(("Gbar5", "canonical_first", None), chart1)

    def compose2(g, h):
        a, b, c, d, e = g
        ap, bp, cp, dp, ep = h
        return np.array([
            a + ap, b + bp,
            c + cp - b * ap,
            d + dp - c * ap + 0.5 * b * ap**2,
            e + ep - d * ap + 0.5 * c * ap**2 - b * ap**3 / 6.0,
        ])

    def compose2_inv(g):
        # solve (g)(x) = e sequentially; the law is triangular in x
        a, b, c, d, e = g
        ap = -a
        bp = -b
        cp = -c + b * ap
        dp = -d + c * ap - 0.5 * b * ap**2
        ep = -e + d * ap - 0.5 * c * ap**2 + b * ap**3 / 6.0
        return np.array([ap, bp, cp, dp, ep])

    chart2 = GroupChart(
        "Gbar5", "canonical_second", 5, alg, ordering=(1, 2, 3, 4, 5),
        compose_fn=compose2, inverse_fn=compose2_inv, identity_coords=np.zeros(5),
    )
    register_chart(("Gbar5", "canonical_second", (1, 2, 3, 4, 5)), chart2)


# --- Euclidean group SE(2) ---------------------------------------------------

def _build_se2():
    alg = catalog_algebra("se2")
    A1 = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    A2 = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
    A3 = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0]])
    rep = (A1, A2, A3)

    def compose2(g, h):
        th, a, b = g
        thp, ap, bp = h
        ct, st = math.cos(thp), math.sin(thp)
        return np.array([th + thp, ap + a * ct + b * st, bp - a * st + b * ct])

    def inverse2(g):
        th, a, b = g
        ct, st = math.cos(th), math.sin(th)
        return np.array([-th, -(a * ct - b * st), -(a * st + b * ct)])

    def adjoint(g):
        th, a, b = g
        ct, st = math.cos(th), math.sin(th)
        return np.array([
            [1.0, 0.0, 0.0],
            [b * ct + a * st, ct, -st],
            [-a * ct + b * st, st, ct],
        ])

    def right_log(g, dg):
        th, a, b = g
        ct, st = math.cos(th), math.sin(th)
        return np.array([dg[0], dg[1] * ct - dg[2] * st, dg[1] * st + dg[2] * ct])

    def left_log(g, dg):
        th, a, b = g
        return np.array([dg[0], dg[1] - b * dg[0], dg[2] + a * dg[0]])

    def wrap(c):
        out = c.copy()
        out[0] = _wrap_angle(out[0])
        return out

    chart2 = GroupChart(
        "SE2", "canonical_second", 3, alg, ordering=(1, 2, 3), algebra_rep=rep,
        compose_fn=compose2, inverse_fn=inverse2, identity_coords=np.zeros(3),
        adjoint_fn=adjoint, right_log_fn=right_log, left_log_fn=left_log,
        wrap_fn=wrap,
    )
    register_chart(("SE2", "canonical_second", (1, 2, 3)), chart2)

    def se2_constraint(c):
        M = c.reshape(3, 3)
        R = M[:2, :2]
        err = np.max(np.abs(R.T @ R - np.eye(2)))
        err = max(err, np.max(np.abs(M[2] - np.array([0.0, 0.0, 1.0]))))
        return err

    _mk_matrix_chart("SE2", alg, rep, constraint=se2_constraint)

    def to_matrix(g):
        el = GroupElement(chart2, g)
        return matrix_rep(el).reshape(-1)

    def from_matrix(c):
        M = c.reshape(3, 3)
        th = math.atan2(M[1, 0], M[0, 0])
        # undo M = expm(th A1) expm(a A2) expm(b A3) = R(th) @ T(a, b)
        T = np.linalg.inv(_expm_taylor(th * A1)) @ M
        return np.array([th, T[0, 2], T[1, 2]])

    register_conversion(("SE2", "canonical_second", (1, 2, 3)), ("SE2", "matrix", None), to_matrix)
    register_conversion(("SE2", "matrix", None), ("SE2", "canonical_second", (1, 2, 3)), from_matrix)


# --- the epsilon family: quaternion-like chart and linear 3x3 chart ----------

def Ceps(eps, x):
    if eps == 1:
        return np.cos(x)
    if eps == -1:
        return np.cosh(x)
    return np.ones_like(np.asarray(x, dtype=float)) if np.ndim(x) else 1.0


def Seps(eps, x):
    if eps == 1:
        return np.sin(x)
    if eps == -1:
        return np.sinh(x)
    return np.asarray(x, dtype=float) if np.ndim(x) else float(x)


def _geps_rep4(eps):
    a1 = 0.5 * np.array([
        [0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]], dtype=float)
    a2 = 0.5 * np.array([
        [0, 0, -eps, 0], [0, 0, 0, eps], [1, 0, 0, 0], [0, -1, 0, 0]], dtype=float)
    a3 = 0.5 * np.array([
        [0, 0, 0, -eps], [0, 0, -eps, 0], [0, 1, 0, 0], [1, 0, 0, 0]], dtype=float)
    return a1, a2, a3


def _geps_rep3(eps):
    a1 = np.array([[0, 1, 0], [-1, 0, 0], [0, 0, 0]], dtype=float)
    a2 = np.array([[0, 0, -1], [0, 0, 0], [eps, 0, 0]], dtype=float)
    a3 = np.array([[0, 0, 0], [0, 0, 1], [0, -eps, 0]], dtype=float)
    return a1, a2, a3


def _build_geps(eps):
    alg = catalog_algebra("g_eps", eps=eps)
    name = f"Geps({eps:+d})"

    def compose_q(g, h):
        a, b, c, d = g
        ap, bp, cp, dp = h
        return np.array([
            a * ap - b * bp - eps * (c * cp + d * dp),
            b * ap + a * bp - eps * (d * cp - c * dp),
            c * ap + d * bp + a * cp - b * dp,
            d * ap - c * bp + b * cp + a * dp,
        ])

    def inverse_q(g):
        return np.array([g[0], -g[1], -g[2], -g[3]])

    def constraint_q(g):
        a, b, c, d = g
        return abs(a * a + b * b + eps * (c * c + d * d) - 1.0)

    def adjoint_q(g):
        a, b, c, d = g
        return np.array([
            [a * a + b * b - eps * (c * c + d * d), 2 * eps * (b * c - a * d), 2 * eps * (a * c + b * d)],
            [2 * (b * c + a * d), a * a - b * b + eps * (c * c - d * d), 2 * (eps * c * d - a * b)],
            [2 * (b * d - a * c), 2 * (a * b + eps * c * d), a * a - b * b - eps * (c * c - d * d)],
        ])

    def right_log_q(g, dg):
        a, b, c, d = g
        da, db, dc, dd = dg
        return 2.0 * np.array([
            a * db - b * da + eps * (c * dd - d * dc),
            a * dc - c * da + d * db - b * dd,
            a * dd - d * da + b * dc - c * db,
        ])

    def exp_q(index, s):
        half = 0.5 * s
        if index == 0:
            return np.array([math.cos(half), math.sin(half), 0.0, 0.0])
        if index == 1:
            return np.array([float(Ceps(eps, half)), 0.0, float(Seps(eps, half)), 0.0])
        return np.array([float(Ceps(eps, half)), 0.0, 0.0, float(Seps(eps, half))])

    def q_to_mat4(g):
        a, b, c, d = g
        return np.array([
            [a, -b, -eps * c, -eps * d],
            [b, a, -eps * d, eps * c],
            [c, d, a, -b],
            [d, -c, b, a],
        ])

    chart_q = GroupChart(
        name, "quaternion", 4, alg,
        algebra_rep=_geps_rep4(eps),
        compose_fn=compose_q, inverse_fn=inverse_q,
        identity_coords=np.array([1.0, 0.0, 0.0, 0.0]),
        adjoint_fn=adjoint_q, constraint_fn=constraint_q,
        right_log_fn=right_log_q, exp_fn=exp_q,
        to_matrix_fn=q_to_mat4,
    )
    register_chart((name, "quaternion", None), chart_q)

    _mk_matrix_chart(name, alg, _geps_rep3(eps))
    _mk_matrix_chart(name + "-cover", alg, _geps_rep4(eps), constraint=None)

    register_conversion(
        (name, "quaternion", None), (name + "-cover", "matrix", None),
        lambda g: q_to_mat4(g).reshape(-1))
    register_conversion(
        (name + "-cover", "matrix", None), (name, "quaternion", None),
        lambda cds: cds.reshape(4, 4)[:, 0].copy())


# --- SO(3), SU(2), SE(3) -----------------------------------------------------

def _so3_rep():
    a1 = np.array([[0, 1, 0], [-1, 0, 0], [0, 0, 0]], dtype=float)
    a2 = np.array([[0, 0, -1], [0, 0, 0], [1, 0, 0]], dtype=float)
    a3 = np.array([[0, 0, 0], [0, 0, 1], [0, -1, 0]], dtype=float)
    return a1, a2, a3


def _build_so3():
    alg = catalog_algebra("so3")

    def constraint(c):
        M = c.reshape(3, 3)
        return float(np.max(np.abs(M.T @ M - np.eye(3))))

    _mk_matrix_chart("SO3", alg, _so3_rep(), constraint=constraint)


def _se3_rep():
    z = np.zeros((4, 4))
    a1 = z.copy(); a1[0, 1] = 1.0; a1[1, 0] = -1.0
    a2 = z.copy(); a2[0, 2] = -1.0; a2[2, 0] = 1.0
    a3 = z.copy(); a3[1, 2] = 1.0; a3[2, 1] = -1.0
    a4 = z.copy(); a4[0, 3] = -1.0
    a5 = z.copy(); a5[1, 3] = -1.0
    a6 = z.copy(); a6[2, 3] = -1.0
    return a1, a2, a3, a4, a5, a6


def _build_se3():
    alg = catalog_algebra("se3")

    def constraint(c):
        M = c.reshape(4, 4)
        A = M[:3, :3]
        err = float(np.max(np.abs(A.T @ A - np.eye(3))))
        return max(err, float(np.max(np.abs(M[3] - np.array([0, 0, 0, 1.0])))))

    _mk_matrix_chart("SE3", alg, _se3_rep(), constraint=constraint)


# --- SL(2,R) and SL(3,R) ------------------------------------------------------

def sl2_basis():
    a1 = np.array([[0.0, -1.0], [0.0, 0.0]])
    a2 = 0.5 * np.array([[-1.0, 0.0], [0.0, 1.0]])
    a3 = np.array([[0.0, 0.0], [1.0, 0.0]])
    return a1, a2, a3


def sl3_basis():
    a1 = np.zeros((3, 3)); a1[0, 1] = -1.0
    a2 = 0.5 * np.diag([-1.0, 1.0, 0.0])
    a3 = np.zeros((3, 3)); a3[1, 0] = 1.0
    a4 = np.diag([-1.0, -1.0, 2.0]) / 6.0
    a5 = np.zeros((3, 3)); a5[0, 2] = -1.0
    a6 = np.zeros((3, 3)); a6[1, 2] = -1.0
    a7 = np.zeros((3, 3)); a7[2, 0] = 1.0
    a8 = np.zeros((3, 3)); a8[2, 1] = 1.0
    return a1, a2, a3, a4, a5, a6, a7, a8


def _build_sl2():
    alg = catalog_algebra("sl2")

    def constraint(c):
        return abs(float(np.linalg.det(c.reshape(2, 2))) - 1.0)

    _mk_matrix_chart("SL2", alg, sl2_basis(), constraint=constraint)


def _build_sl3():
    alg = catalog_algebra("sl3")

    def constraint(c):
        return abs(float(np.linalg.det(c.reshape(3, 3))) - 1.0)

    _mk_matrix_chart("SL3", alg, sl3_basis(), constraint=constraint)


# --- affine group of the line -------------------------------------------------

def _build_affine():
    alg = catalog_algebra("aff")
    A1 = np.array([[0.0, 1.0], [0.0, 0.0]])
    A2 = np.array([[-1.0, 0.0], [0.0, 0.0]])

    def compose2(g, h):
        a, b = g
        ap, bp = h
        return np.array([a + ap * math.exp(-b), b + bp])

    def inverse2(g):
        a, b = g
        return np.array([-a * math.exp(b), -b])

    chart = GroupChart(
        "Aff", "canonical_second", 2, alg, ordering=(1, 2), algebra_rep=(A1, A2),
        compose_fn=compose2, inverse_fn=inverse2, identity_coords=np.zeros(2),
        adjoint_fn=lambda g: np.array([[math.exp(-g[1]), g[0]], [0.0, 1.0]]),
        right_log_fn=lambda g, dg: np.array([dg[0] + g[0] * dg[1], dg[1]]),
        left_log_fn=lambda g, dg: np.array([dg[0] * math.exp(g[1]), dg[1]]),
    )
    register_chart(("Aff", "canonical_second", (1, 2)), chart)
    _mk_matrix_chart("Aff", alg, (A1, A2))


_build_h3()
_build_g4()
_build_g5()
_build_g7()
_build_g8()
_build_gbar4()
_build_gbar5()
_build_se2()
for _e in (-1, 0, 1):
    _build_geps(_e)
_build_so3()
_build_se3()
_build_sl2()
_build_sl3()
_build_affine()
