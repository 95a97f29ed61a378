"""Subgroup reduction: given a particular solution on a homogeneous space
G/H and a lift g1(t), the right-invariant system factorizes as
g(t) = g1(t) h(t), where h obeys a right-invariant system on H with
coefficients

    R_{h^{-1}*h}(dh/dt) = -Ad(g1^{-1}) (sum_a b_a a_a) - L_{g1^{-1}*g1}(dg1/dt)

The right-hand side must lie in the subalgebra; its span coordinates are
the reduced coefficients c_mu(t), written so that the reduced equation is
R(dh/dt) = -sum_mu c_mu(t) h_mu.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import span_is_subalgebra
from .errors import LieSysError, UnknownNameError
from .groups import (
    GroupChart,
    compose,
    get_chart,
    group_adjoint,
    inverse,
    left_log_derivative,
)
from .numerics import TimeGrid, Trajectory, integrate_rk4, rk4_step
from .weinorman import ControlSignal, GroupCurve


@dataclass
class ReductionSetup:
    """Inputs of the reduction algorithm.

    span holds algebra vectors spanning the subalgebra h; lift is the
    chart-tagged curve g1(t) projecting onto the homogeneous solution.
    """

    chart: GroupChart
    span: list
    lift: GroupCurve
    controls: ControlSignal
    grid: TimeGrid

    def __post_init__(self):
        flags = span_is_subalgebra(self.chart.algebra, self.span)
        if not flags["subalgebra"]:
            raise LieSysError("the given span is not a subalgebra")
        self.span_matrix = np.column_stack(
            [np.asarray(v, dtype=float) for v in self.span])


def reduce_to_subgroup(setup: ReductionSetup, tol: float = 1e-5):
    """Reduced coefficients c_mu(t) on the grid nodes.

    Verifies nodewise that the right-hand side lies in span(h); the
    off-span tolerance scales with the control magnitude.  Returns
    (coefficients, report).
    """
    nodes = setup.grid.nodes
    dt = setup.grid.uniform_dt
    S = setup.span_matrix
    Spinv = np.linalg.pinv(S)
    r, s = S.shape
    coeffs = np.empty((len(nodes), s))
    worst = 0.0
    worst_t = nodes[0]
    bmax = 1.0
    for k, t in enumerate(nodes):
        g1 = setup.lift(t)
        bvec = setup.controls(t)
        bmax = max(bmax, float(np.max(np.abs(bvec))))
        xi = -group_adjoint(inverse(g1)) @ bvec - left_log_derivative(
            setup.lift, t, h=dt, order=4)
        c = -(Spinv @ xi)
        resid = float(np.max(np.abs(xi + S @ c)))
        if resid > worst:
            worst, worst_t = resid, t
        coeffs[k] = c
    if worst > tol * bmax:
        raise LieSysError(
            f"lift does not project to a solution: off-span residual "
            f"{worst:.3g} at t={worst_t}")
    return coeffs, {"off_span_residual": worst, "at": worst_t}


def _tangent_coords(chart: GroupChart, xi):
    """Chart-coordinate direction of d/ds exp(s xi) at the identity."""
    xi = np.asarray(xi, dtype=float)
    if chart.chart_kind == "matrix":
        A = sum(v * M for v, M in zip(xi, chart.algebra_rep))
        return A.reshape(-1)
    if chart.chart_kind == "quaternion":
        return np.concatenate([[0.0], 0.5 * xi])
    if chart.chart_kind == "canonical_second":
        out = np.zeros(chart.coord_dim)
        for pos, idx in enumerate(chart.ordering):
            out[pos] = xi[idx - 1]
        return out
    return xi.copy()


def right_invariant_derivative(chart: GroupChart, xi, hcoords):
    """d/ds [exp(s xi) h] at s = 0, in chart coordinates.

    Matrix and quaternion composition laws are bilinear, so the derivative
    is the law applied to the tangent coordinates; canonical laws use a
    central difference in s.
    """
    T = _tangent_coords(chart, xi)
    if chart.chart_kind in ("matrix", "quaternion"):
        return chart.compose_fn(T, hcoords)
    s = 1e-6
    plus = chart.compose_fn(chart.identity_coords + s * T, hcoords)
    minus = chart.compose_fn(chart.identity_coords - s * T, hcoords)
    return (plus - minus) / (2.0 * s)


def solve_on_subgroup(setup: ReductionSetup, coeffs: np.ndarray) -> GroupCurve:
    """Integrate R_{h^{-1}*h}(dh/dt) = -sum_mu c_mu(t) h_mu with h(t0) = e.

    The reduced coefficients are given at the grid nodes; RK4 midpoint
    stages interpolate them linearly.
    """
    chart = setup.chart
    nodes = setup.grid.nodes
    S = setup.span_matrix

    def xi_of(t):
        c = np.array([np.interp(t, nodes, coeffs[:, j]) for j in range(S.shape[1])])
        return -(S @ c)

    out = np.empty((len(nodes), chart.coord_dim))
    h = chart.identity_coords.copy()
    out[0] = h

    def f(t, hc):
        return right_invariant_derivative(chart, xi_of(t), hc)

    for k in range(len(nodes) - 1):
        h = rk4_step(f, nodes[k], h, nodes[k + 1] - nodes[k])
        out[k + 1] = h
    return GroupCurve(chart, setup.grid, out)


def reconstruct_full(g1: GroupCurve, h: GroupCurve) -> GroupCurve:
    """Nodewise product g(t) = g1(t) h(t)."""
    if g1.chart is not h.chart:
        raise LieSysError("lift and subgroup curves must share a chart")
    coords = np.empty_like(g1.coords)
    for k in range(coords.shape[0]):
        coords[k] = compose(g1.at_node(k), h.at_node(k)).coords
    return GroupCurve(g1.chart, g1.grid, coords)


def run_reduction(setup: ReductionSetup):
    """Full pipeline: reduce, solve on the subgroup, reconstruct."""
    coeffs, report = reduce_to_subgroup(setup)
    h = solve_on_subgroup(setup, coeffs)
    g = reconstruct_full(setup.lift, h)
    return {"coefficients": coeffs, "subgroup_curve": h,
            "reconstruction": g, **report}


def run_catalog_reduction(case: "ReductionCase", b: ControlSignal,
                          grid: TimeGrid, refine: int = 2):
    """Drive a cataloged reduction end to end.

    The homogeneous solve and reduction run on a `refine`-times finer grid
    (an accuracy tier for the finite-difference log-derivatives); homogeneous
    solution, coefficients, subgroup curve and reconstruction are reported
    restricted to the requested grid.
    """
    fine = TimeGrid.uniform(grid.t0, grid.t1, grid.n_steps * refine)
    setup, hom_fine = case.setup(b, fine)
    out = run_reduction(setup)
    step = refine
    coarse_hom = Trajectory(grid, hom_fine.states[::step], meta=hom_fine.meta)
    coeffs = out["coefficients"][::step]
    h = GroupCurve(case.chart, grid, out["subgroup_curve"].coords[::step])
    g = GroupCurve(case.chart, grid, out["reconstruction"].coords[::step])
    return {"homogeneous": coarse_hom, "coefficients": coeffs,
            "subgroup_curve": h, "reconstruction": g,
            "off_span_residual": out["off_span_residual"]}


# ---------------------------------------------------------------------------
# the catalog of named reductions
# ---------------------------------------------------------------------------


@dataclass
class ReductionCase:
    """A cataloged reduction: homogeneous system, lift shape, span, and the
    closed-form reduced coefficients used as test fixtures."""

    name: str
    chart: GroupChart
    span_indices: tuple              # 1-based algebra indices spanning h
    used_channels: tuple
    hom_dim: int
    hom_rhs: object                  # (b) -> f(t, y)
    hom_x0: object
    lift_coords: object              # (y) -> chart coords
    expected_coeffs: object          # (b, t, y) -> c values (len s)

    def span_vectors(self):
        r = self.chart.algebra.dim
        out = []
        for idx in self.span_indices:
            v = np.zeros(r)
            v[idx - 1] = 1.0
            out.append(v)
        return out

    def pad_controls(self, b: ControlSignal) -> ControlSignal:
        r = self.chart.algebra.dim
        if b.dim == r:
            return b
        return b.pad(r, [i - 1 for i in self.used_channels])

    def solve_homogeneous(self, b: ControlSignal, grid: TimeGrid) -> Trajectory:
        bp = self.pad_controls(b)
        return integrate_rk4(self.hom_rhs(bp), self.hom_x0, grid,
                             meta=f"{self.name} homogeneous")

    def make_lift(self, hom: Trajectory) -> GroupCurve:
        coords = np.stack([self.lift_coords(y) for y in hom.states])
        return GroupCurve(self.chart, hom.grid, coords)

    def setup(self, b: ControlSignal, grid: TimeGrid) -> ReductionSetup:
        hom = self.solve_homogeneous(b, grid)
        return ReductionSetup(self.chart, self.span_vectors(),
                              self.make_lift(hom), self.pad_controls(b), grid), hom

    def fixture_coeffs(self, b: ControlSignal, hom: Trajectory) -> np.ndarray:
        bp = self.pad_controls(b)
        rows = [self.expected_coeffs(bp(t), t, y)
                for t, y in zip(hom.grid.nodes, hom.states)]
        return np.asarray(rows)


_RED: dict = {}


def _register(name, builder):
    _RED[name] = builder


def catalog_reduction(name: str, **params) -> ReductionCase:
    if name not in _RED:
        raise UnknownNameError(f"unknown reduction {name!r}")
    return _RED[name](**params)


def list_reductions():
    return sorted(_RED)


# --- H(3): three subgroup choices (first-kind coordinates) -------------------


def _h3_case(which):
    chart = get_chart("H3", "canonical_first")
    if which == 1:
        return ReductionCase(
            "h3/a1", chart, (1,), (1, 2), 2,
            hom_rhs=lambda b: (lambda t, y: np.array([-b(t)[1], -b(t)[0] * y[0]])),
            hom_x0=np.zeros(2),
            lift_coords=lambda y: np.array([0.0, y[0], y[1]]),
            expected_coeffs=lambda bv, t, y: np.array([bv[0]]),
        )
    if which == 2:
        return ReductionCase(
            "h3/a2", chart, (2,), (1, 2), 2,
            hom_rhs=lambda b: (lambda t, y: np.array([-b(t)[0], b(t)[1] * y[0]])),
            hom_x0=np.zeros(2),
            lift_coords=lambda y: np.array([y[0], 0.0, y[1]]),
            expected_coeffs=lambda bv, t, y: np.array([bv[1]]),
        )
    return ReductionCase(
        "h3/a3", chart, (3,), (1, 2), 2,
        hom_rhs=lambda b: (lambda t, y: np.array([-b(t)[0], -b(t)[1]])),
        hom_x0=np.zeros(2),
        lift_coords=lambda y: np.array([y[0], y[1], 0.0]),
        expected_coeffs=lambda bv, t, y: np.array(
            [0.5 * (bv[0] * y[1] - bv[1] * y[0])]),
    )


for _i in (1, 2, 3):
    _register(f"h3/a{_i}", lambda which=_i: _h3_case(which))


# --- SE(2): four subgroup choices --------------------------------------------


def _se2_case(which):
    chart = get_chart("SE2", "canonical_second", (1, 2, 3))
    if which == "a1":
        return ReductionCase(
            "se2/a1", chart, (1,), (1, 2), 2,
            hom_rhs=lambda b: (lambda t, z: np.array(
                [-b(t)[1] + b(t)[0] * z[1], -b(t)[0] * z[0]])),
            hom_x0=np.zeros(2),
            lift_coords=lambda z: np.array([0.0, z[0], z[1]]),
            expected_coeffs=lambda bv, t, z: np.array([bv[0]]),
        )
    if which == "a2":
        return ReductionCase(
            "se2/a2", chart, (2,), (1, 2), 2,
            hom_rhs=lambda b: (lambda t, z: np.array(
                [-b(t)[0], b(t)[1] * np.sin(z[0])])),
            hom_x0=np.zeros(2),
            lift_coords=lambda z: np.array([z[0], 0.0, z[1]]),
            expected_coeffs=lambda bv, t, z: np.array([bv[1] * np.cos(z[0])]),
        )
    if which == "a3":
        return ReductionCase(
            "se2/a3", chart, (3,), (1, 2), 2,
            hom_rhs=lambda b: (lambda t, z: np.array(
                [-b(t)[0], -b(t)[1] * np.cos(z[0])])),
            hom_x0=np.zeros(2),
            lift_coords=lambda z: np.array([z[0], z[1], 0.0]),
            expected_coeffs=lambda bv, t, z: np.array([-bv[1] * np.sin(z[0])]),
        )
    return ReductionCase(
        "se2/a2a3", chart, (2, 3), (1, 2), 1,
        hom_rhs=lambda b: (lambda t, z: np.array([-b(t)[0]])),
        hom_x0=np.zeros(1),
        lift_coords=lambda z: np.array([z[0], 0.0, 0.0]),
        expected_coeffs=lambda bv, t, z: np.array(
            [bv[1] * np.cos(z[0]), -bv[1] * np.sin(z[0])]),
    )


for _w in ("a1", "a2", "a3", "a2a3"):
    _register(f"se2/{_w}", lambda which=_w: _se2_case(which))


# --- SL(2,R): the two affine subgroups ---------------------------------------


def _sl2_case(which):
    chart = get_chart("SL2", "matrix")
    if which == "a2a3":
        return ReductionCase(
            "sl2/a2a3", chart, (2, 3), (1, 2, 3), 1,
            hom_rhs=lambda b: (lambda t, y: np.array(
                [b(t)[0] + b(t)[1] * y[0] + b(t)[2] * y[0] ** 2])),
            hom_x0=np.zeros(1),
            lift_coords=lambda y: np.array([1.0, y[0], 0.0, 1.0]),
            expected_coeffs=lambda bv, t, y: np.array(
                [bv[1] + 2.0 * bv[2] * y[0], bv[2]]),
        )
    # which == "a1a2": homogeneous coordinate w = 1/y with w(0) = 0
    return ReductionCase(
        "sl2/a1a2", chart, (1, 2), (1, 2, 3), 1,
        hom_rhs=lambda b: (lambda t, w: np.array(
            [-b(t)[2] - b(t)[1] * w[0] - b(t)[0] * w[0] ** 2])),
        hom_x0=np.zeros(1),
        lift_coords=lambda w: np.array([1.0, 0.0, w[0], 1.0]),
        expected_coeffs=lambda bv, t, w: np.array(
            [bv[0], bv[1] + 2.0 * bv[0] * w[0]]),
    )


_register("sl2/a2a3", lambda: _sl2_case("a2a3"))
_register("sl2/a1a2", lambda: _sl2_case("a1a2"))


# --- nilpotent towers: quotient by the center / Abelian ideals ---------------


def _h3_hom_rhs(b):
    return lambda t, y: np.array([
        -b(t)[0], -b(t)[1], 0.5 * (b(t)[1] * y[0] - b(t)[0] * y[1])])


def _g5_center():
    chart = get_chart("G5", "canonical_first")
    return ReductionCase(
        "g5/center", chart, (4, 5), (1, 2), 3,
        hom_rhs=_h3_hom_rhs, hom_x0=np.zeros(3),
        lift_coords=lambda y: np.array([y[0], y[1], y[2], 0.0, 0.0]),
        expected_coeffs=lambda bv, t, y: np.array([
            -(0.5 * bv[0] * (y[0] * y[1] / 6.0 - y[2]) - bv[1] * y[0] ** 2 / 12.0),
            -(bv[0] * y[1] ** 2 / 12.0
              - 0.5 * bv[1] * (y[0] * y[1] / 6.0 + y[2])),
        ]),
    )


_register("g5/center", _g5_center)


def _g7_ideal():
    chart = get_chart("G7", "canonical_first")
    return ReductionCase(
        "g7/ideal", chart, (4, 5, 6, 7), (1, 2), 3,
        hom_rhs=_h3_hom_rhs, hom_x0=np.zeros(3),
        lift_coords=lambda y: np.array([y[0], y[1], y[2], 0, 0, 0, 0], float),
        expected_coeffs=lambda bv, t, y: np.array([
            -(0.5 * bv[0] * (y[0] * y[1] / 6.0 - y[2]) - bv[1] * y[0] ** 2 / 12.0),
            -(bv[0] * y[1] ** 2 / 12.0
              - 0.5 * bv[1] * (y[0] * y[1] / 6.0 + y[2])),
            y[0] * (bv[0] * (y[0] * y[1] - 8.0 * y[2]) - bv[1] * y[0] ** 2) / 24.0,
            y[1] * (bv[0] * y[1] ** 2 - bv[1] * (y[0] * y[1] + 8.0 * y[2])) / 24.0,
        ]),
    )


_register("g7/ideal", _g7_ideal)


def _g8_ideal():
    chart = get_chart("G8", "canonical_first")
    return ReductionCase(
        "g8/ideal", chart, (4, 5, 6, 7, 8), (1, 2), 3,
        hom_rhs=_h3_hom_rhs, hom_x0=np.zeros(3),
        lift_coords=lambda y: np.array([y[0], y[1], y[2], 0, 0, 0, 0, 0], float),
        expected_coeffs=lambda bv, t, y: np.array([
            -(0.5 * bv[0] * (y[0] * y[1] / 6.0 - y[2]) - bv[1] * y[0] ** 2 / 12.0),
            -(bv[0] * y[1] ** 2 / 12.0
              - 0.5 * bv[1] * (y[0] * y[1] / 6.0 + y[2])),
            y[0] * (bv[0] * (y[0] * y[1] - 8.0 * y[2]) - bv[1] * y[0] ** 2) / 24.0,
            (bv[0] * y[1] * (y[0] * y[1] - 4.0 * y[2])
             - bv[1] * y[0] * (y[0] * y[1] + 4.0 * y[2])) / 12.0,
            y[1] * (bv[0] * y[1] ** 2 - bv[1] * (y[0] * y[1] + 8.0 * y[2])) / 24.0,
        ]),
    )


_register("g8/ideal", _g8_ideal)


def _gbar4_center():
    chart = get_chart("Gbar4", "canonical_first")
    return ReductionCase(
        "gbar4/center", chart, (4,), (1, 2), 3,
        hom_rhs=_h3_hom_rhs, hom_x0=np.zeros(3),
        lift_coords=lambda y: np.array([y[0], y[1], y[2], 0.0]),
        expected_coeffs=lambda bv, t, y: np.array([
            -(0.5 * bv[0] * (y[0] * y[1] / 6.0 - y[2]) - bv[1] * y[0] ** 2 / 12.0)]),
    )


_register("gbar4/center", _gbar4_center)


def _gbar5_ideal():
    chart = get_chart("Gbar5", "canonical_first")
    return ReductionCase(
        "gbar5/ideal", chart, (4, 5), (1, 2), 3,
        hom_rhs=_h3_hom_rhs, hom_x0=np.zeros(3),
        lift_coords=lambda y: np.array([y[0], y[1], y[2], 0.0, 0.0]),
        expected_coeffs=lambda bv, t, y: np.array([
            -(0.5 * bv[0] * (y[0] * y[1] / 6.0 - y[2]) - bv[1] * y[0] ** 2 / 12.0),
            -(bv[0] * y[0] * (8.0 * y[2] - y[0] * y[1]) / 24.0
              + bv[1] * y[0] ** 3 / 24.0),
        ]),
    )


_register("gbar5/ideal", _gbar5_ideal)


# --- the epsilon family: reduction by the compact generator ------------------


def _geps_case(eps):
    chart = get_chart("Geps", "quaternion", eps=eps)

    def hom_rhs(b):
        def f(t, z):
            b1, b2, b3 = b(t)[:3]
            z1, z2 = z
            return np.array([
                b1 * z2 - 0.5 * b2 * (1.0 + eps * (z1**2 - z2**2)) - b3 * eps * z1 * z2,
                -b1 * z1 - b2 * eps * z1 * z2 - 0.5 * b3 * (1.0 - eps * (z1**2 - z2**2)),
            ])
        return f

    def lift(z):
        z1, z2 = z
        n = 1.0 / np.sqrt(1.0 + eps * (z1**2 + z2**2))
        return np.array([n, 0.0, n * z1, n * z2])

    return ReductionCase(
        f"geps/a1", chart, (1,), (1, 2, 3), 2,
        hom_rhs=hom_rhs, hom_x0=np.zeros(2), lift_coords=lift,
        expected_coeffs=lambda bv, t, z: np.array(
            [bv[0] - eps * (bv[2] * z[0] - bv[1] * z[1])]),
    )


_register("su2/a1", lambda: _geps_case(1))
_register("geps/a1", lambda eps=1: _geps_case(eps))


# --- SE(3): both semidirect factors ------------------------------------------


def _se3_so3():
    # H = SO(3); homogeneous space R^3 with the affine action
    chart = get_chart("SE3", "matrix")

    def hom_rhs(b):
        def f(t, x):
            b1, b2, b3, b4, b5, b6 = b(t)
            return np.array([
                b4 + b2 * x[2] - b1 * x[1],
                b5 + b1 * x[0] - b3 * x[2],
                b6 + b3 * x[1] - b2 * x[0],
            ])
        return f

    def lift(x):
        M = np.eye(4)
        M[:3, 3] = x
        return M.reshape(-1)

    return ReductionCase(
        "se3/so3", chart, (1, 2, 3), (1, 2, 3, 4, 5, 6), 3,
        hom_rhs=hom_rhs, hom_x0=np.zeros(3), lift_coords=lift,
        expected_coeffs=lambda bv, t, x: np.array([bv[0], bv[1], bv[2]]),
    )


_register("se3/so3", _se3_so3)


def _se3_r3():
    # H = R^3 normal subgroup; homogeneous "solution" is the rotation curve,
    # integrated as a matrix ODE dA/dt = xi_hat A
    chart = get_chart("SE3", "matrix")
    so3rep = get_chart("SO3", "matrix").algebra_rep

    def hom_rhs(b):
        def f(t, a_flat):
            A = a_flat.reshape(3, 3)
            xi = -sum(bb * M for bb, M in zip(b(t)[:3], so3rep))
            return (xi @ A).reshape(-1)
        return f

    def lift(a_flat):
        M = np.eye(4)
        M[:3, :3] = a_flat.reshape(3, 3)
        return M.reshape(-1)

    def expected(bv, t, a_flat):
        # the translation generators carry a sign in the matrix basis, so
        # the reduced coefficients are +A^T (b4, b5, b6)
        A = a_flat.reshape(3, 3)
        return A.T @ bv[3:]

    return ReductionCase(
        "se3/r3", chart, (4, 5, 6), (1, 2, 3, 4, 5, 6), 9,
        hom_rhs=hom_rhs, hom_x0=np.eye(3).reshape(-1), lift_coords=lift,
        expected_coeffs=expected,
    )


_register("se3/r3", _se3_r3)
