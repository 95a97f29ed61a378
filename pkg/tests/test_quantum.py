import math

import numpy as np
import pytest

from liesys.errors import LieSysError, UnknownNameError
from liesys.numerics import TimeGrid, diff_samples
from liesys.quantum import (
    SuperpotentialFamily,
    eigen_residual,
    eigenfunction_fixture,
    eval_superpotential,
    example_51_eta_with_constant,
    example_51_norm_squared,
    example_fixture,
    f_plus,
    family_potentials,
    laguerre,
    partner_potentials,
    poschl_teller_pairs,
    shape_invariance_residual,
    solve_yz,
)

XPLUS = np.linspace(0.3, 6.0, 2001)
XZERO = np.linspace(0.3, 3.0, 2001)
XMINUS = np.linspace(0.05, 0.4, 2001)


def grid_for(a):
    return XMINUS if a < 0 else (XZERO if a == 0 else XPLUS)


# --- superpotential families -------------------------------------------------------


def test_tanh_limit_fixture():
    fam = SuperpotentialFamily("linear_in_m", a=4.0, b=0.0, A=0.3, B=np.inf, D=0.0)
    x = np.linspace(-1, 2, 301)
    W, R = eval_superpotential(fam, 1.0, x)
    assert np.allclose(W, 2.0 * np.tanh(2.0 * (x - 0.3)))
    assert R == 2.0 * 4.0 + 4.0


def test_type_d_fixture():
    # a = 0, B = 0: k1 = 0, k0 = b (x - A) + D
    fam = SuperpotentialFamily("linear_in_m", a=0.0, b=0.7, A=0.3, B=0.0, D=0.4)
    x = np.linspace(-1, 2, 301)
    W, _ = eval_superpotential(fam, 2.0, x)
    assert np.allclose(W, 0.7 * (x - 0.3) + 0.4)


def test_nparam_m_independent_when_constants_vanish():
    fam = SuperpotentialFamily("nparam_linear", cs=(0.0, 0.0), c0=0.6, A=0.1,
                               B=0.0, D=0.4)
    x = np.linspace(0.3, 2.0, 101)
    W1, _ = fam.W((1.0, 2.0), x)
    W2, _ = fam.W((3.0, -1.0), x)
    assert np.allclose(W1, W2)


def test_closed_form_derivatives(rng):
    h = 1e-6
    for kind in ("linear_in_m", "inverse_m"):
        for a in (1.7, 0.0, -1.3):
            fam = SuperpotentialFamily(kind, a=a, b=0.4, A=0.1, B=1.9, D=-0.3, q=1.2)
            x = grid_for(a)[::10]
            _, Wp = fam.W(2.0, x)
            Wfd = (fam.W(2.0, x + h)[0] - fam.W(2.0, x - h)[0]) / (2 * h)
            assert np.max(np.abs(Wp - Wfd)) < 1e-8


# --- partner potentials -------------------------------------------------------------


def test_partner_constant_superpotential():
    x = np.linspace(0, 1, 101)
    V, Vt = partner_potentials(np.full_like(x, 1.4), 0.3, x, W_prime=np.zeros_like(x))
    assert np.allclose(V, 1.4**2 + 0.3)
    assert np.allclose(Vt, V)


def test_partner_tanh_superpotential():
    c = 1.3
    x = np.linspace(-2, 2, 401)
    W = c * np.tanh(c * x)
    Wp = c * c / np.cosh(c * x) ** 2
    V, Vt = partner_potentials(W, 0.0, x, W_prime=Wp)
    assert np.allclose(V, c * c - 2 * c * c / np.cosh(c * x) ** 2)
    assert np.allclose(Vt, c * c * np.ones_like(x))


def test_partner_difference_is_two_wprime():
    fam = SuperpotentialFamily("linear_in_m", a=1.5, b=0.3, A=0.0, B=2.0, D=0.4)
    x = XPLUS
    W, Wp = fam.W(2.0, x)
    V, Vt = partner_potentials(W, 0.7, x, W_prime=Wp)
    assert np.max(np.abs((Vt - V) - 2 * Wp)) < 1e-8


def test_family_closed_potentials_match_table():
    # linear-in-m, positive class, against the displayed closed forms
    a, b, A, B, D, m = 1.7, 0.4, 0.1, 2.2, -0.6, 2.0
    c = math.sqrt(a)
    fam = SuperpotentialFamily("linear_in_m", a=a, b=b, A=A, B=B, D=D)
    x = XPLUS
    V, Vt = family_potentials(fam, m, x)
    from liesys.quantum import h_plus
    f, h = f_plus(x, A, B, c), h_plus(x, A, B, c)
    bm = b + m * a
    V_table = (bm**2 / a) * f**2 + (D / c) * (2 * bm + a) * f * h \
        + (D**2 - (B**2 - 1) * bm) * h**2
    Vt_table = (bm**2 / a) * f**2 + (D / c) * (2 * bm - a) * f * h \
        + (D**2 + (B**2 - 1) * bm) * h**2
    assert np.max(np.abs(V - V_table)) < 1e-9
    assert np.max(np.abs(Vt - Vt_table)) < 1e-9
    assert abs(fam.R(m) - (2 * bm + a)) < 1e-12


def test_family_inverse_m_potentials_match_table():
    a, A, B, q, m = 1.7, 0.1, 2.2, 1.3, 2.0
    c = math.sqrt(a)
    fam = SuperpotentialFamily("inverse_m", a=a, A=A, B=B, q=q)
    x = XPLUS
    V, Vt = family_potentials(fam, m, x)
    from liesys.quantum import h_plus
    f, h = f_plus(x, A, B, c), h_plus(x, A, B, c)
    V_table = q**2 / m**2 + m**2 * c**2 + 2 * q * c * f \
        - m * (m + 1) * c**2 * (B**2 - 1) * h**2
    Vt_table = q**2 / m**2 + m**2 * c**2 + 2 * q * c * f \
        - m * (m - 1) * c**2 * (B**2 - 1) * h**2
    assert np.max(np.abs(V - V_table)) < 1e-9
    assert np.max(np.abs(Vt - Vt_table)) < 1e-9


# --- shape invariance ----------------------------------------------------------------


def _draw_A(rng, sign):
    # negative classes keep A in [0, 0.1] so the trig poles stay past XMINUS
    return rng.uniform(0.0, 0.1) if sign < 0 else rng.uniform(-0.2, 0.2)


@pytest.mark.parametrize("kind", ["linear_in_m", "inverse_m"])
@pytest.mark.parametrize("a", [1.7, 0.0, -1.3])
def test_shape_invariance_families(kind, a, rng):
    x = grid_for(a)
    worst = 0.0
    for _ in range(50):
        fam = SuperpotentialFamily(
            kind, a=a, b=rng.uniform(-1, 1), A=_draw_A(rng, np.sign(a)),
            B=rng.uniform(1.2, 3.0), D=rng.uniform(-1, 1), q=rng.uniform(0.5, 2.0))
        m = rng.uniform(1.5, 3.5)
        worst = max(worst, shape_invariance_residual(fam, m, x))
    assert worst <= 1e-9


@pytest.mark.parametrize("n", [2, 3])
def test_shape_invariance_nparam(n, rng):
    worst = 0.0
    for _ in range(50):
        sign = rng.choice([-1.0, 1.0])
        cs = tuple(sign * rng.uniform(0.2, 1.0, n))
        fam = SuperpotentialFamily(
            "nparam_linear", cs=cs, c0=rng.uniform(-0.5, 0.5),
            A=_draw_A(rng, sign), B=rng.uniform(1.2, 3.0), D=rng.uniform(-1, 1))
        m = tuple(rng.uniform(1.5, 3.0, n))
        x = XMINUS if sign < 0 else XPLUS
        worst = max(worst, shape_invariance_residual(fam, m, x))
    assert worst <= 1e-9


def test_shape_invariance_sensitivity():
    fam = SuperpotentialFamily("linear_in_m", a=1.0, b=0.5, A=0.0, B=2.0, D=0.3)
    V, Vt = family_potentials(fam, 2.0, XPLUS)
    V1, _ = family_potentials(fam, 1.0, XPLUS)
    perturbed = np.max(np.abs(Vt - V1 - (fam.R(1.0) + 1e-3)))
    assert abs(perturbed - 1e-3) < 1e-10


# --- the y-z system ------------------------------------------------------------------


def test_solve_yz_tanh_branch():
    y, z = solve_yz(1.0, 0.7, 0.2, np.inf, 0.4)
    x = np.linspace(-1, 1, 401)
    assert np.allclose(y(x), np.tanh(x - 0.2))
    h = 1e-6
    zdot = (z(x + h) - z(x - h)) / (2 * h)
    assert np.max(np.abs(zdot + y(x) * z(x) - 0.7)) < 1e-8


def test_solve_yz_zero_branch():
    y, z = solve_yz(0.0, 0.7, 0.2, 0.0, 0.4)
    x = np.linspace(-1, 1, 201)
    assert np.all(y(x) == 0.0)
    assert np.allclose(z(x), 0.7 * (x - 0.2) + 0.4)


def test_solve_yz_trig_branch_vs_rk4():
    from liesys.numerics import integrate_rk4

    a, b, A, B, D = -1.0, 0.7, 0.0, 1.5, 0.4
    y, z = solve_yz(a, b, A, B, D)
    grid = TimeGrid.uniform(0.02, 0.6, 2000)
    x0 = np.array([y(0.02), z(0.02)])
    traj = integrate_rk4(
        lambda x, s: np.array([a - s[0] ** 2, b - s[0] * s[1]]), x0, grid)
    ref = np.column_stack([y(grid.nodes), z(grid.nodes)])
    assert np.max(np.abs(traj.states - ref)) < 1e-7


def test_yz_feeds_linear_family():
    # identifying k1 = y and k0 = z reproduces the linear-in-m family
    a, b, A, B, D = 1.3, 0.6, 0.1, 1.8, -0.2
    y, z = solve_yz(a, b, A, B, D)
    fam = SuperpotentialFamily("linear_in_m", a=a, b=b, A=A, B=B, D=D)
    x = XPLUS[::20]
    for m in (1.0, 2.0):
        W, _ = fam.W(m, x)
        assert np.max(np.abs(W - (z(x) + m * y(x)))) < 1e-10


# --- eigenfunction fixtures ----------------------------------------------------------


def test_oscillator_ground_state():
    x = np.linspace(0.05, 12.0, 6001)
    fix = eigenfunction_fixture("radial_oscillator", 0, 0.5, 2.0, x)
    assert fix.energy == 2.0 * (0.5 + 1.5)
    assert eigen_residual(fix) < 1e-3
    # shape: x^(l+1) exp(-b x^2 / 4) up to normalization
    ref = x ** 1.5 * np.exp(-x**2 / 2)
    ref /= np.sqrt(np.trapezoid(ref**2, x))
    assert np.max(np.abs(np.abs(fix.psi) - ref)) < 1e-10


def test_oscillator_shifted_energies():
    x = np.linspace(0.05, 12.0, 6001)
    for k in (0, 1, 2):
        fix = eigenfunction_fixture("radial_oscillator_shifted", k, -1.25, 2.0, x)
        assert fix.energy == 2.0 * 2.0 * k
        assert eigen_residual(fix) < 1e-3


def test_oscillator_first_excited_has_one_node():
    x = np.linspace(0.05, 12.0, 6001)
    fix = eigenfunction_fixture("radial_oscillator", 1, 0.5, 2.0, x)
    assert int(np.sum(np.diff(np.sign(fix.psi)) != 0)) == 1


def test_coulomb_fixture():
    x = np.linspace(0.05, 60.0, 8001)
    fix = eigenfunction_fixture("coulomb", 1, 1.0, -1.0, x)
    assert fix.energy == pytest.approx(-1.0 / 9.0)
    assert eigen_residual(fix) < 1e-3


def test_out_of_class_parameters_rejected():
    x = np.linspace(0.05, 10.0, 501)
    with pytest.raises(LieSysError):
        eigenfunction_fixture("radial_oscillator", 0, -2.0, 2.0, x)
    with pytest.raises(LieSysError):
        eigenfunction_fixture("coulomb", 1, -1.25, 1.0, x)  # only k = 0 normalizable
    with pytest.raises(UnknownNameError):
        eigenfunction_fixture("nope", 0, 0.0, 1.0, x)


def test_laguerre_recurrence_values():
    u = np.array([0.0, 0.5, 2.0])
    assert np.allclose(laguerre(0, 0.5, u), 1.0)
    assert np.allclose(laguerre(1, 0.5, u), 1.5 - u)
    # L2^a(u) = ((a+1)(a+2) - 2(a+2)u + u^2)/2 at a = 0.5
    ref = ((1.5 * 2.5) - 2 * 2.5 * u + u * u) / 2.0
    assert np.allclose(laguerre(2, 0.5, u), ref)


# --- worked examples -----------------------------------------------------------------


def test_example_51():
    x = np.linspace(0.02, 10.0, 5001)
    fix = example_fixture("5.1", -1.25, 2.0, x)
    assert eigen_residual(fix) < 1e-3
    assert np.all(fix.psi > 0)          # eta_0 nodeless
    # norm against the incomplete-Gamma closed form; eta^2 ~ x^(3/2) near 0,
    # so the quadrature grid must reach close to the origin
    xq = np.linspace(0.002, 12.0, 40001)
    eta = example_51_eta_with_constant(-1.25, 2.0, xq)
    numeric = float(np.trapezoid(eta**2, xq))
    assert abs(numeric - example_51_norm_squared(-1.25)) < 1e-4


def test_example_51_matches_darboux_wavefunction():
    from liesys.riccati import darboux_wavefunction

    l, b = -1.25, 2.0
    x = np.linspace(0.02, 10.0, 5001)
    grid = TimeGrid.from_nodes(x)
    fw = eigenfunction_fixture("radial_oscillator_shifted", 0, l + 1.0, b, x)
    fv = eigenfunction_fixture("radial_oscillator_shifted", 0, l, b, x)
    gam = lambda xx: 1.0 / np.sqrt(b - 2.0 * (l + 1.0) / xx**2)
    psi = darboux_wavefunction(fw.psi, fv.psi, gam, grid)
    psi /= np.sqrt(np.trapezoid(psi**2, x))
    ref = example_fixture("5.1", l, b, x).psi
    if np.sign(psi[len(x) // 2]) != np.sign(ref[len(x) // 2]):
        psi = -psi
    rel_l2 = np.sqrt(np.trapezoid((psi - ref) ** 2, x))
    assert rel_l2 < 1e-3


def test_example_52_recovers_scaled_coulomb():
    from liesys.riccati import darboux_wavefunction

    l, q, k = 1.5, -1.0, 1
    x = np.linspace(0.05, 80.0, 8001)
    grid = TimeGrid.from_nodes(x)
    fw = eigenfunction_fixture("coulomb", k, l - k, q, x)
    fv = eigenfunction_fixture("coulomb", 0, l, q, x)
    gam = lambda xx: xx / math.sqrt(k * (2 * l + 1 - k))
    psi = darboux_wavefunction(fw.psi, fv.psi, gam, grid)
    psi /= np.sqrt(np.trapezoid(psi**2, x))
    ref = example_fixture("5.2", l, q, x).psi
    if np.sign(psi[100]) != np.sign(ref[100]):
        psi = -psi
    assert np.sqrt(np.trapezoid((psi - ref) ** 2, x)) < 1e-3


def test_example_53():
    x = np.linspace(0.02, 30.0, 8001)
    fix = example_fixture("5.3", -1.25, -1.0, x)
    assert eigen_residual(fix) < 1e-3


def test_example_54_zero_location():
    l, q = -1.25, -1.0
    x = np.linspace(0.02, 30.0, 8001)
    fix = example_fixture("5.4", l, q, x)
    assert eigen_residual(fix) < 1e-3
    crossings = np.where(np.diff(np.sign(fix.psi)) != 0)[0]
    assert len(crossings) == 1
    x0 = (l + 1.0) * (l + 2.0) / q
    assert abs(x[crossings[0]] - x0) < 0.01


def test_example_out_of_range():
    x = np.linspace(0.02, 10.0, 501)
    with pytest.raises(LieSysError):
        example_fixture("5.1", -0.5, 2.0, x)


# --- factorization identity and the alternative pairs --------------------------------


def test_factorization_identity_grid_action():
    # H = A^dag A + eps as grid actions: A^dag A psi_k = (E_k - eps) psi_k
    l, b = 0.5, 2.0
    x = np.linspace(0.05, 12.0, 6001)
    dx = x[1] - x[0]
    W = -(l + 1.0) / x + b * x / 2.0      # annihilates the ground state
    eps = b * (l + 1.5)                   # the factorization energy E_0
    g = eigenfunction_fixture("radial_oscillator", 0, l, b, x)
    Apsi0 = diff_samples(g.psi, dx) + W * g.psi
    assert np.max(np.abs(Apsi0[300:5700])) / np.max(np.abs(g.psi)) < 1e-3
    fix = eigenfunction_fixture("radial_oscillator", 1, l, b, x)
    Apsi = diff_samples(fix.psi, dx) + W * fix.psi
    out = -diff_samples(Apsi, dx) + W * Apsi
    target = (fix.energy - eps) * fix.psi
    rel = np.max(np.abs(out - target)[300:5700]) / np.max(np.abs(fix.psi))
    assert rel < 1e-3


def test_poschl_teller_pairs():
    V, (W1, e1), (W2, e2) = poschl_teller_pairs(1.3, 2.2)
    x = np.linspace(-3, 3, 2001)
    h = 1e-6
    for W, e in ((W1, e1), (W2, e2)):
        Wp = (W(x + h) - W(x - h)) / (2 * h)
        assert np.max(np.abs(W(x) ** 2 - Wp - (V(x) - e))) < 1e-8
    assert e1 != e2
