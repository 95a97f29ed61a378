import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from liesys.algebra import (
    LieAlgebra,
    ad_matrix,
    algebra_from_triples,
    bracket,
    bracket_coords,
    catalog_algebra,
    catalog_names,
    exp_ad,
    jacobi_residual,
    load_algebra_file,
    span_is_subalgebra,
)
from liesys.errors import LieSysError, UnknownNameError


def all_catalog_algebras():
    out = []
    for name in catalog_names():
        if name == "gbar":
            out += [catalog_algebra(name, n=n) for n in (3, 4, 5, 6, 10)]
        elif name == "g_eps":
            out += [catalog_algebra(name, eps=e) for e in (-1, 0, 1)]
        else:
            out.append(catalog_algebra(name))
    return out


def test_h3_bracket_fixture():
    h3 = catalog_algebra("h3")
    assert np.allclose(bracket(h3.basis_vector(0), h3.basis_vector(1)).coeffs, [0, 0, 1])
    assert np.allclose(bracket(h3.basis_vector(0), h3.basis_vector(2)).coeffs, 0)
    assert np.allclose(bracket(h3.basis_vector(1), h3.basis_vector(2)).coeffs, 0)


def test_sl2_bracket_fixture():
    sl2 = catalog_algebra("sl2")
    assert np.allclose(bracket(sl2.basis_vector(1), sl2.basis_vector(2)).coeffs, [0, 0, 1])
    assert np.allclose(bracket(sl2.basis_vector(0), sl2.basis_vector(2)).coeffs, [0, 2, 0])


@given(st.lists(st.floats(-5, 5), min_size=3, max_size=3))
@settings(max_examples=50, deadline=None)
def test_bracket_antisymmetry_on_self(coeffs):
    h3 = catalog_algebra("h3")
    x = h3.vector(coeffs)
    assert np.all(bracket(x, x).coeffs == 0.0)


def test_jacobi_zero_for_h3_and_se3():
    assert jacobi_residual(catalog_algebra("h3")) == 0.0
    assert jacobi_residual(catalog_algebra("se3")) == 0.0


def test_jacobi_does_not_pin_constants():
    # doubling c^3_12 in h(3) stays Jacobi-consistent
    doubled = algebra_from_triples(3, [(1, 2, 3, 2.0)], "h3-doubled")
    assert jacobi_residual(doubled) == 0.0


def test_antisymmetry_enforced():
    c = np.zeros((2, 2, 2))
    c[0, 1, 0] = 1.0  # missing the antisymmetric counterpart
    with pytest.raises(LieSysError):
        LieAlgebra(2, c)


def test_ad_matrix_sl2_fixture():
    sl2 = catalog_algebra("sl2")
    expected = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 2.0], [0.0, 0.0, 0.0]])
    assert np.allclose(ad_matrix(sl2, sl2.basis_vector(0)), expected)


def test_ad_of_zero():
    g4 = catalog_algebra("g4")
    assert np.all(ad_matrix(g4, np.zeros(4)) == 0.0)


def test_ad_equals_bracket(rng):
    for alg in all_catalog_algebras():
        for _ in range(100):
            x = rng.standard_normal(alg.dim)
            y = rng.standard_normal(alg.dim)
            assert np.allclose(ad_matrix(alg, x) @ y, bracket_coords(alg, x, y),
                               atol=1e-12)


def test_exp_ad_h3_fixture():
    h3 = catalog_algebra("h3")
    v = 1.37
    M = exp_ad(h3, h3.basis_vector(1), -v)
    expected = np.eye(3)
    expected[2, 0] = v
    assert np.allclose(M, expected)


def test_exp_ad_zero_is_identity():
    for alg in all_catalog_algebras():
        assert np.allclose(exp_ad(alg, np.ones(alg.dim), 0.0), np.eye(alg.dim))


def _taylor_exp(M, terms):
    out = np.eye(M.shape[0])
    term = np.eye(M.shape[0])
    for k in range(1, terms):
        term = term @ M / k
        out = out + term
    return out


def test_exp_ad_sl2_taylor_oracle(rng):
    sl2 = catalog_algebra("sl2")
    for _ in range(20):
        a = rng.standard_normal(3)
        s = rng.uniform(-1, 1)
        a = a / max(1.0, abs(s) * np.max(np.abs(a)) / 2.0)  # keep ||s a|| <= 2
        ref = _taylor_exp(s * ad_matrix(sl2, a), 30)
        assert np.max(np.abs(exp_ad(sl2, a, s) - ref)) < 1e-12


def test_exp_ad_one_parameter_property(rng):
    for alg in all_catalog_algebras():
        a = rng.standard_normal(alg.dim)
        s, t = rng.uniform(-2, 2, 2)
        gap = exp_ad(alg, a, s) @ exp_ad(alg, a, t) - exp_ad(alg, a, s + t)
        assert np.max(np.abs(gap)) < 1e-10


def test_nilpotent_truncation_matches_long_taylor(rng):
    for name in ("h3", "g4", "g5", "g7", "g8"):
        alg = catalog_algebra(name)
        a = rng.standard_normal(alg.dim)
        ref = _taylor_exp(ad_matrix(alg, a), 40)
        assert np.max(np.abs(exp_ad(alg, a, 1.0) - ref)) < 1e-13


def test_ad_is_homomorphism(rng):
    for alg in all_catalog_algebras():
        for _ in range(100):
            x = rng.standard_normal(alg.dim)
            y = rng.standard_normal(alg.dim)
            lhs = ad_matrix(alg, bracket_coords(alg, x, y))
            rhs = ad_matrix(alg, x) @ ad_matrix(alg, y) - ad_matrix(alg, y) @ ad_matrix(alg, x)
            assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_catalog_gbar3_is_heisenberg():
    gb3 = catalog_algebra("gbar", n=3)
    h3 = catalog_algebra("h3")
    assert np.array_equal(gb3.structure, h3.structure)


def test_catalog_geps0_is_se2():
    g0 = catalog_algebra("g_eps", eps=0)
    se2 = catalog_algebra("se2")
    assert np.array_equal(g0.structure, se2.structure)
    assert np.all(bracket(g0.basis_vector(1), g0.basis_vector(2)).coeffs == 0.0)


def test_every_catalog_entry_passes_jacobi():
    for alg in all_catalog_algebras():
        assert jacobi_residual(alg) == 0.0
        assert np.max(np.abs(alg.structure + np.swapaxes(alg.structure, 0, 1))) == 0.0


def test_unknown_names():
    with pytest.raises(UnknownNameError):
        catalog_algebra("nope")
    with pytest.raises(UnknownNameError):
        catalog_algebra("gbar")          # missing family parameter
    with pytest.raises(UnknownNameError):
        catalog_algebra("g_eps", eps=2)  # invalid family parameter


def test_span_h3_center():
    h3 = catalog_algebra("h3")
    flags = span_is_subalgebra(h3, [h3.basis_vector(2)])
    assert flags["subalgebra"] and flags["ideal"]


def test_span_sl2_affine_not_ideal():
    sl2 = catalog_algebra("sl2")
    flags = span_is_subalgebra(sl2, [sl2.basis_vector(0), sl2.basis_vector(1)])
    assert flags["subalgebra"] and not flags["ideal"]


def test_span_g5_abelian_ideal():
    g5 = catalog_algebra("g5")
    flags = span_is_subalgebra(g5, [g5.basis_vector(3), g5.basis_vector(4)])
    assert flags["subalgebra"] and flags["ideal"]


def test_span_dependent_rejected():
    h3 = catalog_algebra("h3")
    with pytest.raises(LieSysError):
        span_is_subalgebra(h3, [h3.basis_vector(0), h3.basis_vector(0)])


def test_load_algebra_file_roundtrip(tmp_path):
    text = "# comment\nname demo\ndim 3\n1 2 3 1\n"
    path = tmp_path / "demo.alg"
    path.write_text(text)
    alg = load_algebra_file(str(path))
    assert alg.dim == 3
    assert np.array_equal(alg.structure, catalog_algebra("h3").structure)
