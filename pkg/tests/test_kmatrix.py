import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from snpcert import kmatrix as km
from snpcert.kmatrix import Kind, ParityError
from snpcert.rmatrix import RegimeParams, SampleGrid
from snpcert.tensor_core import identity, residual

TRIG = [("i", 1), ("ii", 1), ("ii", -1), ("iii", 1), ("iv", 1)]


def test_g_plus_g_minus():
    assert np.array_equal(km.g_plus(2, 0), identity(2))
    gm = km.g_minus(2)
    assert np.array_equal(gm, np.array([[0, 1], [-1, 0]]))
    assert np.array_equal(gm @ gm, -identity(2))
    with pytest.raises(ParityError):
        km.g_minus(3)


def test_congruence_examples():
    res = km.congruence_normal_form(np.diag([1.0, -1.0]), 1)
    assert np.allclose(res.U, np.eye(2)) and np.allclose(res.G, np.diag([1, -1])) and res.signature == (1, 1)
    res = km.congruence_normal_form(np.array([[0.0, 1.0], [1.0, 0.0]]), 1)
    assert res.residual(np.array([[0, 1], [1, 0]])) < 1e-14 and res.signature == (1, 1)
    k = np.array([[0.0, 2.0], [-2.0, 0.0]])
    res = km.congruence_normal_form(k, -1)
    assert res.residual(k) < 1e-14
    assert np.allclose(res.G, km.g_minus(2))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([(2, 1), (3, 1), (4, 1), (2, -1), (4, -1)]))
def test_congruence_random(seed, case):
    n, sign = case
    k = km.random_rational_k(n, sign, np.random.default_rng(seed))
    res = km.congruence_normal_form(k, sign)
    assert np.isrealobj(res.U)
    assert res.residual(k) < 1e-9
    if sign > 0:
        p, q = res.signature
        assert p + q == n and np.allclose(res.G, km.g_plus(p, q))
    else:
        assert np.allclose(res.G, km.g_minus(n))


def test_random_rational_k_symmetry():
    rng = np.random.default_rng(0)
    k = km.random_rational_k(3, 1, rng)
    assert np.array_equal(k, k.T) and abs(np.linalg.det(k)) >= 1e-6
    k = km.random_rational_k(4, -1, rng)
    assert np.array_equal(k, -k.T)
    with pytest.raises(ParityError):
        km.random_rational_k(3, -1, rng)


def test_special_cases():
    cases = dict(km.rational_special_cases(4))
    assert set(cases) == {"identity", "antidiagonal", "alternating"}
    alt = cases["alternating"]
    assert np.array_equal(alt, -alt.T) and np.allclose(alt @ alt, identity(4))
    assert "alternating" not in dict(km.rational_special_cases(3))


def test_trig_k_examples():
    p = RegimeParams.trigonometric(2, 0.37)
    for lam in (0.1, 0.5 + 0.3j):
        assert np.array_equal(km.trig_k("i", lam, p), identity(2))
    q = p.q
    expected = np.array([[0, q**0.5], [-(q**-0.5), 0]])
    assert residual(km.trig_k("iv", 0.7, p), expected) < 1e-15
    assert residual(km.trig_k("iv", -0.2j, p), expected) < 1e-15


def test_parity_errors():
    p = RegimeParams.trigonometric(3)
    for kind in ("iii", "iv"):
        with pytest.raises(ParityError):
            km.trig_k(kind, 0.1, p)


def test_reflection_rational_identity():
    p = RegimeParams.rational(2)
    ks = km.constant_k(identity(2))
    assert km.check_reflection(ks, p, 0.3 + 0.5j, -0.7 + 0.2j) < 1e-12


def test_reflection_rational_random_symmetric():
    p = RegimeParams.rational(3)
    ks = km.rational_k(km.random_rational_k(3, 1, np.random.default_rng(11)))
    for l1, l2 in SampleGrid.draw_pairs(p, 5, 11):
        assert km.check_reflection(ks, p, l1, l2) < 1e-10


@pytest.mark.parametrize("n,kind,sign", [(n, k, s) for n in (2, 3, 4) for k, s in TRIG
                                         if not (k in ("iii", "iv") and n % 2)])
def test_reflection_trig(n, kind, sign):
    p = RegimeParams.trigonometric(n)
    ks = km.trig_solution(kind, p, sign)
    for l1, l2 in SampleGrid.draw_pairs(p, 5, 3):
        assert km.check_reflection(ks, p, l1, l2) < 1e-9


def test_reflection_fails_for_nonsolution():
    p = RegimeParams.trigonometric(2)
    k = km.constant_k(np.array([[1.0, 0.3], [0.2, 2.0]]))
    assert km.check_reflection(k, p, 0.3 + 0.2j, -0.4 + 0.5j) > 1e-3


def test_gsym_examples():
    p = RegimeParams.trigonometric(2)
    s, r = km.gsym_decomposition_check("i", 0.4, p)
    assert r == 0.0 and s == 1
    assert km.gsym_decomposition_check("iv", 0.4 + 0.1j, p)[1] < 1e-12


@pytest.mark.parametrize("sign", [1, -1])
def test_gsym_kind_ii_readings(sign):
    # the printed diagonal of G+ for kind (ii) swaps 1/(1+q) and q/(1+q); only the swap-back decomposes
    p = RegimeParams.trigonometric(3)
    assert km.gsym_decomposition_check("ii", 0.3 + 0.2j, p, sign, "corrected")[1] < 1e-10
    assert km.gsym_decomposition_check("ii", 0.3 + 0.2j, p, sign, "printed")[1] > 1e-3


def test_k_limits_are_dominant_coefficients():
    p = RegimeParams.trigonometric(3)
    kp, kmn = km.k_limits("ii", p, 1)
    big = 25.0
    assert residual(np.exp(-big) * km.trig_k("ii", big, p), kp) < 1e-9
    assert residual(np.exp(-big) * km.trig_k("ii", -big, p), kmn) < 1e-9


def test_scaling_limit_kind_iv():
    k = km.scaling_limit_k("iv", 2)
    assert residual(k, km.g_minus(2)) < 1e-3


def test_dd_dressing_identity_d():
    p = RegimeParams.trigonometric(3)
    ks = km.trig_solution("ii", p)
    out = km.dd_dressing_check(identity(3), ks, p, 0.2 + 0.3j, -0.5 + 0.1j)
    assert out["DGD"] == out["DGDt"] < 1e-9


def test_dd_dressing_diagonal_both_readings_pass():
    p = RegimeParams.trigonometric(2)
    out = km.dd_dressing_check(np.diag([2.0, 1.0]), km.trig_solution("i", p), p, 0.2 + 0.3j, -0.5 + 0.1j)
    assert out["DGD"] < 1e-9 and out["DGDt"] < 1e-9


def test_dd_dressing_random_d_is_reported():
    p = RegimeParams.trigonometric(2)
    d = km.random_invertible(2, np.random.default_rng(2))
    out = km.dd_dressing_check(d, km.trig_solution("ii", p), p, 0.2 + 0.3j, -0.5 + 0.1j)
    assert set(out) == {"DGD", "DGDt"} and all(np.isfinite(v) for v in out.values())


def test_k_file_roundtrip(tmp_path):
    k = np.array([[1 + 2j, -0.5], [0.25j, 3.0]])
    path = tmp_path / "k.txt"
    km.dump_k_file(k, path)
    assert np.array_equal(km.load_k_file(path), k)
    path.write_text("# comment\n1 0,1\n0,-1 2\n")
    assert np.array_equal(km.load_k_file(path), np.array([[1, 1j], [-1j, 2]]))
    path.write_text("1 2\n3\n")
    with pytest.raises(ValueError):
        km.load_k_file(path)


def test_ksolution_metadata():
    p = RegimeParams.trigonometric(2)
    assert km.trig_solution("ii", p, -1).name == "ii-"
    assert not km.trig_solution("iii", p).constant
    assert km.constant_k(km.g_minus(2)).kind == Kind.RAT_ANTISYM
