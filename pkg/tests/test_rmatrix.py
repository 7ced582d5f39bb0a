import cmath

import numpy as np
import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

from snpcert import rmatrix as rm
from snpcert.rmatrix import PoleError, RegimeParams, SampleGrid
from snpcert.tensor_core import (
    embed,
    fitted_residual,
    identity,
    inverse,
    kron,
    partial_transpose,
    permutation_operator,
    projector_q,
    proportionality_residual,
    residual,
)


def ybe_residual(rf, l1, l2, n):
    sp = (n, n, n)
    lhs = embed(rf(l1 - l2), [0, 1], sp) @ embed(rf(l1), [0, 2], sp) @ embed(rf(l2), [1, 2], sp)
    rhs = embed(rf(l2), [1, 2], sp) @ embed(rf(l1), [0, 2], sp) @ embed(rf(l1 - l2), [0, 1], sp)
    return residual(lhs, rhs)


# --- parameters --------------------------------------------------------------------

def test_regime_params_derived():
    r = RegimeParams.rational(3)
    assert r.q == 1 and r.rho == 1.5 and not r.trig
    t = RegimeParams.trigonometric(4, 0.3)
    assert abs(t.q - cmath.exp(0.3j)) < 1e-15 and abs(t.rho - 0.6) < 1e-15 and t.trig


@pytest.mark.parametrize("mu", [0.0, np.pi, np.pi / 2, 2 * np.pi / 3])
def test_root_of_unity_rejected(mu):
    with pytest.raises(ValueError):
        RegimeParams.trigonometric(3, mu)


def test_small_n_rejected():
    with pytest.raises(ValueError):
        RegimeParams.rational(1)


# --- rational -------------------------------------------------------------------------

def test_rational_R_at_i():
    expected = np.array([[2, 0, 0, 0], [0, 1, 1, 0], [0, 1, 1, 0], [0, 0, 0, 2]])
    assert residual(rm.rational_R(1j, 2), expected) < 1e-15


def test_rational_R_large_lambda():
    assert residual(rm.rational_R(1e6, 3), identity(9)) < 1e-5
    assert residual(rm.rational_Rbar(1e6, 3), identity(9)) < 1e-5


def test_rational_ybe_example():
    assert ybe_residual(lambda l: rm.rational_R(l, 3), 0.7 + 0.2j, -0.4 + 0.9j, 3) < 1e-10


def test_rational_pole_guard():
    with pytest.raises(PoleError):
        rm.rational_R(0.01, 2)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_rational_rbar_two_routes(n):
    for lam in (0.3 + 0.4j, -1.1 + 0.2j):
        assert residual(rm.rational_Rbar(lam, n), rm.rational_Rbar_via_transpose(lam, n)) < 1e-13


def test_rational_m_is_identity():
    assert np.array_equal(rm.m_matrix(RegimeParams.rational(3)), identity(3))


def test_p_check():
    n = 3
    assert residual(rm.p_check(n), n / 2 * identity(n * n) - projector_q(n)) == 0.0


# --- trigonometric ----------------------------------------------------------------------

def test_trig_R_at_zero_is_p():
    p = RegimeParams.trigonometric(3, 0.4)
    r0 = rm.trig_R(0.0, p)
    assert proportionality_residual(permutation_operator(3) @ r0)[1] < 1e-12


@pytest.mark.parametrize("n", [2, 3])
def test_trig_ybe_random_pairs(n):
    p = RegimeParams.trigonometric(n)
    for l1, l2 in SampleGrid.draw_pairs(p, 10, seed=n):
        assert ybe_residual(lambda l: rm.trig_R(l, p), l1, l2, n) < 1e-9


@pytest.mark.parametrize("n", [2, 3, 4])
def test_trig_rbar_at_minus_i_rho(n):
    p = RegimeParams.trigonometric(n)
    assert residual(rm.trig_Rbar(-1j * p.rho, p), (p.q - 1 / p.q) * projector_q(n)) < 1e-12


def test_trig_rbar_two_routes():
    p = RegimeParams.trigonometric(2, 0.3)
    rng = np.random.default_rng(5)
    lam = complex(*rng.normal(size=2))
    assert np.all(np.isfinite(rm.trig_Rbar(lam, p)))
    assert residual(rm.trig_Rbar(lam, p), rm.trig_Rbar_via_transpose(lam, p)) < 1e-12


@pytest.mark.parametrize("n", [2, 3, 4])
def test_trig_symmetric_form(n):
    p = RegimeParams.trigonometric(n)
    for lam in (0.2 + 0.3j, -0.7 + 0.1j):
        assert residual(rm.trig_R(lam, p), rm.trig_R_symmetric(lam, p)) < 1e-13


def test_m_matrix_n2():
    p = RegimeParams.trigonometric(2, 0.37)
    assert residual(rm.m_matrix(p), np.diag([p.q, 1 / p.q])) < 1e-15


@pytest.mark.parametrize("n", [2, 3, 4])
def test_hecke_and_braid(n):
    p = RegimeParams.trigonometric(n)
    rh = rm.hecke_rhat(p)
    assert residual(rh @ rh, (p.q - 1 / p.q) * rh + identity(n * n)) < 1e-12
    sp = (n, n, n)
    a, b = embed(rh, [0, 1], sp), embed(rh, [1, 2], sp)
    assert residual(a @ b @ a, b @ a @ b) < 1e-12


@pytest.mark.parametrize("n", [2, 3])
def test_baxterised_rhat_proportional_to_PR(n):
    p = RegimeParams.trigonometric(n)
    for lam in (0.3 + 0.1j, -0.5 + 0.6j):
        _, r = fitted_residual(rm.rhat_baxterised(lam, p), permutation_operator(n) @ rm.trig_R(lam, p))
        assert r < 1e-12


def test_scaling_limit_rate():
    r3 = rm.scaling_limit_check(2, 0.8 + 0.3j, 1e-3)
    r4 = rm.scaling_limit_check(2, 0.8 + 0.3j, 1e-4)
    assert r3 < 5e-3 and r4 < 5e-4
    assert 5 < r3 / r4 < 20


def test_scaling_limit_large_lambda():
    p = RegimeParams("trigonometric", 2, 1e-3, check_degenerate=False)
    lam = 8.0
    assert proportionality_residual(rm.trig_R(lam, p))[1] < 1e-2


@pytest.mark.parametrize("regime", ["rational", "trigonometric"])
@pytest.mark.parametrize("n", [2, 3])
def test_unitarity_crossing_msym(regime, n):
    p = RegimeParams(regime, n)
    P = permutation_operator(n)
    m = rm.m_matrix(p)
    m1 = kron(m, identity(n))
    for lam in (0.4 + 0.3j, -0.9 + 0.2j):
        r = rm.R(lam, p)
        assert proportionality_residual(r @ P @ rm.R(-lam, p) @ P)[1] < 1e-12
        cross = partial_transpose(r, 0, (n, n)) @ m1 @ partial_transpose(rm.R(-lam - 2j * p.rho, p), 1, (n, n))
        assert proportionality_residual(cross @ inverse(m1))[1] < 1e-12
        assert residual(kron(m, m) @ r, r @ kron(m, m)) < 1e-13


# --- sample grid --------------------------------------------------------------------------

@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31), st.sampled_from(["rational", "trigonometric"]))
@example(3543, "rational")  # q - p near the rational pole -i rho
def test_sample_grid_avoids_poles(seed, regime):
    p = RegimeParams(regime, 2)
    g = SampleGrid.draw(p, 8, seed)
    pts = g.points
    assert len(g) == 8 and g.seed == seed
    for a in pts:
        assert abs(a) > rm.POLE_GUARD
        if p.trig:
            assert abs(cmath.sinh(a)) > 0.05 and abs(cmath.sinh(a + 1j * p.mu)) > 0.05
            assert abs(cmath.sinh(a - 1j * p.mu)) > 0.05
        for b in pts:
            if a is b:
                continue
            for s in (a + b, a - b):
                assert not rm.near_pole(s, p)


def test_sample_grid_deterministic():
    p = RegimeParams.trigonometric(3)
    assert SampleGrid.draw(p, 5, 7) == SampleGrid.draw(p, 5, 7)
    assert SampleGrid.draw(p, 5, 7) != SampleGrid.draw(p, 5, 8)
