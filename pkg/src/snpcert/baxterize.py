"""Braided framework: the V matrix, R-tilde and K-tilde, the algebra
N_N(w, +-, q) in the fundamental representation, its Baxterisation, and the
duality between the tilde finite charges and sigma_i, g_1.

Strands 1..N are chain factors 1..N of an aux-first space; wherever a
product needs strand N+1 it is the auxiliary factor 0.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import rmatrix
from .kmatrix import Kind, _kind2_parts, _qpow, g_minus_q, trig_solution
from .rmatrix import RegimeParams
from .spinchain import ChainSpec, commutator_residual, double_row
from .tensor_core import (
    TensorSpace,
    embed,
    fitted_residual,
    identity,
    inverse,
    kron,
    mprod,
    partial_transpose,
    permutation_operator,
    residual,
)
from .trig_finite import build_finite_charges


# --- V, R-tilde, K-tilde ---------------------------------------------------------

def v_matrix(params: RegimeParams, variant: str = "printed") -> np.ndarray:
    """V = sum_k c_k q^{k-(n+1)/2} E_{k, n+1-k}; c_k = i(-1)^k for even n ("printed"), else 1."""
    n = params.n
    v = np.zeros((n, n), dtype=complex)
    for k in range(1, n + 1):
        c = 1j * (-1) ** k if (variant == "printed" and n % 2 == 0) else 1.0
        v[k - 1, n - k] = c * _qpow(params, k - (n + 1) / 2)
    return v


def sign_pm(n: int) -> int:
    return (-1) ** (n + 1)


def v_invariants(params: RegimeParams, variant: str = "printed") -> dict[str, float]:
    v = v_matrix(params, variant)
    m = rmatrix.m_matrix(params)
    return {
        "V_squared": residual(v @ v, identity(params.n)),
        "M_eq_VtV": residual(v.T @ v, m),
        "M_eq_pm_VtV": residual(sign_pm(params.n) * v.T @ v, m),
    }


def _v2t(params: RegimeParams) -> np.ndarray:
    return kron(identity(params.n), v_matrix(params).T)


def rtilde_const(params: RegimeParams) -> np.ndarray:
    """P V_2^t R^{t_1} V_2^t with the constant R = P(q + U)."""
    n = params.n
    v2 = _v2t(params)
    rt1 = partial_transpose(rmatrix.r_const(n, params.q), 0, (n, n))
    return permutation_operator(n) @ v2 @ rt1 @ v2


def rtilde(lam: complex, params: RegimeParams) -> np.ndarray:
    """P V_2^t Rbar(lam) V_2^t."""
    v2 = _v2t(params)
    return permutation_operator(params.n) @ v2 @ rmatrix.trig_Rbar(lam, params) @ v2


def rhat(lam: complex, params: RegimeParams) -> np.ndarray:
    return permutation_operator(params.n) @ rmatrix.trig_R(lam, params)


def check_trs(params: RegimeParams, lams: Iterable[complex]) -> dict[str, float]:
    """R-tilde(lam) against its symmetric form and against the transpose route."""
    rt = rtilde_const(params)
    rti = inverse(rt)
    v2 = _v2t(params)
    p = permutation_operator(params.n)
    out = {"symmetric_form": 0.0, "transpose_route": 0.0}
    for lam in lams:
        x = lam + 1j * params.rho
        lhs = rtilde(lam, params)
        out["symmetric_form"] = max(out["symmetric_form"],
                                    residual(lhs, cmath.exp(-x) * rt - cmath.exp(x) * rti))
        alt = p @ v2 @ rmatrix.trig_Rbar_via_transpose(lam, params) @ v2
        out["transpose_route"] = max(out["transpose_route"], residual(lhs, alt))
    return out


def ktilde_const(kind: Kind | str, params: RegimeParams) -> np.ndarray:
    """b-image: V^t (i), i G_q^- V^t (iv), or the kind (ii) constant."""
    kind = Kind(kind)
    vt = v_matrix(params).T
    if kind == Kind.TRIG_I:
        return vt
    if kind == Kind.TRIG_IV:
        return 1j * g_minus_q(params) @ vt
    if kind == Kind.TRIG_II:
        up, _ = _kind2_parts(params)
        return (_qpow(params, 0.5) + _qpow(params, -0.5)) * up @ vt
    raise ValueError(f"no tilde boundary for kind {kind.value}")


def ktilde(lam: complex, kind: Kind | str, params: RegimeParams, sign: int = 1) -> np.ndarray:
    """K(lam) V^t."""
    return trig_solution(kind, params, sign)(lam) @ v_matrix(params).T


def check_tks(params: RegimeParams, lams: Iterable[complex], sign: int = 1) -> tuple[complex, float]:
    """Fit K(lam) V^t ~ s (e^lam q^{n/4} Kt + sign e^-lam q^{-n/4} Kt^-1) over all lams at once."""
    kt = ktilde_const(Kind.TRIG_II, params)
    kti = inverse(kt)
    n = params.n
    lhs, rhs = [], []
    for lam in lams:
        lhs.append(ktilde(lam, Kind.TRIG_II, params, sign))
        rhs.append(cmath.exp(lam) * _qpow(params, n / 4) * kt + sign * cmath.exp(-lam) * _qpow(params, -n / 4) * kti)
    return fitted_residual(np.concatenate(lhs), np.concatenate(rhs))


# --- the algebra N_N in the fundamental representation ---------------------------

@dataclass(frozen=True)
class NRep:
    params: RegimeParams
    N: int
    flavor: str
    quotient: int
    sigma: tuple
    rho: tuple
    b: tuple

    @property
    def w(self) -> complex:
        return _qpow(self.params, self.params.n / 2)

    @property
    def pm(self) -> int:
        return sign_pm(self.params.n)


def build_nrep(params: RegimeParams, N: int, flavor: str = "G1", b_kind: Kind | str = Kind.TRIG_I) -> NRep:
    """sigma_i -> R-hat_{i,i+1}, rho_i -> R-tilde_{i,i+1}, b_i -> K-tilde_i.

    Flavor G1 takes b from kind (i) or (iv) and lands in the quotient N^0; flavor G2 uses
    the kind (ii) constant and lands in N^1.
    """
    if not params.trig:
        raise ValueError("N_N needs the trigonometric regime")
    if N < 2:
        raise ValueError("N_N needs at least two strands")
    b_kind = Kind(b_kind)
    if flavor == "G1":
        if b_kind not in (Kind.TRIG_I, Kind.TRIG_IV):
            raise ValueError("flavor G1 takes b from kind (i) or (iv)")
        quotient = 0
    elif flavor == "G2":
        b_kind, quotient = Kind.TRIG_II, 1
    else:
        raise ValueError(f"unknown flavor {flavor!r}")
    n = params.n
    sp = TensorSpace.uniform(n, N)
    s, r, k = rmatrix.hecke_rhat(params), rtilde_const(params), ktilde_const(b_kind, params)
    return NRep(params, N, flavor, quotient,
                tuple(embed(s, [i, i + 1], sp) for i in range(N - 1)),
                tuple(embed(r, [i, i + 1], sp) for i in range(N - 1)),
                tuple(embed(k, [i], sp) for i in range(N)))


def check_nrep_relations(rep: NRep) -> dict[str, float]:
    """Residuals of every defining relation of N_N(w, pm, q) plus the quotient relation."""
    q, w, pm = rep.params.q, rep.w, rep.pm
    S, Rr, B = rep.sigma, rep.rho, rep.b
    Si = [inverse(x) for x in S]
    Ri = [inverse(x) for x in Rr]
    Bi = [inverse(x) for x in B]
    one = identity(S[0].shape[0])
    out: dict[str, float] = {}

    def put(name, a, b):
        out[name] = max(out.get(name, 0.0), residual(a, b))

    m = rep.N - 1  # number of sigma / rho generators
    for i in range(m):
        put("hecke", S[i] @ S[i], (q - 1 / q) * S[i] + one)
        put("bd1", Rr[i] @ (Rr[i] - Ri[i]), pm * w * w * (Rr[i] - Ri[i]))
        for j in range(rep.N):
            # i, j are 0-based; "i > j or i < j - 1" in 1-based indices is the same test
            if i > j or i < j - 1:
                put("sigma_b_far", S[i] @ B[j], B[j] @ S[i])
                put("rho_b_far", Rr[i] @ B[j], B[j] @ Rr[i])
        for j in range(m):
            if abs(i - j) > 1:
                put("sigma_rho_far", S[i] @ Rr[j], Rr[j] @ S[i])
                put("rho_rho_far", Rr[i] @ Rr[j], Rr[j] @ Rr[i])
                put("sigma_sigma_far", S[i] @ S[j], S[j] @ S[i])
    for i in range(m - 1):
        s, s1, si, s1i = S[i], S[i + 1], Si[i], Si[i + 1]
        r, r1, ri, r1i = Rr[i], Rr[i + 1], Ri[i], Ri[i + 1]
        put("braid", s @ s1 @ s, s1 @ s @ s1)
        put("srr_a", s1 @ r @ r1, r @ r1 @ s)
        put("srr_b", s @ r1 @ r, r1 @ r @ s1)
        put("srr_c", s1 @ ri @ r1, r @ r1i @ s)
        put("srr_d", s @ r1i @ r, r1 @ ri @ s1)
        put("srr_e", s @ r1 @ ri - si @ r1i @ r, r1i @ r @ s1 - r1 @ ri @ s1i)
        put("srr_f", s1 @ r @ r1i - s1i @ ri @ r1, ri @ r1 @ s - r @ r1i @ si)
    for i in range(m):
        s, si, r, ri, b, bi = S[i], Si[i], Rr[i], Ri[i], B[i], Bi[i]
        put("sbrb_a", s @ b @ ri @ b, b @ ri @ b @ s)
        put("sbrb_b", r @ b @ s @ b, b @ s @ b @ r)
        put("sbrb_c", s @ b @ r @ b - s @ bi @ ri @ bi, b @ r @ b @ s - bi @ ri @ bi @ s)
        put("sbrb_d", s @ bi @ r @ b - si @ b @ r @ bi, b @ r @ bi @ s - bi @ r @ b @ si)
        put("sbrb_e", s @ bi @ ri @ b - si @ b @ ri @ bi, b @ ri @ bi @ s - bi @ ri @ b @ si)
    for i in range(rep.N):
        b, bi = B[i], Bi[i]
        if rep.quotient == 0:
            put("ed1", b @ b, one)
        else:
            root = 1.0 if pm == 1 else 1j
            put("ed1", (b + root / w * one) @ (b + bi), 0 * one)
    return out


# --- Baxterisation -----------------------------------------------------------------

@dataclass(frozen=True)
class BaxterisedTriple:
    rep: NRep
    eta: int = 1

    def rhat(self, i: int, lam: complex) -> np.ndarray:
        s = self.rep.sigma[i - 1]
        return cmath.exp(lam) * s - cmath.exp(-lam) * inverse(s)

    def rtilde(self, i: int, lam: complex) -> np.ndarray:
        r, w = self.rep.rho[i - 1], self.rep.w
        return cmath.exp(-lam) * r / w - w * cmath.exp(lam) * inverse(r)

    def k(self, i: int, lam: complex) -> np.ndarray:
        b = self.rep.b[i - 1]
        if self.rep.quotient == 0:
            return b
        w = self.rep.w
        return cmath.exp(lam) * cmath.sqrt(w) * b + self.eta * cmath.exp(-lam) / cmath.sqrt(w) * inverse(b)


def baxterise(rep: NRep, eta: int = 1) -> BaxterisedTriple:
    if eta not in (1, -1):
        raise ValueError("eta must be +1 or -1")
    return BaxterisedTriple(rep, eta)


def check_baxterised_relations(tr: BaxterisedTriple, pairs: Sequence[tuple[complex, complex]]) -> dict[str, float]:
    """Braided YBE, mixed relation, braided reflection, unitarity and k-unitarity.

    The braided YBE and the mixed relation are reported under two readings: ``printed``
    repeats lam_2 in the middle factor of the right-hand side, ``corrected`` uses lam_1.
    """
    rep = tr.rep
    q, w = rep.params.q, rep.w
    one = identity(rep.sigma[0].shape[0])
    out: dict[str, float] = {}

    def put(name, a, b):
        out[name] = max(out.get(name, 0.0), residual(a, b))

    for l1, l2 in pairs:
        if rep.N >= 3:
            lhs = tr.rhat(1, l1 - l2) @ tr.rhat(2, l1) @ tr.rhat(1, l2)
            put("ybe_printed", lhs, tr.rhat(2, l2) @ tr.rhat(1, l2) @ tr.rhat(2, l1 - l2))
            put("ybe_corrected", lhs, tr.rhat(2, l2) @ tr.rhat(1, l1) @ tr.rhat(2, l1 - l2))
            lhs = tr.rhat(1, l1 - l2) @ tr.rtilde(2, l1) @ tr.rtilde(1, l2)
            put("mixed_printed", lhs, tr.rtilde(2, l2) @ tr.rtilde(1, l2) @ tr.rhat(2, l1 - l2))
            put("mixed_corrected", lhs, tr.rtilde(2, l2) @ tr.rtilde(1, l1) @ tr.rhat(2, l1 - l2))
        put("retp",
            tr.rhat(1, l1 - l2) @ tr.k(1, l1) @ tr.rtilde(1, l1 + l2) @ tr.k(1, l2),
            tr.k(1, l2) @ tr.rtilde(1, l1 + l2) @ tr.k(1, l1) @ tr.rhat(1, l1 - l2))
        for lam in (l1, l2):
            e, ei = cmath.exp(lam), cmath.exp(-lam)
            put("unit_rhat", tr.rhat(1, lam) @ tr.rhat(1, -lam) / ((q * e - ei / q) * (q * ei - e / q)), one)
            put("unit_rtilde", tr.rtilde(1, lam) @ tr.rtilde(1, -lam) / ((w * e - ei / w) * (w * ei - e / w)), one)
            eta = tr.eta
            if rep.quotient == 0:
                put("unit_k", tr.k(1, lam) @ tr.k(1, -lam), one)
            elif rep.pm == -1:
                put("unit_k", tr.k(1, lam) @ tr.k(1, -lam),
                    (eta * e * e + eta * ei * ei - w - 1 / w) * one)
            else:
                put("unit_k", tr.k(1, lam) @ tr.k(1, -lam + 1j * np.pi / 2),
                    1j * (eta * ei * ei - eta * e * e - w + 1 / w) * one)
    return out


def check_baxterised_images(params: RegimeParams, lams: Iterable[complex]) -> dict[str, float]:
    """r-hat against P R(lam) (fitted scalar) and r-tilde against R-tilde(lam) (exact)."""
    rep = build_nrep(params, 2)
    tr = baxterise(rep)
    sp = TensorSpace.uniform(params.n, 2)
    out = {"rhat_vs_PR": 0.0, "rtilde_vs_trs": 0.0}
    for lam in lams:
        out["rhat_vs_PR"] = max(out["rhat_vs_PR"], fitted_residual(tr.rhat(1, lam), embed(rhat(lam, params), [0, 1], sp))[1])
        out["rtilde_vs_trs"] = max(out["rtilde_vs_trs"], residual(tr.rtilde(1, lam), embed(rtilde(lam, params), [0, 1], sp)))
    return out


# --- braided reflection equation for the chain -------------------------------------

def check_braided_reflection(params: RegimeParams, N: int, kind: Kind | str, pairs: Sequence[tuple[complex, complex]],
                             sign: int = 1) -> float:
    """R-hat_12(l1-l2) Bt_1(l1) R-tilde_12(l1+l2) Bt_1(l2) = Bt_1(l2) R-tilde_12 Bt_1(l1) R-hat_12 with Bt = B V_0^t."""
    n = params.n
    spec = ChainSpec(params, N)
    k = trig_solution(kind, params, sign)
    big = TensorSpace((n, n) + (n,) * N)
    chain = list(range(2, N + 2))
    vt0 = embed(v_matrix(params).T, [0], spec.space)
    worst = 0.0
    for l1, l2 in pairs:
        b1 = embed(double_row(spec, k(l1), l1) @ vt0, [0] + chain, big)
        b2 = embed(double_row(spec, k(l2), l2) @ vt0, [0] + chain, big)
        rh = embed(rhat(l1 - l2, params), [0, 1], big)
        rt = embed(rtilde(l1 + l2, params), [0, 1], big)
        worst = max(worst, residual(rh @ b1 @ rt @ b2, b2 @ rt @ b1 @ rh))
    return worst


# --- duality ------------------------------------------------------------------------

def _strand_factor(s: int, N: int) -> int:
    """Strands 1..N are chain factors 1..N; strand N+1 is the auxiliary factor 0."""
    return s if s <= N else 0


@dataclass(frozen=True)
class TildeCharges:
    params: RegimeParams
    N: int
    kind: Kind
    bplus: np.ndarray
    bminus: np.ndarray


def _pair(op, s: int, N: int, sp) -> np.ndarray:
    return embed(op, [_strand_factor(s, N), _strand_factor(s + 1, N)], sp)


def build_tilde_charges(params: RegimeParams, N: int, kind: Kind | str) -> TildeCharges:
    """Bt+ = Rh_{N,N+1}..Rh_12 Kt_1 Rt_12^-1..Rt_{N,N+1}^-1 and Bt- with all factors inverted."""
    kind = Kind(kind)
    spec = ChainSpec(params, N)
    sp = spec.space
    rh, rt = rmatrix.hecke_rhat(params), rtilde_const(params)
    rhi, rti = inverse(rh), inverse(rt)
    kt = embed(ktilde_const(kind, params), [_strand_factor(1, N)], sp)
    kti = inverse(kt)
    left = [_pair(rh, s, N, sp) for s in range(N, 0, -1)]
    right = [_pair(rti, s, N, sp) for s in range(1, N + 1)]
    bplus = mprod(left + [kt] + right)
    left = [_pair(rhi, s, N, sp) for s in range(N, 0, -1)]
    right = [_pair(rt, s, N, sp) for s in range(1, N + 1)]
    bminus = mprod(left + [kti] + right)
    return TildeCharges(params, N, kind, bplus, bminus)


def check_tilde_isomorphism(params: RegimeParams, N: int, kind: Kind | str) -> dict[str, tuple[complex, float]]:
    """Bt+- against B+- V_0^t from the finite charges; a single scalar is fitted for each sign."""
    tc = build_tilde_charges(params, N, kind)
    ch = build_finite_charges(params, N, kind)
    vt0 = embed(v_matrix(params).T, [0], ch.spec.space)
    return {"plus": fitted_residual(tc.bplus, ch.bplus @ vt0),
            "minus": fitted_residual(tc.bminus, ch.bminus @ vt0)}


def check_charge_duality(params: RegimeParams, N: int, kind: Kind | str) -> dict[str, float]:
    """[R-hat_{i,i+1}, Bt+-], [Kt^-1 (Rt - Rt^-1) Kt, Bt+-], [g_1, Bt+-] and the intermediate identity."""
    if N < 2:
        raise ValueError("the duality needs N >= 2")
    tc = build_tilde_charges(params, N, kind)
    sp = ChainSpec(params, N).space
    q = params.q
    rh, rt = rmatrix.hecke_rhat(params), rtilde_const(params)
    rti = inverse(rt)
    kt = embed(ktilde_const(kind, params), [1], sp)
    kti = inverse(kt)
    x = kti @ _pair(rt - rti, 1, N, sp) @ kt
    g1 = kti @ _pair((rt - rti) / (q - 1 / q), 1, N, sp) @ kt
    out = {"sigma": 0.0}
    for i in range(1, N):
        s = _pair(rh, i, N, sp)
        out["sigma"] = max(out["sigma"], commutator_residual(s, tc.bplus), commutator_residual(s, tc.bminus))
    out["mproof"] = max(commutator_residual(x, tc.bplus), commutator_residual(x, tc.bminus))
    out["g1"] = max(commutator_residual(g1, tc.bplus), commutator_residual(g1, tc.bminus))
    # intermediate identity with C-tilde built on strands 1..N+1
    rhp = lambda s: _pair(rh, s, N, sp)
    rtip = lambda s: _pair(rti, s, N, sp)
    c = mprod([rhp(s) for s in range(N, 2, -1)] + [rtip(2), rtip(1), kt, rhp(1), rhp(2)]
              + [rtip(s) for s in range(3, N + 1)])
    out["presque"] = residual(x @ tc.bplus, c @ x)
    return out
