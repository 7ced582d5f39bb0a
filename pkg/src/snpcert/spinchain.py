"""Double-row operators, open transfer matrices and the asymptotic
boundary charges of the rational chain.

Factor 0 of every full-space operator is the auxiliary space; chain sites
are factors 1..N.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from . import rmatrix
from .kmatrix import KSolution, congruence_normal_form
from .rmatrix import RegimeParams
from .tensor_core import (
    TensorSpace,
    apply_local,
    aux_blocks,
    embed,
    fitted_residual,
    identity,
    inverse,
    partial_trace,
    partial_transpose,
    permutation_operator,
    projector_q,
    residual,
)

DIM_CAP = 4096


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class ChainSpec:
    params: RegimeParams
    N: int
    cap: int = DIM_CAP

    def __post_init__(self):
        if self.N < 0:
            raise ValueError("chain length must be >= 0")
        if self.n ** (self.N + 1) > self.cap:
            raise DimensionError(f"n^(N+1) = {self.n ** (self.N + 1)} exceeds cap {self.cap}")

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def rho(self) -> complex:
        return self.params.rho

    @property
    def space(self) -> TensorSpace:
        return TensorSpace.uniform(self.n, self.N + 1)

    @property
    def chain_dim(self) -> int:
        return self.n ** self.N


def commutator_residual(a, b) -> float:
    return residual(a @ b, b @ a)


def sandwich(spec: ChainSpec, k0, left: Sequence[np.ndarray], right: Sequence[np.ndarray]) -> np.ndarray:
    """left[N-1]_{0N} ... left[0]_{01} K_0 right[0]_{01} ... right[N-1]_{0N}."""
    sp = spec.space
    out = embed(k0, [0], sp)
    for j in range(1, spec.N + 1):
        out = apply_local(left[j - 1], [0, j], sp, out, "left")
        out = apply_local(right[j - 1], [0, j], sp, out, "right")
    return out


def double_row(spec: ChainSpec, k_mat, lam: complex) -> np.ndarray:
    """B_0(lam) = R_0N ... R_01 K_0 Rbar_01 ... Rbar_0N."""
    r = rmatrix.R(lam, spec.params)
    rb = rmatrix.Rbar(lam, spec.params)
    return sandwich(spec, k_mat, [r] * spec.N, [rb] * spec.N)


def left_boundary(k: KSolution, mode: Union[str, np.ndarray, Callable], lam: complex,
                  params: RegimeParams) -> np.ndarray:
    """K^(L)(lam) for the named mode or an explicit matrix / callable.

    ``"dual"`` is K(-lam - i rho)^t, ``"printed"`` drops the transpose, and
    ``"inverse"`` is K(lam)^-1.
    """
    if isinstance(mode, str):
        if mode == "inverse":
            return inverse(k(lam))
        if mode == "dual":
            return k(-lam - 1j * params.rho).T
        if mode == "printed":
            return k(-lam - 1j * params.rho)
        raise ValueError(f"unknown left-boundary mode {mode!r}")
    if callable(mode):
        return np.asarray(mode(lam), dtype=complex)
    return np.asarray(mode, dtype=complex)


def transfer_from_double_row(spec: ChainSpec, kl, b) -> np.ndarray:
    sp = spec.space
    return partial_trace(apply_local(kl, [0], sp, b, "left"), 0, sp)


def transfer(spec: ChainSpec, k_right: KSolution, left, lam: complex) -> np.ndarray:
    """t(lam) = tr_0 K^(L)_0(lam) B_0(lam) on the chain."""
    b = double_row(spec, k_right(lam), lam)
    kl = left_boundary(k_right, left, lam, spec.params)
    return transfer_from_double_row(spec, kl, b)


def check_transfer_commutativity(spec: ChainSpec, k_right: KSolution, left,
                                 pairs: Iterable[tuple[complex, complex]]) -> float:
    worst = 0.0
    for l1, l2 in pairs:
        worst = max(worst, commutator_residual(transfer(spec, k_right, left, l1),
                                               transfer(spec, k_right, left, l2)))
    return worst


# --- rational charges ------------------------------------------------------

@dataclass(frozen=True)
class ChargeMatrix:
    """Operator on V_0 (x) chain viewed as an n x n matrix of chain operators."""

    full: np.ndarray
    n: int

    @property
    def blocks(self) -> np.ndarray:
        return aux_blocks(self.full, self.n)

    def block(self, a: int, b: int) -> np.ndarray:
        return self.blocks[a, b]


def _require_rational(spec: ChainSpec):
    if spec.params.trig:
        raise ValueError("this construction needs the rational regime")


def b1_charge(spec: ChainSpec, k) -> ChargeMatrix:
    """B^(1) = sum_j P_0j K_0 + K_0 Pcheck_0j."""
    _require_rational(spec)
    n, sp = spec.n, spec.space
    k = np.asarray(k, dtype=complex)
    p, pc = permutation_operator(n), rmatrix.p_check(n)
    k0 = embed(k, [0], sp)
    full = np.zeros_like(k0)
    for j in range(1, spec.N + 1):
        full += apply_local(p, [0, j], sp, k0, "left") + apply_local(pc, [0, j], sp, k0, "right")
    return ChargeMatrix(full, n)


def b1_primed_charge(spec: ChainSpec, k) -> ChargeMatrix:
    """B'^(1) = N rho + sum_j (P_0j - K_0 Q_0j K_0^-1)."""
    _require_rational(spec)
    n, sp = spec.n, spec.space
    k = np.asarray(k, dtype=complex)
    kq = np.kron(k, identity(n)) @ projector_q(n) @ np.kron(inverse(k), identity(n))
    full = spec.N * spec.rho * identity(sp.dim)
    for j in range(1, spec.N + 1):
        full += embed(permutation_operator(n) - kq, [0, j], sp)
    return ChargeMatrix(full, n)


def asymptotic_charge_residual(spec: ChainSpec, k, lam: float) -> float:
    """residual(lam/i (B(lam) - K_0), B^(1)) at real large lam."""
    b = double_row(spec, k, lam)
    approx = (lam / 1j) * (b - embed(k, [0], spec.space))
    return residual(approx, b1_charge(spec, k).full)


def check_symmetry_commutators(spec: ChainSpec, k, lams: Iterable[complex], left=None) -> float:
    """max over (a,b), lam of the [t(lam), B^(1)_ab] residual; left defaults to K^-1."""
    k = np.asarray(k, dtype=complex)
    kl = inverse(k) if left is None else np.asarray(left, dtype=complex)
    blocks = b1_charge(spec, k).blocks
    worst = 0.0
    for lam in lams:
        t = transfer_from_double_row(spec, kl, double_row(spec, k, lam))
        for a in range(spec.n):
            for b in range(spec.n):
                worst = max(worst, commutator_residual(t, blocks[a, b]))
    return worst


def _exchange_rhs(k, blocks, a, b, c, d):
    return (k[a, d] * blocks[c, b] - k[c, b] * blocks[a, d]
            + k[a, c] * blocks[b, d] - k[d, b] * blocks[c, a])


def check_exchange_alg(spec: ChainSpec, k, lam: complex) -> float:
    """[B^(1)_ab, B_cd(lam)] against K_ad B_cb - K_cb B_ad + K_ac B_bd - K_db B_ca."""
    k = np.asarray(k, dtype=complex)
    b1 = b1_charge(spec, k).blocks
    bl = aux_blocks(double_row(spec, k, lam), spec.n)
    return _exchange_residual(k, b1, bl)


def _exchange_residual(k, b1, bl) -> float:
    """One residual for the whole operator identity: every (a,b,c,d) block shares one scale."""
    n = k.shape[0]
    lhs, rhs = [], []
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for d in range(n):
                    lhs.append(b1[a, b] @ bl[c, d] - bl[c, d] @ b1[a, b])
                    rhs.append(_exchange_rhs(k, bl, a, b, c, d))
    return residual(np.array(lhs), np.array(rhs))


def symmetry_sign(k) -> int:
    k = np.asarray(k)
    if np.allclose(k.T, k, rtol=0, atol=1e-13):
        return 1
    if np.allclose(k.T, -k, rtol=0, atol=1e-13):
        return -1
    raise ValueError("K is neither symmetric nor antisymmetric")


def symt_residual(spec: ChainSpec, k, lam: complex) -> tuple[complex, float]:
    """Fit B^t(lam) = s * [eps B(-lam-i rho) g + i/(2 lam + i rho) (B(-lam-i rho) g - B(lam))].

    The transpose acts on the auxiliary space only; returns (s, residual).
    """
    k = np.asarray(k, dtype=complex)
    eps = symmetry_sign(k)
    rho = spec.rho
    g = ((lam + 1j * rho) / lam) ** (2 * spec.N)
    bp = double_row(spec, k, lam)
    bm = double_row(spec, k, -lam - 1j * rho)
    rhs = eps * bm * g + 1j / (2 * lam + 1j * rho) * (bm * g - bp)
    return fitted_residual(partial_transpose(bp, 0, spec.space), rhs)


def check_lie_structure(spec: ChainSpec, k, lams: Sequence[complex] = ()) -> dict[str, float]:
    """Residuals of lie1, lie2, the so/sp mapping relations and symt."""
    _require_rational(spec)
    k = np.asarray(k, dtype=complex)
    n, N, rho = spec.n, spec.N, spec.rho
    eps = symmetry_sign(k)
    charge = b1_charge(spec, k)
    b1 = charge.blocks
    one = identity(spec.chain_dim)
    out = {}
    out["lie1"] = max(residual(b1[b, a], -eps * b1[a, b] + eps * 2 * rho * N * k[a, b] * one)
                      for a in range(n) for b in range(n))
    out["lie2"] = _exchange_residual(k, b1, b1)

    cong = congruence_normal_form(k.real, eps)
    sp = spec.space
    u0 = embed(cong.U.astype(complex), [0], sp)
    u0inv = embed(inverse(cong.U), [0], sp)
    k0inv = embed(inverse(k), [0], sp)
    g0 = embed(cong.G, [0], sp)
    m = u0 @ charge.full @ k0inv @ u0inv - N * rho * identity(sp.dim)
    alt = eps * u0 @ (charge.full - N * rho * embed(k, [0], sp)) @ embed(cong.U.T.astype(complex), [0], sp) @ g0
    out["mapping_forms"] = residual(m, alt)
    out["mt_g"] = residual(partial_transpose(m, 0, sp) @ g0, -g0 @ m)
    # [M_1, M_2] = [M_2, P_12 - G_1 Q_12 G_1^-1] on aux1 (x) aux2 (x) chain
    big = TensorSpace((n, n) + (n,) * N)
    chain = list(range(2, N + 2))
    m1 = embed(m, [0] + chain, big)
    m2 = embed(m, [1] + chain, big)
    gq = np.kron(cong.G, identity(n)) @ projector_q(n) @ np.kron(inverse(cong.G), identity(n))
    x = embed(permutation_operator(n) - gq, [0, 1], big)
    out["m_bracket"] = residual(m1 @ m2 - m2 @ m1, m2 @ x - x @ m2)
    fits = [symt_residual(spec, k, lam) for lam in lams]
    if fits:
        out["symt"] = max(r for _, r in fits)
        out["symt_scale"] = fits[0][0]
    return out


# --- general boundaries ----------------------------------------------------

def chain_tensor_power(u, N: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for _ in range(N):
        out = np.kron(out, u)
    return out


def transfer_inverse_left(spec: ChainSpec, k, lam: complex) -> np.ndarray:
    """t_K(lam) = tr_0 K_0^-1 B_0(lam)."""
    k = np.asarray(k, dtype=complex)
    return transfer_from_double_row(spec, inverse(k), double_row(spec, k, lam))


def check_spectrum_equivalence(spec: ChainSpec, k, lams: Sequence[complex], powers: int = 4) -> dict[str, float]:
    """Similarity U^(x)N t_K = t_G U^(x)N, the helper commutator, and trace powers."""
    _require_rational(spec)
    k = np.asarray(k, dtype=complex)
    eps = symmetry_sign(k)
    cong = congruence_normal_form(k.real, eps)
    u = cong.U.astype(complex)
    uu = chain_tensor_power(u, spec.N)
    sp = spec.space
    helper_op = np.kron(inverse(u.T), u)
    out = {"similarity": 0.0, "helper": 0.0, "trace_powers": 0.0}
    for lam in lams:
        tk = transfer_inverse_left(spec, k, lam)
        tg = transfer_inverse_left(spec, cong.G, lam)
        out["similarity"] = max(out["similarity"], residual(uu @ tk, tg @ uu))
        rb = rmatrix.rational_Rbar(lam, spec.n)
        out["helper"] = max(out["helper"], commutator_residual(rb, helper_op))
        pk, pg = identity(tk.shape[0]), identity(tg.shape[0])
        for _ in range(powers):
            pk, pg = pk @ tk, pg @ tg
            a, b = np.trace(pk), np.trace(pg)
            out["trace_powers"] = max(out["trace_powers"], abs(a - b) / (1 + max(abs(a), abs(b))))
    return out


def primed_construction_check(spec: ChainSpec, k, lams: Sequence[complex]) -> dict[str, float]:
    _require_rational(spec)
    k = np.asarray(k, dtype=complex)
    n = spec.n
    kinv = inverse(k)
    one = identity(n)
    k1 = np.kron(k, one)
    k2 = np.kron(one, k)
    k1i = np.kron(kinv, one)
    k2i = np.kron(one, kinv)
    sp = spec.space
    k0inv = embed(kinv, [0], sp)
    bp1 = b1_primed_charge(spec, k).full
    pc = rmatrix.p_check(n)
    # B'^(1) as the sum of P_0j + K_0 Pcheck_0j K_0^-1
    alt = sum(embed(permutation_operator(n) + k1 @ pc @ k1i, [0, j], sp) for j in range(1, spec.N + 1))
    out = {"rbar_two_sided": 0.0, "re2": 0.0, "charge_symmetry": 0.0, "transfer_match": 0.0,
           "charge_forms": residual(bp1, alt)}
    lams = list(lams)
    for lam in lams:
        rb = rmatrix.rational_Rbar(lam, n)
        out["rbar_two_sided"] = max(out["rbar_two_sided"], residual(k1 @ rb @ k1i, k2 @ rb @ k2i))
        t = transfer_inverse_left(spec, k, lam)
        rbp = k1 @ rb @ k1i
        tp = partial_trace(sandwich(spec, identity(n), [rmatrix.rational_R(lam, n)] * spec.N, [rbp] * spec.N), 0, sp)
        out["transfer_match"] = max(out["transfer_match"], residual(t, tp))
        b1p = aux_blocks(bp1, n)
        for a in range(n):
            for b in range(n):
                out["charge_symmetry"] = max(out["charge_symmetry"], commutator_residual(t, b1p[a, b]))
    for l1, l2 in zip(lams, lams[1:] + lams[:1]):
        out["re2"] = max(out["re2"], re2_residual(spec, k, l1, l2))
    return out


def re2_residual(spec: ChainSpec, k, l1: complex, l2: complex) -> float:
    """Reflection equation for B'(lam) = B(lam) K_0^-1 with Rbar' = K_1 Rbar K_1^-1."""
    n, N = spec.n, spec.N
    k = np.asarray(k, dtype=complex)
    kinv = inverse(k)
    sp = spec.space
    big = TensorSpace((n, n) + (n,) * N)
    chain = list(range(2, N + 2))

    def bprime(lam):
        return apply_local(kinv, [0], sp, double_row(spec, k, lam), "right")

    b1 = embed(bprime(l1), [0] + chain, big)
    b2 = embed(bprime(l2), [1] + chain, big)
    r = embed(rmatrix.rational_R(l1 - l2, n), [0, 1], big)
    rbp = np.kron(k, identity(n)) @ rmatrix.rational_Rbar(l1 + l2, n) @ np.kron(kinv, identity(n))
    rb = embed(rbp, [0, 1], big)
    return residual(r @ b1 @ rb @ b2, b2 @ rb @ b1 @ r)
