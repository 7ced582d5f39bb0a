"""Classical and quantum Brauer algebras on (C^n)^(x)N and their centralizers.

Chain sites here are factors 0..N-1 of the chain space; whenever a
centralizer check needs the auxiliary space it is prepended as factor 0 and
the chain generators are shifted by one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rmatrix
from .kmatrix import Kind
from .rmatrix import RegimeParams
from .spinchain import ChainSpec, b1_charge, b1_primed_charge, commutator_residual, symmetry_sign
from .tensor_core import (
    TensorSpace,
    embed,
    identity,
    inverse,
    kron,
    permutation_operator,
    projector_q,
    residual,
)
from .trig_finite import build_finite_charges

NOT_APPLICABLE = None


@dataclass(frozen=True)
class BrauerRep:
    n: int
    N: int
    sigma: tuple
    tau: tuple
    delta: int


def _pair_op(op, i: int, N: int, n: int, offset: int = 0) -> np.ndarray:
    """op on sites (i, i+1) (1-based) of an N-site chain, optionally after ``offset`` extra factors."""
    sp = TensorSpace.uniform(n, N + offset)
    return embed(op, [offset + i - 1, offset + i], sp)


def brauer_generators(k, epsilon: int, reading: str = "printed") -> tuple[np.ndarray, np.ndarray]:
    """Two-site images of sigma and tau: eps P and K_1 Q K_1^-1.

    ``reading="signed"`` multiplies tau by eps, the variant that is a Brauer
    representation with delta = eps n for antisymmetric K.
    """
    k = np.asarray(k, dtype=complex)
    n = k.shape[0]
    k1 = kron(k, identity(n))
    tau = k1 @ projector_q(n) @ inverse(k1)
    if reading == "signed":
        tau = epsilon * tau
    elif reading != "printed":
        raise ValueError(f"unknown reading {reading!r}")
    return epsilon * permutation_operator(n), tau


def build_brauer_rep(k, epsilon: int, N: int, reading: str = "printed") -> BrauerRep:
    if N < 2:
        raise ValueError("the Brauer algebra needs N >= 2")
    n = np.asarray(k).shape[0]
    s, t = brauer_generators(k, epsilon, reading)
    delta = epsilon * n if reading == "signed" else n
    return BrauerRep(n, N,
                     tuple(_pair_op(s, i, N, n) for i in range(1, N)),
                     tuple(_pair_op(t, i, N, n) for i in range(1, N)), delta)


def check_brauer_relations(rep: BrauerRep) -> dict[str, float]:
    s, t = rep.sigma, rep.tau
    N = rep.N
    one = identity(s[0].shape[0])
    worst: dict[str, float] = {}

    def put(name, a, b):
        worst[name] = max(worst.get(name, 0.0), residual(a, b))

    for i in range(N - 1):
        put("sigma_sq", s[i] @ s[i], one)
        put("tau_sq", t[i] @ t[i], rep.delta * t[i])
        put("sigma_tau", s[i] @ t[i], t[i])
        put("tau_sigma", t[i] @ s[i], t[i])
        for j in range(N - 1):
            if abs(i - j) > 1:
                put("far_ss", s[i] @ s[j], s[j] @ s[i])
                put("far_tt", t[i] @ t[j], t[j] @ t[i])
                put("far_st", s[i] @ t[j], t[j] @ s[i])
    for i in range(N - 2):
        put("braid", s[i] @ s[i + 1] @ s[i], s[i + 1] @ s[i] @ s[i + 1])
        put("ttt_up", t[i] @ t[i + 1] @ t[i], t[i])
        put("ttt_down", t[i + 1] @ t[i] @ t[i + 1], t[i + 1])
        put("s_tt", s[i] @ t[i + 1] @ t[i], s[i + 1] @ t[i])
        put("tt_s", t[i + 1] @ t[i] @ s[i + 1], t[i + 1] @ s[i])
    return worst


def check_extended_brauer(k, epsilon: int, N: int) -> dict[str, float]:
    """Relations of the Brauer algebra extended by b, b^-1 under sigma -> eps P, tau -> Q, b -> K_1."""
    k = np.asarray(k, dtype=complex)
    n = k.shape[0]
    sp = TensorSpace.uniform(n, N)
    b = embed(k, [0], sp)
    bi = embed(inverse(k), [0], sp)
    sig = [_pair_op(epsilon * permutation_operator(n), i, N, n) for i in range(1, N)]
    tau = [_pair_op(projector_q(n), i, N, n) for i in range(1, N)]
    one = identity(sp.dim)
    out = {"b_inverse": max(residual(b @ bi, one), residual(bi @ b, one))}
    out["commute_far"] = max((max(commutator_residual(sig[j], b), commutator_residual(tau[j], b))
                              for j in range(1, N - 1)), default=0.0)
    s1, t1 = sig[0], tau[0]
    out["sbsb"] = residual(s1 @ b @ s1 @ b, b @ s1 @ b @ s1)
    out["sbtb"] = residual(s1 @ b @ t1 @ b, b @ t1 @ b @ s1)
    out["sbitbi"] = residual(s1 @ bi @ t1 @ bi, bi @ t1 @ bi @ s1)
    return out


def check_classical_centralizer(k, N: int, primed: bool = False) -> float:
    """max over i of [sigma_i, B] and [tau_i, B] with B = B^(1) (or B'^(1)) on aux (x) chain."""
    k = np.asarray(k, dtype=complex)
    n = k.shape[0]
    eps = symmetry_sign(k)
    spec = ChainSpec(RegimeParams.rational(n), N)
    charge = (b1_primed_charge if primed else b1_charge)(spec, k).full
    s, t = brauer_generators(k, eps)
    worst = 0.0
    for i in range(1, N):
        worst = max(worst, commutator_residual(_pair_op(s, i, N, n, 1), charge),
                    commutator_residual(_pair_op(t, i, N, n, 1), charge))
    return worst


# --- quantum Brauer algebra ---------------------------------------------------

@dataclass(frozen=True)
class QuantumBrauerRep:
    params: RegimeParams
    N: int
    sigma: tuple
    tau1: np.ndarray

    @property
    def q(self) -> complex:
        return self.params.q

    @property
    def z(self) -> complex:
        return self.params.q ** self.params.n


def quantum_generators(params: RegimeParams) -> tuple[np.ndarray, np.ndarray]:
    """Two-site images: sigma -> R-hat = q + U, tau_1 -> P^{t_1} M_1^-1 = Q M_1^-1."""
    n = params.n
    minv = kron(inverse(rmatrix.m_matrix(params)), identity(n))
    return rmatrix.hecke_rhat(params), projector_q(n) @ minv


def build_quantum_brauer_rep(params: RegimeParams, N: int) -> QuantumBrauerRep:
    if not params.trig:
        raise ValueError("the quantum Brauer algebra needs the trigonometric regime")
    if N < 2:
        raise ValueError("the quantum Brauer algebra needs N >= 2")
    n = params.n
    s, t = quantum_generators(params)
    return QuantumBrauerRep(params, N, tuple(_pair_op(s, i, N, n) for i in range(1, N)),
                            _pair_op(t, 1, N, n))


def check_qbrauer_relations(rep: QuantumBrauerRep, tau_commute_from: int = 3) -> dict[str, float | None]:
    """Residuals of the quantum Brauer relations with z = q^n.

    ``tau_commute_from`` is the first index i for which sigma_i tau_1 = tau_1 sigma_i is asserted;
    the i = 2 instance is reported separately as ``sigma2_tau1``.  Relations that need more
    strands than the chain has are reported as None.
    """
    q, z = rep.q, rep.z
    s, t = rep.sigma, rep.tau1
    N = rep.N
    one = identity(t.shape[0])
    out: dict[str, float | None] = {}

    def put(name, a, b):
        out[name] = max(out.get(name) or 0.0, residual(a, b))

    for i in range(N - 1):
        put("hecke", s[i] @ s[i], (q - 1 / q) * s[i] + one)
        for j in range(N - 1):
            if abs(i - j) > 1:
                put("far_ss", s[i] @ s[j], s[j] @ s[i])
    for i in range(N - 2):
        put("braid", s[i] @ s[i + 1] @ s[i], s[i + 1] @ s[i] @ s[i + 1])
    put("tau_sq", t @ t, (z - 1 / z) / (q - 1 / q) * t)
    put("sigma1_tau1", s[0] @ t, q * t)
    put("tau1_sigma1", t @ s[0], q * t)
    if N >= 3:
        put("tau_sigma2_tau", t @ s[1] @ t, z * t)
        put("sigma2_tau1", s[1] @ t, t @ s[1])
    else:
        out["tau_sigma2_tau"] = out["sigma2_tau1"] = NOT_APPLICABLE
    far = [residual(s[i - 1] @ t, t @ s[i - 1]) for i in range(tau_commute_from, N)]
    out["sigma_tau1_far"] = max(far) if far else NOT_APPLICABLE
    if N >= 4:
        zeta = s[1] @ s[2] @ s[0] @ s[1]
        zinv = inverse(zeta)
        a = z * q * zinv + zeta / (z * q)
        b = q * zinv + zeta / q
        out["zeta"] = residual(t @ a @ t @ b, b @ t @ a @ t)
    else:
        out["zeta"] = NOT_APPLICABLE
    if N < 3:
        for key in ("far_ss", "braid"):
            out.setdefault(key, NOT_APPLICABLE)
    elif N < 4:
        out.setdefault("far_ss", NOT_APPLICABLE)
    return out


def check_quantum_centralizer(params: RegimeParams, N: int, kind: Kind | str = Kind.TRIG_I,
                              sign: int = 1) -> dict[str, float]:
    """max over generators of [sigma_i, B0+-] and [tau_1, B0+-]; sites shifted past the aux space."""
    n = params.n
    ch = build_finite_charges(params, N, kind, sign)
    s, t = quantum_generators(params)
    gens = [_pair_op(s, i, N, n, 1) for i in range(1, N)] + [_pair_op(t, 1, N, n, 1)]
    return {
        "plus": max(commutator_residual(g, ch.bplus) for g in gens),
        "minus": max(commutator_residual(g, ch.bminus) for g in gens),
    }
