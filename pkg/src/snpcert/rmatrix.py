"""Rational and trigonometric gl_n R-matrices and their companions.

All constructors return operators on C^n (x) C^n with factor 1 on the left.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .tensor_core import (
    identity,
    inverse,
    kron,
    partial_transpose,
    permutation_operator,
    projector_q,
    residual,
    unit,
)

POLE_GUARD = 0.05
DEFAULT_MU = 0.37

Regime = Literal["rational", "trigonometric"]


class PoleError(ValueError):
    """Spectral parameter too close to a pole of the requested matrix."""


@dataclass(frozen=True)
class RegimeParams:
    regime: Regime
    n: int
    mu: float = DEFAULT_MU
    check_degenerate: bool = field(default=True, repr=False, compare=False)
    q: complex = field(init=False)
    rho: complex = field(init=False)

    def __post_init__(self):
        if self.regime not in ("rational", "trigonometric"):
            raise ValueError(f"unknown regime {self.regime!r}")
        if self.n < 2:
            raise ValueError("local dimension n must be >= 2")
        if self.regime == "rational":
            object.__setattr__(self, "q", 1.0 + 0j)
            object.__setattr__(self, "rho", self.n / 2 + 0j)
        else:
            q = cmath.exp(1j * self.mu)
            for k in range(1, 2 * self.n + 1):
                if self.check_degenerate and abs(q**k - 1) <= 1e-3:
                    raise ValueError(f"q = exp(i*{self.mu}) is too close to a root of unity of order {k}")
            object.__setattr__(self, "q", q)
            object.__setattr__(self, "rho", self.mu * self.n / 2 + 0j)

    @property
    def trig(self) -> bool:
        return self.regime == "trigonometric"

    @classmethod
    def rational(cls, n: int) -> "RegimeParams":
        return cls("rational", n)

    @classmethod
    def trigonometric(cls, n: int, mu: float = DEFAULT_MU) -> "RegimeParams":
        return cls("trigonometric", n, mu)


def _guard(value: complex, what: str):
    if abs(value) <= POLE_GUARD:
        raise PoleError(f"{what} = {value:.4g} is within {POLE_GUARD} of a pole")


def p_check(n: int) -> np.ndarray:
    """rho I - Q with rho = n/2."""
    return (n / 2) * identity(n * n) - projector_q(n)


def rational_R(lam: complex, n: int) -> np.ndarray:
    _guard(lam, "lambda")
    return identity(n * n) + (1j / lam) * permutation_operator(n)


def rational_Rbar(lam: complex, n: int) -> np.ndarray:
    _guard(lam, "lambda")
    return identity(n * n) + (1j / lam) * p_check(n)


def rational_Rbar_via_transpose(lam: complex, n: int) -> np.ndarray:
    """(lam + i rho)/lam * R^{t1}(-lam - i rho); equals rational_Rbar."""
    rho = n / 2
    rt = partial_transpose(rational_R(-lam - 1j * rho, n), 0, (n, n))
    return (lam + 1j * rho) / lam * rt


def u_matrix(n: int, q: complex) -> np.ndarray:
    """U = sum_{i != j} (E_ij (x) E_ji - q^{-sgn(i-j)} E_ii (x) E_jj)."""
    u = np.zeros((n * n, n * n), dtype=complex)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            u += kron(unit(n, i, j), unit(n, j, i))
            u -= q ** (-np.sign(i - j)) * kron(unit(n, i, i), unit(n, j, j))
    return u


def r_const(n: int, q: complex) -> np.ndarray:
    """Constant R_12[q] = P (q + U)."""
    return permutation_operator(n) @ (q * identity(n * n) + u_matrix(n, q))


def hecke_rhat(params: RegimeParams) -> np.ndarray:
    """R-hat = P R_12[q] = q + U."""
    n, q = params.n, params.q
    return q * identity(n * n) + u_matrix(n, q)


def trig_R(lam: complex, params: RegimeParams) -> np.ndarray:
    """2 sinh(lam + i mu) P + 2 sinh(lam) P U."""
    n, mu = params.n, params.mu
    p = permutation_operator(n)
    return 2 * cmath.sinh(lam + 1j * mu) * p + 2 * cmath.sinh(lam) * p @ u_matrix(n, params.q)


def trig_R_symmetric(lam: complex, params: RegimeParams) -> np.ndarray:
    """e^lam R_12[q] - e^-lam R_12[q^-1]^{t1 t2}."""
    n, q = params.n, params.q
    rq = r_const(n, q)
    rqi = r_const(n, 1 / q).T
    return cmath.exp(lam) * rq - cmath.exp(-lam) * rqi


def trig_Rbar(lam: complex, params: RegimeParams) -> np.ndarray:
    """e^{-lam-i rho} R_12^{t1} - e^{lam+i rho} (R_21^{-1})^{t1} with R_12 = R_12[q]."""
    n = params.n
    rc = r_const(n, params.q)
    p = permutation_operator(n)
    r21inv = inverse(p @ rc @ p)
    x = lam + 1j * params.rho
    return (cmath.exp(-x) * partial_transpose(rc, 0, (n, n))
            - cmath.exp(x) * partial_transpose(r21inv, 0, (n, n)))


def trig_Rbar_via_transpose(lam: complex, params: RegimeParams) -> np.ndarray:
    """R^{t1}(-lam - i rho) built from the sinh form."""
    n = params.n
    return partial_transpose(trig_R(-lam - 1j * params.rho, params), 0, (n, n))


def m_matrix(params: RegimeParams) -> np.ndarray:
    n = params.n
    if not params.trig:
        return identity(n)
    return np.diag([params.q ** (n - 2 * j + 1) for j in range(1, n + 1)]).astype(complex)


def R(lam: complex, params: RegimeParams) -> np.ndarray:
    return trig_R(lam, params) if params.trig else rational_R(lam, params.n)


def Rbar(lam: complex, params: RegimeParams) -> np.ndarray:
    return trig_Rbar(lam, params) if params.trig else rational_Rbar(lam, params.n)


def rhat_baxterised(lam: complex, params: RegimeParams) -> np.ndarray:
    """e^lam R-hat - e^-lam R-hat^{-1}."""
    rh = hecke_rhat(params)
    return cmath.exp(lam) * rh - cmath.exp(-lam) * inverse(rh)


def scaling_limit_check(n: int, lam: complex, mu: float = 1e-3) -> float:
    """Residual between the rescaled trigonometric R and the rational R."""
    # small mu is the point here, so the root-of-unity guard is off
    params = RegimeParams("trigonometric", n, mu, check_degenerate=False)
    # to first order in mu, trig_R(mu lam) = 2 mu lam (I + i P / lam)
    rr = trig_R(mu * lam, params) / (2 * mu * lam)
    return residual(rr, rational_R(lam, n))


# --- sample grids ------------------------------------------------------------

def near_pole(lam: complex, params: RegimeParams, guard: float = POLE_GUARD) -> bool:
    """True if lam is within ``guard`` of a singular locus of R, Rbar or their crossed forms."""
    rho = params.rho
    if params.trig:
        mu = params.mu
        shifts = (0, 1j * mu, -1j * mu, 1j * rho, -1j * rho)
        return any(abs(cmath.sinh(lam + s)) <= guard for s in shifts)
    return abs(lam) <= guard or abs(lam + 1j * rho) <= guard or abs(2 * lam + 1j * rho) <= guard


@dataclass(frozen=True)
class SampleGrid:
    """Seeded spectral parameters; every point and every pairwise sum/difference avoids poles."""

    seed: int
    points: tuple[complex, ...]

    @classmethod
    def draw(cls, params: RegimeParams, count: int, seed: int, scale: float = 1.0) -> "SampleGrid":
        rng = np.random.default_rng(seed)
        pts: list[complex] = []
        while len(pts) < count:
            lam = complex(*rng.uniform(-scale, scale, 2))
            cand = [lam] + [lam + p for p in pts] + [lam - p for p in pts] + [p - lam for p in pts]
            if not any(near_pole(c, params) for c in cand):
                pts.append(lam)
        return cls(seed, tuple(pts))

    @classmethod
    def draw_pairs(cls, params: RegimeParams, count: int, seed: int,
                   scale: float = 1.0) -> list[tuple[complex, complex]]:
        pts = cls.draw(params, 2 * count, seed, scale).points
        return list(zip(pts[::2], pts[1::2]))

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)
