"""Boundary K-matrices: rational constant solutions, the classified
trigonometric solutions (i)-(iv), congruence normal forms and
reflection-equation residuals.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Callable

import numpy as np

from . import rmatrix
from .rmatrix import RegimeParams
from .tensor_core import fitted_residual, identity, inverse, kron, residual


class Kind(str, Enum):
    RAT_SYM = "rat-sym"
    RAT_ANTISYM = "rat-antisym"
    TRIG_I = "i"
    TRIG_II = "ii"
    TRIG_III = "iii"
    TRIG_IV = "iv"
    CUSTOM = "custom"


TRIG_KINDS = (Kind.TRIG_I, Kind.TRIG_II, Kind.TRIG_III, Kind.TRIG_IV)


class ParityError(ValueError):
    pass


class CongruenceError(ValueError):
    pass


@dataclass(frozen=True)
class KSolution:
    """A boundary matrix generator lam -> K(lam)."""

    kind: Kind
    n: int
    eval: Callable[[complex], np.ndarray]
    sign: int = 1  # Kt = sign*K for rational kinds; the +/- branch for kind (ii)
    constant: bool = True
    label: str = ""

    def __call__(self, lam: complex) -> np.ndarray:
        return self.eval(lam)

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        if self.kind == Kind.TRIG_II:
            return f"ii{'+' if self.sign > 0 else '-'}"
        return self.kind.value


def constant_k(k, kind: Kind = Kind.CUSTOM, label: str = "") -> KSolution:
    k = np.array(k, dtype=complex)
    if np.allclose(k, k.T, atol=0):
        sign = 1
    elif np.allclose(k, -k.T, atol=0):
        sign = -1
    else:
        sign = 0
    if kind == Kind.CUSTOM and sign and np.allclose(k.imag, 0):
        kind = Kind.RAT_SYM if sign > 0 else Kind.RAT_ANTISYM
    return KSolution(kind, k.shape[0], lambda lam, _k=k: _k, sign=sign, label=label)


def rational_k(k) -> KSolution:
    """Constant rational boundary; requires K^t = +-K and K invertible."""
    k = np.array(k, dtype=complex)
    if np.array_equal(k, k.T):
        kind, sign = Kind.RAT_SYM, 1
    elif np.array_equal(k, -k.T):
        kind, sign = Kind.RAT_ANTISYM, -1
        if k.shape[0] % 2:
            raise ParityError("no invertible antisymmetric matrix exists for odd n")
    else:
        raise ValueError("rational K must be symmetric or antisymmetric")
    inverse(k)
    return KSolution(kind, k.shape[0], lambda lam, _k=k: _k, sign=sign)


def random_rational_k(n: int, sign: int, rng: np.random.Generator) -> np.ndarray:
    """Entries uniform in [-1, 1], (anti)symmetrised, redrawn while |det| < 1e-6."""
    if sign < 0 and n % 2:
        raise ParityError("no invertible antisymmetric matrix exists for odd n")
    while True:
        a = rng.uniform(-1.0, 1.0, (n, n))
        k = a + a.T if sign > 0 else a - a.T
        if abs(np.linalg.det(k)) >= 1e-6:
            return k


def random_invertible(n: int, rng: np.random.Generator) -> np.ndarray:
    while True:
        a = rng.uniform(-1.0, 1.0, (n, n))
        if abs(np.linalg.det(a)) >= 1e-3:
            return a


def rational_special_cases(n: int) -> list[tuple[str, np.ndarray]]:
    """Identity, the anti-diagonal unit matrix and, for even n, (-1)^a i delta_{a,n+1-b}."""
    out = [("identity", identity(n))]
    anti = np.zeros((n, n), dtype=complex)
    for a in range(n):
        anti[a, n - 1 - a] = 1.0
    out.append(("antidiagonal", anti))
    if n % 2 == 0:
        alt = np.zeros((n, n), dtype=complex)
        for a in range(1, n + 1):
            alt[a - 1, n - a] = (-1) ** a * 1j
        out.append(("alternating", alt))
    return out


# --- normal forms -----------------------------------------------------------

def g_plus(p: int, q: int) -> np.ndarray:
    if p < 0 or q < 0 or p + q < 1:
        raise ValueError("need p, q >= 0 and p + q >= 1")
    return np.diag([1.0] * p + [-1.0] * q).astype(complex)


def g_minus(n: int) -> np.ndarray:
    if n % 2:
        raise ParityError("G^- exists only for even n")
    return np.kron(np.eye(n // 2), np.array([[0, 1], [-1, 0]])).astype(complex)


@dataclass(frozen=True)
class CongruenceResult:
    U: np.ndarray
    G: np.ndarray
    epsilon: int
    signature: tuple[int, int] | None

    def residual(self, k) -> float:
        return residual(self.U @ np.asarray(k) @ self.U.T, self.G)


def congruence_normal_form(k, epsilon: int) -> CongruenceResult:
    """Real invertible U with U K U^t = G^epsilon."""
    k = np.asarray(k)
    if np.iscomplexobj(k):
        if np.max(np.abs(k.imag)) > 0:
            raise CongruenceError("K must be real")
        k = k.real
    k = np.array(k, dtype=float)
    n = k.shape[0]
    if k.shape != (n, n):
        raise CongruenceError("K must be square")
    if epsilon not in (1, -1):
        raise CongruenceError("epsilon must be +1 or -1")
    if not np.allclose(k.T, epsilon * k, rtol=0, atol=1e-12 * max(1.0, np.max(np.abs(k)))):
        raise CongruenceError("symmetry type mismatch: K^t != epsilon K")
    if abs(np.linalg.det(k)) <= 1e-12 * max(1.0, np.max(np.abs(k))) ** n:
        raise CongruenceError("K is singular")
    if epsilon > 0:
        return _symmetric_congruence(k)
    return _skew_congruence(k)


def _symmetric_congruence(k: np.ndarray) -> CongruenceResult:
    n = k.shape[0]
    a = k.copy()
    u = np.eye(n)
    tol = 1e-10 * np.max(np.abs(k))

    def apply(e):
        nonlocal a, u
        a = e @ a @ e.T
        u = e @ u

    for col in range(n):
        diag = np.abs(np.diag(a)[col:])
        if diag.max() <= tol:
            # every remaining diagonal entry vanishes: add row j to row i
            sub = np.abs(a[col:, col:])
            i, j = np.unravel_index(np.argmax(sub), sub.shape)
            if sub[i, j] <= tol:
                raise CongruenceError("K is singular")
            e = np.eye(n)
            e[col + i, col + j] += 1.0
            apply(e)
            diag = np.abs(np.diag(a)[col:])
        piv = col + int(np.argmax(diag))
        if piv != col:
            e = np.eye(n)
            e[[col, piv]] = e[[piv, col]]
            apply(e)
        e = np.eye(n)
        e[col + 1:, col] = -a[col + 1:, col] / a[col, col]
        apply(e)
    d = np.diag(a)
    apply(np.diag(1.0 / np.sqrt(np.abs(d))))
    signs = np.sign(np.diag(a))
    order = np.argsort(-signs, kind="stable")
    apply(np.eye(n)[order])
    p = int(np.sum(signs > 0))
    return CongruenceResult(u, g_plus(p, n - p), 1, (p, n - p))


def _skew_congruence(k: np.ndarray) -> CongruenceResult:
    n = k.shape[0]
    if n % 2:
        raise CongruenceError("odd-dimensional antisymmetric K is singular")

    def omega(x, y):
        return x @ k @ y

    remaining = [row for row in np.eye(n)]
    rows = []
    while remaining:
        x = remaining.pop(0)
        vals = [abs(omega(x, y)) for y in remaining]
        if not vals or max(vals) <= 1e-12:
            raise CongruenceError("K is singular")
        y = remaining.pop(int(np.argmax(vals)))
        y = y / omega(x, y)
        remaining = [z - omega(z, y) * x + omega(z, x) * y for z in remaining]
        rows += [x, y]
    u = np.array(rows)
    return CongruenceResult(u, g_minus(n), -1, None)


# --- trigonometric classification -----------------------------------------

def _qpow(params: RegimeParams, x: float) -> complex:
    """q^x = exp(i mu x) on the principal branch."""
    return cmath.exp(1j * params.mu * x)


def eps_i(n: int, i: int) -> complex:
    """sqrt((-1)^{i n}) with sqrt(1) = 1, sqrt(-1) = i (1-based i)."""
    return 1.0 + 0j if (i * n) % 2 == 0 else 1j


def _kind2_parts(params: RegimeParams, swap_diag: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Upper (e^lam) and lower (e^-lam) matrices of solution (ii), without prefactors."""
    n, q = params.n, params.q
    d_up, d_low = 1 / (1 + q), q / (q + 1)
    if swap_diag:
        d_up, d_low = d_low, d_up
    up = np.zeros((n, n), dtype=complex)
    low = np.zeros((n, n), dtype=complex)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            e = eps_i(n, i) * eps_i(n, j)
            if i == j:
                up[i - 1, i - 1] = d_up * e
                low[i - 1, i - 1] = d_low * e
            elif i < j:
                up[i - 1, j - 1] = e
            else:
                low[i - 1, j - 1] = e
    return up, low


def _check_parity(kind: Kind, n: int):
    if kind in (Kind.TRIG_III, Kind.TRIG_IV) and n % 2:
        raise ParityError(f"kind ({kind.value}) requires even n")


def trig_k(kind: Kind | str, lam: complex, params: RegimeParams, sign: int = 1) -> np.ndarray:
    kind = Kind(kind)
    n = params.n
    _check_parity(kind, n)
    if kind == Kind.TRIG_I:
        return identity(n)
    if kind == Kind.TRIG_II:
        up, low = _kind2_parts(params)
        norm = _qpow(params, 0.5) + _qpow(params, -0.5)
        return norm * (cmath.exp(lam) * _qpow(params, n / 4) * up
                       + sign * cmath.exp(-lam) * _qpow(params, -n / 4) * low)
    if kind == Kind.TRIG_III:
        g = np.zeros((n, n), dtype=complex)
        g[0, n - 1] = cmath.exp(2 * lam) * _qpow(params, (n - 1) / 2)
        g[n - 1, 0] = -cmath.exp(-2 * lam) * _qpow(params, -(n - 1) / 2)
        for i in range(1, (n - 2) // 2 + 1):
            g[2 * i - 1, 2 * i] = _qpow(params, 0.5)
            g[2 * i, 2 * i - 1] = -_qpow(params, -0.5)
        return g
    if kind == Kind.TRIG_IV:
        return g_minus_q(params)
    raise ValueError(f"{kind} is not a trigonometric kind")


def g_minus_q(params: RegimeParams) -> np.ndarray:
    """Solution (iv): sum_i q^1/2 E_{2i-1,2i} - q^-1/2 E_{2i,2i-1}."""
    n = params.n
    if n % 2:
        raise ParityError("G_q^- requires even n")
    g = np.zeros((n, n), dtype=complex)
    for i in range(n // 2):
        g[2 * i, 2 * i + 1] = _qpow(params, 0.5)
        g[2 * i + 1, 2 * i] = -_qpow(params, -0.5)
    return g


def trig_solution(kind: Kind | str, params: RegimeParams, sign: int = 1) -> KSolution:
    kind = Kind(kind)
    _check_parity(kind, params.n)
    const = kind in (Kind.TRIG_I, Kind.TRIG_IV)
    return KSolution(kind, params.n, lambda lam: trig_k(kind, lam, params, sign),
                     sign=sign if kind == Kind.TRIG_II else 1, constant=const)


def dominant_degree(kind: Kind) -> int:
    return {Kind.TRIG_I: 0, Kind.TRIG_II: 1, Kind.TRIG_III: 2, Kind.TRIG_IV: 0}[Kind(kind)]


def k_limits(kind: Kind | str, params: RegimeParams, sign: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """(K+, K-): coefficients of the dominant exponentials as lam -> +-inf."""
    kind = Kind(kind)
    n = params.n
    _check_parity(kind, n)
    if kind in (Kind.TRIG_I, Kind.TRIG_IV):
        k = trig_k(kind, 0.0, params)
        return k, k.copy()
    if kind == Kind.TRIG_II:
        up, low = _kind2_parts(params)
        norm = _qpow(params, 0.5) + _qpow(params, -0.5)
        return norm * _qpow(params, n / 4) * up, sign * norm * _qpow(params, -n / 4) * low
    kp = np.zeros((n, n), dtype=complex)
    km = np.zeros((n, n), dtype=complex)
    kp[0, n - 1] = _qpow(params, (n - 1) / 2)
    km[n - 1, 0] = -_qpow(params, -(n - 1) / 2)
    return kp, km


def scaling_limit_k(kind: Kind | str, n: int, sign: int = 1, mu: float = 1e-4) -> np.ndarray:
    """trig_k at small mu and lam = 0, normalised to unit max entry."""
    params = RegimeParams("trigonometric", n, mu, check_degenerate=False)
    k = trig_k(kind, 0.0, params, sign)
    return k / np.max(np.abs(k))


# --- reflection equation ---------------------------------------------------

def reflection_residual(k1: np.ndarray, k2: np.ndarray, r: np.ndarray, rbar: np.ndarray) -> float:
    n = k1.shape[0]
    one = identity(n)
    a = kron(k1, one)
    b = kron(one, k2)
    return residual(r @ a @ rbar @ b, b @ rbar @ a @ r)


def check_reflection(k: KSolution | Callable, params: RegimeParams, lam1: complex, lam2: complex) -> float:
    return reflection_residual(k(lam1), k(lam2),
                               rmatrix.R(lam1 - lam2, params), rmatrix.Rbar(lam1 + lam2, params))


def gsym_plus(kind: Kind | str, lam: complex, params: RegimeParams, reading: str = "printed") -> tuple[np.ndarray, int]:
    """G^+(lam, q) and sigma of the symmetric decomposition.

    ``reading="corrected"`` uses 1/(1+q) on the diagonal of solution (ii), which is
    the coefficient of the e^lam part of the solution itself.
    """
    kind = Kind(kind)
    n = params.n
    _check_parity(kind, n)
    if kind == Kind.TRIG_I:
        return identity(n) / 2, 1
    if kind == Kind.TRIG_II:
        up, _ = _kind2_parts(params, swap_diag=(reading == "printed"))
        return cmath.exp(lam) * _qpow(params, n / 4) * up, 0
    if kind == Kind.TRIG_III:
        g = np.zeros((n, n), dtype=complex)
        g[0, n - 1] = cmath.exp(2 * lam) * _qpow(params, (n - 1) / 2)
        for i in range(1, (n - 2) // 2 + 1):
            g[2 * i - 1, 2 * i] = _qpow(params, 0.5)
        return g, -1
    g = np.zeros((n, n), dtype=complex)
    for i in range(n // 2):
        g[2 * i, 2 * i + 1] = _qpow(params, 0.5)
    return g, -1


def gsym_decomposition_check(kind: Kind | str, lam: complex, params: RegimeParams, sign: int = 1,
                             reading: str = "printed") -> tuple[complex, float]:
    """Fit G(lam) ~ s (G^+(lam,q) + sigma G^+(-lam,q^-1)^t); returns (s, residual)."""
    kind = Kind(kind)
    gp, sigma = gsym_plus(kind, lam, params, reading)
    if kind == Kind.TRIG_II:
        sigma = sign
    inv_params = RegimeParams("trigonometric", params.n, -params.mu, check_degenerate=False)
    gm, _ = gsym_plus(kind, -lam, inv_params, reading)
    return fitted_residual(trig_k(kind, lam, params, sign), gp + sigma * gm.T)


def dd_dressing_check(d: np.ndarray, k: KSolution, params: RegimeParams,
                      lam1: complex, lam2: complex) -> dict[str, float]:
    """Reflection residuals of D G D and D G D^t."""
    d = np.asarray(d, dtype=complex)
    inverse(d)
    out = {}
    for reading, right in (("DGD", d), ("DGDt", d.T)):
        out[reading] = check_reflection(lambda lam: d @ k(lam) @ right, params, lam1, lam2)
    return out


# --- custom matrix file ------------------------------------------------------

def load_k_file(path: str | Path) -> np.ndarray:
    """Read rows of whitespace-separated ``re,im`` pairs (``re`` alone is allowed)."""
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        row = []
        for tok in line.split():
            parts = tok.split(",")
            if len(parts) == 1:
                row.append(complex(float(parts[0]), 0.0))
            elif len(parts) == 2:
                row.append(complex(float(parts[0]), float(parts[1])))
            else:
                raise ValueError(f"bad matrix entry {tok!r}")
        rows.append(row)
    if not rows or any(len(r) != len(rows) for r in rows):
        raise ValueError(f"{path}: matrix must be square and non-empty")
    m = np.array(rows, dtype=complex)
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{path}: non-finite entry")
    return m


def dump_k_file(k, path: str | Path):
    k = np.asarray(k, dtype=complex)
    lines = [" ".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in row) for row in k]
    Path(path).write_text("\n".join(lines) + "\n")
