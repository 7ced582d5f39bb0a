"""Dense complex matrix algebra on tensor products of small local spaces.

Every operator in the package is a square ``complex128`` ndarray.  Multi-site
operators act on a :class:`TensorSpace` whose factor 0 is the leftmost
Kronecker factor (the auxiliary space when one is present), so ``tr_0`` is a
trace over leading blocks.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np
import scipy.linalg

PIVOT_THRESHOLD = 1e-12


class SingularMatrixError(np.linalg.LinAlgError):
    """Raised when LU factorisation meets a pivot below threshold."""

    def __init__(self, smallest_pivot: float):
        super().__init__(f"matrix is singular: smallest pivot {smallest_pivot:.3e}")
        self.smallest_pivot = smallest_pivot


@dataclass(frozen=True)
class TensorSpace:
    factor_dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "factor_dims", tuple(int(d) for d in self.factor_dims))
        if not self.factor_dims or any(d < 1 for d in self.factor_dims):
            raise ValueError(f"invalid factor dims {self.factor_dims}")

    @classmethod
    def uniform(cls, n: int, count: int) -> "TensorSpace":
        return cls((n,) * count)

    @property
    def dim(self) -> int:
        return prod(self.factor_dims)

    def __len__(self) -> int:
        return len(self.factor_dims)


def _space(space) -> TensorSpace:
    return space if isinstance(space, TensorSpace) else TensorSpace(tuple(space))


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex)


def unit(n: int, i: int, j: int) -> np.ndarray:
    """Matrix unit E_ij (0-based indices)."""
    e = np.zeros((n, n), dtype=complex)
    e[i, j] = 1.0
    return e


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(mats: Sequence) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def permutation_operator(n: int) -> np.ndarray:
    """P = sum_ab E_ab (x) E_ba on C^n (x) C^n."""
    p = np.zeros((n * n, n * n), dtype=complex)
    for a in range(n):
        for b in range(n):
            p[a * n + b, b * n + a] = 1.0
    return p


def projector_q(n: int) -> np.ndarray:
    """Q = sum_ab E_ab (x) E_ab, the rank-one operator with Q^2 = nQ."""
    v = np.zeros(n * n, dtype=complex)
    v[[a * n + a for a in range(n)]] = 1.0
    return np.outer(v, v)


def _check_sites(sites: Sequence[int], nf: int) -> list[int]:
    sites = [int(s) for s in sites]
    if len(set(sites)) != len(sites):
        raise ValueError(f"repeated site in {sites}")
    for s in sites:
        if not 0 <= s < nf:
            raise IndexError(f"site {s} out of range for {nf} factors")
    return sites


def embed(op, sites: Sequence[int], space) -> np.ndarray:
    """Lift ``op`` acting on the listed factors (in that order) to the full space."""
    space = _space(space)
    dims = space.factor_dims
    nf = len(dims)
    sites = _check_sites(sites, nf)
    op = np.asarray(op, dtype=complex)
    dsel = prod(dims[s] for s in sites)
    if op.shape != (dsel, dsel):
        raise ValueError(f"operator shape {op.shape} does not match sites {sites} of {dims}")
    rest = [f for f in range(nf) if f not in sites]
    drest = prod(dims[f] for f in rest)
    big = np.kron(op, np.eye(drest, dtype=complex))
    order = sites + rest
    if order == list(range(nf)):
        return big
    shape = [dims[f] for f in order]
    t = big.reshape(shape + shape)
    inv = np.argsort(order)
    t = t.transpose(list(inv) + [nf + i for i in inv])
    d = space.dim
    return t.reshape(d, d)


def apply_local(op, sites: Sequence[int], space, x, side: str = "left") -> np.ndarray:
    """``embed(op, sites, space) @ x`` (or ``x @ ...`` for side="right") without building the embedding."""
    space = _space(space)
    dims = space.factor_dims
    nf = len(dims)
    sites = _check_sites(sites, nf)
    op = np.asarray(op, dtype=complex)
    x = np.asarray(x, dtype=complex)
    d = space.dim
    k = len(sites)
    sel = [dims[s] for s in sites]
    opt = op.reshape(sel + sel)
    if side == "left":
        t = x.reshape(list(dims) + [d])
        # contract op's input indices with the chosen row factors
        out = np.tensordot(opt, t, axes=(list(range(k, 2 * k)), sites))
        rest = [f for f in range(nf) if f not in sites]
        order = sites + rest
        perm = list(np.argsort(order)) + [nf]
        return out.transpose(perm).reshape(d, d)
    if side == "right":
        t = x.reshape([d] + list(dims))
        out = np.tensordot(t, opt, axes=([1 + s for s in sites], list(range(k))))
        rest = [f for f in range(nf) if f not in sites]
        order = [None] + rest + sites
        pos = {f: i for i, f in enumerate(order)}
        perm = [0] + [pos[f] for f in range(nf)]
        return out.transpose(perm).reshape(d, d)
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")


def factor_permutation(perm: Sequence[int], space) -> np.ndarray:
    """Operator sending factor ``k`` of a product vector to position ``perm[k]``."""
    space = _space(space)
    dims = space.factor_dims
    nf = len(dims)
    perm = list(perm)
    if sorted(perm) != list(range(nf)):
        raise ValueError(f"{perm} is not a permutation of {nf} factors")
    d = space.dim
    eye = np.eye(d, dtype=complex).reshape(list(dims) + [d])
    # column = input basis vector, rows reordered so output factor perm[k] = input factor k
    src = [0] * nf
    for k, p in enumerate(perm):
        src[p] = k
    out = eye.transpose(src + [nf])
    out_dims = [dims[s] for s in src]
    return out.reshape(prod(out_dims), d)


def partial_transpose(a, factor: int, space) -> np.ndarray:
    space = _space(space)
    dims = space.factor_dims
    nf = len(dims)
    _check_sites([factor], nf)
    a = np.asarray(a, dtype=complex)
    t = a.reshape(list(dims) * 2)
    axes = list(range(2 * nf))
    axes[factor], axes[nf + factor] = nf + factor, factor
    return t.transpose(axes).reshape(a.shape)


def partial_trace(a, factor: int, space) -> np.ndarray:
    space = _space(space)
    dims = space.factor_dims
    nf = len(dims)
    _check_sites([factor], nf)
    a = np.asarray(a, dtype=complex)
    t = a.reshape(list(dims) * 2)
    r = np.trace(t, axis1=factor, axis2=nf + factor)
    d = space.dim // dims[factor]
    return r.reshape(d, d)


def aux_blocks(a, n: int) -> np.ndarray:
    """Split an operator on C^n (x) W into the n x n array of blocks acting on W."""
    a = np.asarray(a, dtype=complex)
    d = a.shape[0] // n
    return a.reshape(n, d, n, d).transpose(0, 2, 1, 3)


def from_aux_blocks(blocks) -> np.ndarray:
    blocks = np.asarray(blocks)
    n, _, d, _ = blocks.shape
    return blocks.transpose(0, 2, 1, 3).reshape(n * d, n * d)


def inverse(a) -> np.ndarray:
    """Inverse by LU with partial pivoting; raises on a pivot below threshold."""
    a = np.asarray(a, dtype=complex)
    scale = np.max(np.abs(a)) if a.size else 0.0
    if scale == 0.0:
        raise SingularMatrixError(0.0)
    with warnings.catch_warnings():
        # an exactly zero pivot is reported through SingularMatrixError below
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=True)
    pivots = np.abs(np.diag(lu))
    smallest = float(pivots.min())
    if smallest <= PIVOT_THRESHOLD * scale:
        raise SingularMatrixError(smallest)
    return scipy.linalg.lu_solve((lu, piv), np.eye(a.shape[0], dtype=complex))


def maxabs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def residual(a, b) -> float:
    """max|a - b| / (1 + max(max|a|, max|b|))."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return maxabs(a - b) / (1.0 + max(maxabs(a), maxabs(b)))


def proportionality_residual(a) -> tuple[complex, float]:
    """Return (c, r) where c = tr(a)/dim and r = residual(a, c I)."""
    a = np.asarray(a, dtype=complex)
    c = complex(np.trace(a)) / a.shape[0]
    return c, residual(a, c * np.eye(a.shape[0]))


def fitted_residual(a, b) -> tuple[complex, float]:
    """Least-squares scalar s with a ~ s b; returns (s, residual(a, s b))."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    den = np.vdot(b, b)
    s = complex(np.vdot(b, a) / den) if abs(den) > 0 else 0j
    return s, residual(a, s * b)


def comm(a, b) -> np.ndarray:
    return a @ b - b @ a


def qcomm(a, b, q) -> np.ndarray:
    """[a, b]_q = q a b - q^-1 b a."""
    return q * (a @ b) - (b @ a) / q


def mprod(mats: Sequence[np.ndarray]) -> np.ndarray:
    out = mats[0]
    for m in mats[1:]:
        out = out @ m
    return out
