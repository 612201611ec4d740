"""Finite-dimensional objects of the pointwise Kato problem.

At a point where a p-harmonic map ``u: R^n -> R^d`` has nonvanishing gradient,
only ``v = grad u / |grad u|`` (an n x d array) and ``w = hess u`` (an n x n x d
array symmetric in its first two indices) matter.  The p-harmonic equation
becomes ``d`` linear constraints on ``w`` and ``|grad |grad u||^2`` becomes the
quadratic form ``kato_objective(v, w)``.

Symmetric candidates are stored as their upper triangle, shape
``(n(n+1)/2, d)``, with pairs ``(i, j)``, ``i <= j`` in row-major order.
The *flat* coordinates used by the solvers scale the off-diagonal rows by
``sqrt(2)`` so that the Euclidean norm of the flat vector equals the Frobenius
norm of the full tensor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
import math

import numpy as np

DEFAULT_FEAS_TOL = 1e-9


class DimensionError(ValueError):
    """Array shapes do not match the problem dimensions."""


class FeasibilityError(ValueError):
    """A candidate violates the p-harmonic constraint."""

    def __init__(self, residual_norm: float, tol: float):
        super().__init__(f"constraint residual {residual_norm:.3e} exceeds tolerance {tol:.1e}")
        self.residual_norm = residual_norm
        self.tol = tol


@dataclass(frozen=True)
class Params:
    p: float
    n: int
    d: int

    def __post_init__(self):
        if not (self.p >= 1.0):
            raise ValueError(f"p must be >= 1, got {self.p}")
        for name in ("n", "d"):
            val = getattr(self, name)
            if int(val) != val or val < 1:
                raise ValueError(f"{name} must be a positive integer, got {val}")
            object.__setattr__(self, name, int(val))
        object.__setattr__(self, "p", float(self.p))

    @property
    def flat_dim(self) -> int:
        return sym_dim(self.n) * self.d


def sym_dim(n: int) -> int:
    return n * (n + 1) // 2


@lru_cache(maxsize=None)
def upper_pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((i, j) for i in range(n) for j in range(i, n))


@lru_cache(maxsize=None)
def flat_weights(n: int) -> np.ndarray:
    """Per-pair scale taking upper-triangle storage to flat coordinates."""
    wts = np.array([1.0 if i == j else math.sqrt(2.0) for i, j in upper_pairs(n)])
    wts.setflags(write=False)
    return wts


@lru_cache(maxsize=None)
def expansion(n: int, d: int) -> np.ndarray:
    """Linear map from flat coordinates to the full tensor, shape (n, n, d, D)."""
    D = sym_dim(n) * d
    E = np.zeros((n, n, d, D))
    for k, (i, j) in enumerate(upper_pairs(n)):
        scale = 1.0 if i == j else 1.0 / math.sqrt(2.0)
        for a in range(d):
            col = k * d + a
            E[i, j, a, col] = scale
            E[j, i, a, col] = scale
    E.setflags(write=False)
    return E


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GradientDirection:
    """Unit-norm n x d array; normalized on construction."""

    entries: np.ndarray

    def __post_init__(self):
        arr = np.array(self.entries, dtype=float)
        if arr.ndim != 2:
            raise DimensionError(f"gradient direction must be 2-d, got shape {arr.shape}")
        nrm = np.linalg.norm(arr)
        if not nrm > 0:
            raise ValueError("gradient direction must be nonzero")
        object.__setattr__(self, "entries", _readonly(arr / nrm))

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def d(self) -> int:
        return self.entries.shape[1]

    def __getitem__(self, idx):
        return self.entries[idx]


@dataclass(frozen=True, eq=False)
class HessianCandidate:
    """Symmetric n x n x d array held as its upper triangle."""

    upper: np.ndarray
    n: int
    unit: bool = False

    def __post_init__(self):
        arr = np.array(self.upper, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != sym_dim(self.n):
            raise DimensionError(
                f"upper storage for n={self.n} needs shape ({sym_dim(self.n)}, d), got {arr.shape}"
            )
        if self.unit:
            nrm = _frobenius_upper(arr, self.n)
            if not nrm > 0:
                raise ValueError("cannot normalize a zero Hessian candidate")
            arr = arr / nrm
        object.__setattr__(self, "upper", _readonly(arr))

    @classmethod
    def from_full(cls, full, unit: bool = False, sym_tol: float = 1e-12) -> HessianCandidate:
        full = np.asarray(full, dtype=float)
        if full.ndim != 3 or full.shape[0] != full.shape[1]:
            raise DimensionError(f"full Hessian must have shape (n, n, d), got {full.shape}")
        asym = np.max(np.abs(full - full.transpose(1, 0, 2)), initial=0.0)
        if asym > sym_tol * max(1.0, np.max(np.abs(full), initial=0.0)):
            raise ValueError(f"Hessian candidate is not symmetric (defect {asym:.3e})")
        n = full.shape[0]
        rows = [0.5 * (full[i, j] + full[j, i]) for i, j in upper_pairs(n)]
        return cls(np.array(rows), n, unit=unit)

    @classmethod
    def from_flat(cls, flat, n: int, d: int, unit: bool = False) -> HessianCandidate:
        flat = np.asarray(flat, dtype=float).reshape(sym_dim(n), d)
        return cls(flat / flat_weights(n)[:, None], n, unit=unit)

    @property
    def d(self) -> int:
        return self.upper.shape[1]

    def full(self) -> np.ndarray:
        out = np.empty((self.n, self.n, self.d))
        for k, (i, j) in enumerate(upper_pairs(self.n)):
            out[i, j] = self.upper[k]
            out[j, i] = self.upper[k]
        return out

    def flat(self) -> np.ndarray:
        return (self.upper * flat_weights(self.n)[:, None]).ravel()

    def __getitem__(self, idx):
        i, j, a = idx
        if i > j:
            i, j = j, i
        k = i * self.n - i * (i - 1) // 2 + (j - i)
        return self.upper[k, a]

    def norm(self) -> float:
        return _frobenius_upper(self.upper, self.n)

    def scaled(self, t: float) -> HessianCandidate:
        return HessianCandidate(self.upper * t, self.n)


def _frobenius_upper(upper: np.ndarray, n: int) -> float:
    # off-diagonal entries appear twice in the full tensor
    return float(np.sqrt(np.sum((upper * flat_weights(n)[:, None]) ** 2)))


def _check_shapes(v: GradientDirection, w: HessianCandidate):
    if v.n != w.n or v.d != w.d:
        raise DimensionError(f"v has shape ({v.n}, {v.d}) but w is for (n={w.n}, d={w.d})")


def constraint_residual(v: GradientDirection, w: HessianCandidate, p: float) -> np.ndarray:
    """Residual of the flat p-harmonic system, one entry per target component.

    ``r[a] = sum_i w[i,i,a] + (p-2) * sum_{i,j,b} v[i,a] v[j,b] w[i,j,b]``.
    """
    _check_shapes(v, w)
    W = w.full()
    V = v.entries
    trace = np.einsum("iia->a", W)
    coupling = np.einsum("ia,jb,ijb->a", V, V, W)
    return trace + (p - 2.0) * coupling


def kato_objective(v: GradientDirection, w: HessianCandidate) -> float:
    """``sum_i (sum_{j,a} v[j,a] w[i,j,a])^2``, i.e. |grad|grad u||^2 at unit gradient."""
    _check_shapes(v, w)
    t = np.einsum("ja,ija->i", v.entries, w.full())
    return float(t @ t)


@dataclass(frozen=True, eq=False)
class Witness:
    """Feasible pair certifying ``kappa(p, n, d) <= 1 / ratio``."""

    v: GradientDirection
    w: HessianCandidate
    p: float
    ratio: float
    constraint_residual_norm: float
    feas_tol: float = field(default=DEFAULT_FEAS_TOL)

    @property
    def kappa_bound(self) -> float:
        return 1.0 / self.ratio

    def recompute(self) -> tuple[float, float]:
        """Fresh (ratio, residual norm) from the stored pair."""
        return (
            kato_objective(self.v, self.w),
            float(np.linalg.norm(constraint_residual(self.v, self.w, self.p))),
        )

    def to_json(self) -> dict:
        return {
            "p": float(self.p),
            "n": self.v.n,
            "d": self.v.d,
            "v": self.v.entries.tolist(),
            "w_upper": self.w.upper.tolist(),
            "w_pairs": [list(ij) for ij in upper_pairs(self.v.n)],
            "ratio": self.ratio,
            "kappa_bound": self.kappa_bound,
            "constraint_residual_norm": self.constraint_residual_norm,
        }


def make_witness(v: GradientDirection, w: HessianCandidate, p: float,
                 tol: float = DEFAULT_FEAS_TOL) -> Witness:
    if w.norm() == 0.0:
        raise ValueError("witness needs a nonzero Hessian candidate")
    wu = HessianCandidate(w.upper, w.n, unit=True)
    res = float(np.linalg.norm(constraint_residual(v, wu, p)))
    if res > tol:
        raise FeasibilityError(res, tol)
    return Witness(v, wu, float(p), kato_objective(v, wu), res, tol)


# Flat-coordinate operators, vectorized over leading batch axes of ``V``.

def constraint_matrix(V: np.ndarray, p: float) -> np.ndarray:
    """Constraint operator in flat coordinates, shape (..., d, D)."""
    V = np.asarray(V, dtype=float)
    n, d = V.shape[-2:]
    E = expansion(n, d)
    trace_part = np.einsum("iiam->am", E)
    coupling = np.einsum("...ia,...jb,ijbm->...am", V, V, E)
    return trace_part + (p - 2.0) * coupling


def objective_matrix(V: np.ndarray) -> np.ndarray:
    """Operator G with ``kato_objective = |G y|^2`` in flat coordinates, shape (..., n, D)."""
    V = np.asarray(V, dtype=float)
    n, d = V.shape[-2:]
    return np.einsum("...ja,ijam->...im", V, expansion(n, d))
