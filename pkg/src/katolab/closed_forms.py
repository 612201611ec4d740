"""Exactly known Kato constants, used as oracles for the numerical search."""

from __future__ import annotations

from dataclasses import dataclass
import enum
import math

import numpy as np

from .tensor_core import GradientDirection, HessianCandidate, Params, Witness, make_witness


class Source(enum.Enum):
    P2 = "p=2"
    D1 = "d=1"
    N2 = "n=2"
    REDUCED = "d>=n reduction"


@dataclass(frozen=True)
class ClosedForm:
    value: float
    # REDUCED when d was lowered to n first; ``regime`` then names the formula used
    source: Source
    regime: Source


def critical_exponent(n: int) -> float:
    """Exponent where the scalar constant 1 + (p-1)^2/(n-1) reaches its cap 2."""
    if n < 2:
        raise ValueError(f"critical exponent needs n >= 2, got {n}")
    return 1.0 + math.sqrt(n - 1)


def scalar_kappa(p: float, n: int) -> float:
    """kappa(p, n, 1) = min(2, 1 + (p-1)^2/(n-1))."""
    # decide the regime on p itself so the cap is exact at the critical exponent
    if p >= critical_exponent(n):
        return 2.0
    return min(2.0, 1.0 + (p - 1.0) ** 2 / (n - 1))


def planar_kappa(p: float) -> float:
    """kappa(p, 2, d) = min(2, 1 + (p-1)^2) for every d."""
    return scalar_kappa(p, 2)


def kappa_closed(params: Params) -> ClosedForm | None:
    p, n = params.p, params.n
    d = min(params.d, n)

    def form(value, regime):
        return ClosedForm(value, Source.REDUCED if d != params.d else regime, regime)

    if p == 1.0:
        return form(1.0, Source.D1)
    if n == 1:
        # (1 + (p-2) v v^T) w = 0 forces w = 0 for p > 1: no admissible Hessian
        return None
    if p == 2.0:
        return form(n / (n - 1), Source.P2)
    if d == 1:
        return form(scalar_kappa(p, n), Source.D1)
    if n == 2:
        return form(planar_kappa(p), Source.N2)
    return None


GAP_P = 1.0 + math.sqrt(2.0)
GAP_BOUND = (25.0 + 2.0 * math.sqrt(2.0)) / 14.0


def gap_example_data() -> tuple[np.ndarray, np.ndarray]:
    """Gradient and Hessian of the explicit n=3, d=2 example at p = 1 + sqrt(2)."""
    r2 = math.sqrt(2.0)
    alpha, beta, gamma = -15.0 + 28.0 * r2, 1.0 + 14.0 * r2, -17.0
    grad = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    hess = np.zeros((3, 3, 2))
    hess[0, 0] = (alpha, 0.0)
    hess[0, 1] = hess[1, 0] = (0.0, beta)
    hess[1, 1] = (gamma, 0.0)
    hess[2, 2] = (gamma, 0.0)
    return grad, hess


def gap_certificate_63(tol: float = 1e-12) -> Witness:
    """Witness showing kappa(1+sqrt2, 3, 2) <= (25 + 2 sqrt2)/14 < 2 = kappa(1+sqrt2, 3, 1)."""
    grad, hess = gap_example_data()
    return make_witness(GradientDirection(grad), HessianCandidate.from_full(hess), GAP_P, tol)
