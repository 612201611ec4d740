"""Explicit constants behind the regularity windows for maps B^3 -> S^3.

The chain is: extension constant ``C_HL(p) = 1 / ((4-p) V_p)``, spherical
Poincare constants, the radial trace constant ``C_T(p, alpha)`` minimized in
``alpha``, and ``C_ext = C_T * C_HL``.  A non-constant minimizing tangent map
needs ``1/(3-p) <= C_ext(p)``, which gives the near-3 window ``[3 - eps3, 3]``.
The near-2 window comes from the sign of the two coefficients of the combined
integral inequality.
"""

from __future__ import annotations

from dataclasses import dataclass
import enum
import math
import warnings

import numpy as np
from scipy import integrate
from scipy.optimize import brentq

DEFAULT_QUAD_TOL = 1e-13
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class QuadratureError(RuntimeError):
    pass


class ConsistencyError(RuntimeError):
    pass


class RangeWarning(UserWarning):
    pass


def adaptive_quad(f, a: float, b: float, tol: float, limit: int = 200) -> tuple[float, float]:
    """Adaptive Gauss-Kronrod quadrature with absolute tolerance ``tol``.

    Raises QuadratureError when the error estimate cannot be brought below ``tol``.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(f, a, b, epsabs=tol, epsrel=0.0, limit=limit, full_output=1)
    value, err = out[0], out[1]
    if len(out) > 3 or not err <= tol:
        msg = out[3] if len(out) > 3 else ""
        raise QuadratureError(f"quadrature on [{a}, {b}] reached error {err:.2e} > {tol:.1e}: {msg}")
    return float(value), float(err)


def v_p(p: float, tol: float = DEFAULT_QUAD_TOL) -> tuple[float, float]:
    """``V_p = int_0^1 t^3 (1+t)^(-p) dt`` with its error bound."""
    if p < 0:
        raise ValueError(f"V_p needs p >= 0, got {p}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    return adaptive_quad(lambda t: t**3 * (1.0 + t) ** (-p), 0.0, 1.0, tol)


def c_hl(p: float, tol: float = DEFAULT_QUAD_TOL) -> float:
    if not 1.0 < p < 4.0:
        raise ValueError(f"C_HL is defined for 1 < p < 4, got {p}")
    return 1.0 / ((4.0 - p) * v_p(p, tol)[0])


def c_hl_simple(p: float) -> float:
    return 2.0 ** (p + 2.0) / (4.0 - p)


def c_p_scalar(p: float) -> float:
    return p**p * math.sin(math.pi / p) ** p / (2.0**p * (p - 1.0))


def c_p(p: float) -> float:
    return p**p * math.sin(math.pi / p) ** p / (4.0 * (p - 1.0))


def c_t(p: float, alpha: float) -> float:
    """Trace constant for the radial interpolation ``|x|^alpha u + (1-|x|^alpha) ubar``."""
    return 2.0 ** ((p - 2.0) / 2.0) * (1.0 + alpha**p * c_p(p)) / (3.0 + p * (alpha - 1.0))


def golden_section_min(f, lo: float, hi: float, tol: float = 1e-10, max_iter: int = 200):
    """Minimizer of a unimodal ``f`` on [lo, hi]; returns the final bracket (a, b)."""
    a, b = lo, hi
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = f(x2)
    return a, b


def alpha_star(p: float, tol: float = 1e-10) -> float:
    """Exponent alpha in (0, 1] minimizing ``c_t(p, alpha)``."""
    # the denominator 3 + p(alpha - 1) must stay positive
    lo = max(0.0, (p - 3.0) / p) + 1e-12
    a, b = golden_section_min(lambda al: c_t(p, al), lo, 1.0, tol)
    # Golden section alone pins alpha only to ~sqrt(machine eps) in a flat minimum;
    # finish on the first-order condition cP((3-p) a^(p-1) + (p-1) a^p) = 1,
    # whose left side is increasing in a.
    cp = c_p(p)

    def stationarity(al):
        return cp * ((3.0 - p) * al ** (p - 1.0) + (p - 1.0) * al**p) - 1.0

    pad = max(10 * tol, 1e-6)
    a = max(lo, a - pad)
    b = min(1.0, b + pad)
    if stationarity(a) < 0.0 < stationarity(b):
        return float(brentq(stationarity, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps))
    return 0.5 * (a + b) if b < 1.0 else 1.0


@dataclass(frozen=True)
class ConstantsRow:
    p: float
    V_p: float
    C_HL: float
    C_HL_simple: float
    C_P_scalar: float
    C_P: float
    alpha_star: float
    C_T: float
    C_ext: float
    quadrature_error: float
    # p outside [2, 3]: the trace/Poincare chain is evaluated beyond its stated range
    range_warning: bool = False

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def constants_row(p: float, tol: float = DEFAULT_QUAD_TOL) -> ConstantsRow:
    if not 1.0 < p < 4.0:
        raise ValueError(f"constants need 1 < p < 4, got {p}")
    flag = not 2.0 <= p <= 3.0
    if flag:
        warnings.warn(f"p={p} lies outside [2, 3]; trace chain values are extrapolated", RangeWarning)
    vp, err = v_p(p, tol)
    chl = 1.0 / ((4.0 - p) * vp)
    a = alpha_star(p)
    ct = c_t(p, a)
    return ConstantsRow(
        p=float(p),
        V_p=vp,
        C_HL=chl,
        C_HL_simple=c_hl_simple(p),
        C_P_scalar=c_p_scalar(p),
        C_P=c_p(p),
        alpha_star=a,
        C_T=ct,
        C_ext=ct * chl,
        quadrature_error=err,
        range_warning=flag,
    )


def coefficients(p: float) -> tuple[float, float]:
    """Coefficients (A, B) of ``A int|du|^p + B int|du|^(p+2) <= 0`` for tangent maps."""
    return 1.5 * (4.0 - p * (3.0 - p) ** 2), 2.0 * p * (3.0 - p) - 3.0


def eps3_closed() -> float:
    return (17.0 - 24.0 * math.log(2.0)) / (3.0**1.5 * 2.0 ** (5.0 / 6.0))


@dataclass(frozen=True)
class Thresholds:
    p0: float
    eps3: float
    p1: float
    eps3_grid: float
    p1_rounded: float = 2.961
    A_coeff: str = "(3/2)(4 - p(3-p)^2)"
    B_coeff: str = "2p(3-p) - 3"

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def thresholds(grid_step: float = 1e-3, agree_tol: float = 1e-10) -> Thresholds:
    eps = eps3_closed()
    m = int(round(1.0 / grid_step))
    grid = np.linspace(2.0, 3.0, m + 1)
    sup_ext = max(constants_row(float(q)).C_ext for q in grid)
    eps_grid = 1.0 / sup_ext
    if abs(eps_grid - eps) > agree_tol:
        raise ConsistencyError(f"eps3 closed form {eps!r} vs grid supremum {eps_grid!r}")
    # larger root of 2p(3-p) - 3
    p0 = (3.0 + math.sqrt(3.0)) / 2.0
    return Thresholds(p0=p0, eps3=eps, p1=3.0 - eps, eps3_grid=eps_grid)


class Window(enum.Enum):
    NEAR_2_REGULAR = "near-2 regular"
    OPEN_GAP = "open gap"
    NEAR_3_REGULAR = "near-3 regular"
    OUT_OF_RANGE = "out of range"


_P0 = (3.0 + math.sqrt(3.0)) / 2.0
_P1 = 3.0 - eps3_closed()


def regularity_window(p: float) -> Window:
    if not 2.0 <= p <= 3.0:
        return Window.OUT_OF_RANGE
    if p <= _P0:
        return Window.NEAR_2_REGULAR
    if p >= _P1:
        return Window.NEAR_3_REGULAR
    return Window.OPEN_GAP


def _random_unit(rng, shape):
    x = rng.standard_normal(shape)
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


def projection_factor_check(a_norm: float, samples: int = 10**6, seed: int = 0,
                            chunk: int = 200_000) -> tuple[float, float]:
    """Sampled minimum of ``|dP_a(q) w| / |w|`` over q in S^3, w tangent at q.

    ``P_a(z) = (z - a)/|z - a|``; the exact minimum is ``1/(1 + |a|)``.
    """
    if not 0.0 <= a_norm < 1.0:
        raise ValueError(f"a_norm must lie in [0, 1), got {a_norm}")
    if samples < 1000:
        raise ValueError("projection_factor_check needs at least 1000 samples")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, 4])))
    a = np.array([a_norm, 0.0, 0.0, 0.0])
    best = np.inf
    done = 0
    while done < samples:
        k = min(chunk, samples - done)
        q = _random_unit(rng, (k, 4))
        w = rng.standard_normal((k, 4))
        w -= np.sum(w * q, axis=1, keepdims=True) * q
        w /= np.linalg.norm(w, axis=1, keepdims=True)
        diff = q - a
        dist = np.linalg.norm(diff, axis=1)
        radial = np.sum(diff * w, axis=1) / dist
        ratio = np.sqrt(np.maximum(1.0 - radial**2, 0.0)) / dist
        best = min(best, float(ratio.min()))
        done += k
    return best, 1.0 / (1.0 + a_norm)


def ball_integral_check(p: float, tol: float = 1e-10) -> tuple[float, float]:
    """``int_{B^4} |a|^(-p) da`` by radial quadrature, against ``|S^3|/(4-p)``."""
    if not p < 4.0:
        raise ValueError(f"integral diverges for p >= 4, got {p}")
    sphere = 2.0 * math.pi**2
    radial, _ = adaptive_quad(lambda r: r ** (3.0 - p), 0.0, 1.0, tol / sphere)
    return sphere * radial, sphere / (4.0 - p)
