"""Pointwise quadratic inequalities behind the near-2 regularity argument.

Each ``*_margin`` returns RHS - LHS, vectorized over numpy arrays, so a
valid inequality means margin >= 0 up to rounding.  The mixed
Cauchy-Schwarz-Kato inequality is evaluated in the rotated variables
``z = t1 x + t2 y``, ``w = t2 x - t1 y``, where it is the plain quadratic form
``2(p-2) t1^2 z^2 + 6(p-2)/p t1 t2 z w + 6/p w^2``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

VIOLATION_THRESHOLD = -1e-12
UNIT_TOL = 1e-12


def _check_unit(a, b, what):
    if np.any(np.abs(np.asarray(a) ** 2 + np.asarray(b) ** 2 - 1.0) > UNIT_TOL):
        raise ValueError(f"{what} must satisfy a^2 + b^2 = 1")


def _check_p(p, lo, hi, lo_open=False, what=""):
    p = np.asarray(p)
    bad = (p <= lo) if lo_open else (p < lo)
    if np.any(bad | (p > hi)):
        left = "(" if lo_open else "["
        raise ValueError(f"{what} needs p in {left}{lo}, {hi}]")


def rotate(x, y, t1, t2):
    return t1 * x + t2 * y, t2 * x - t1 * y


def mixed_csk_rotated(z, w, t1, t2, p):
    return 2.0 * (p - 2.0) * t1**2 * z**2 + 6.0 * (p - 2.0) / p * t1 * t2 * z * w + 6.0 / p * w**2


def mixed_csk_margin(x, y, theta1, theta2, p):
    """RHS - LHS of the mixed Cauchy-Schwarz-Kato inequality in raw variables."""
    _check_unit(theta1, theta2, "theta")
    _check_p(p, 2.0, 3.0, what="mixed CSK")
    z, w = rotate(x, y, theta1, theta2)
    return mixed_csk_rotated(z, w, theta1, theta2, p)


def mixed_csk_sides(x, y, theta1, theta2, p):
    """(LHS, RHS) evaluated literally; used to cross-check the rotated form."""
    s = theta1 * x + theta2 * y
    lhs = 3.0 * s**2 + (p - 2.0) * theta1**2 * s**2
    rhs = 3.0 / p * (x**2 + 2.0 * y**2 + (x + (p - 2.0) * theta1 * s) ** 2 + (p - 2.0) * s**2)
    return lhs, rhs


def _quad_coeffs(margin):
    """(a, b, c) of ``a z^2 + b z w + c w^2`` from three evaluations."""
    a = margin(1.0, 0.0)
    c = margin(0.0, 1.0)
    b = margin(1.0, 1.0) - a - c
    return a, b, c


def mixed_csk_discriminant(theta1, theta2, p):
    """Discriminant ``9 t1^2 t2^2 - 12 p t1^2/(p-2)`` of the reduced quadratic form.

    At p = 2 the reduced form is undefined; the discriminant of the unreduced
    margin (obtained by evaluating it) is returned instead, which is 0 there.
    """
    _check_unit(theta1, theta2, "theta")
    _check_p(p, 2.0, 3.0, what="mixed CSK discriminant")
    if p == 2.0:
        a, b, c = _quad_coeffs(lambda z, w: mixed_csk_rotated(z, w, theta1, theta2, p))
        return b * b - 4.0 * a * c
    return 9.0 * theta1**2 * theta2**2 - 12.0 * p * theta1**2 / (p - 2.0)


def kato2d_margin_case1(z, w, alpha1, alpha2, p):
    """Reduced form ``p a1^2 z^2 + 2 a1 a2 z w + 2/(p-2) w^2`` for p > 2 (constant 2)."""
    _check_unit(alpha1, alpha2, "alpha")
    if np.any(np.asarray(p) <= 2.0):
        raise ValueError("case 1 needs p > 2; use kato2d_margin_case2 for p in [1, 2]")
    return p * alpha1**2 * z**2 + 2.0 * alpha1 * alpha2 * z * w + 2.0 / (p - 2.0) * w**2


def kato2d_margin_case2(z, w, alpha1, alpha2, p):
    """RHS - LHS with constant 1 + (p-1)^2, for p in [1, 2]."""
    _check_unit(alpha1, alpha2, "alpha")
    _check_p(p, 1.0, 2.0, what="case 2")
    rhs = (2.0 + p * (p - 2.0) * alpha1**2) * z**2 + 2.0 * (p - 2.0) * alpha1 * alpha2 * z * w + 2.0 * w**2
    return rhs - (1.0 + (p - 1.0) ** 2) * z**2


def csk_vs_separate(p: float) -> tuple[float, float]:
    """Mixed constant 3/p next to the Cauchy-Schwarz-then-Kato constant (p+1)/p."""
    _check_p(p, 2.0, 3.0, what="csk_vs_separate")
    return 3.0 / p, (p + 1.0) / p


def sharpness_example(p: float) -> tuple[float, float]:
    """Both sides of the mixed inequality for ``u(x, y) = x + x y`` at the origin.

    Returns (LHS, RHS); they coincide for every p.
    """
    grad = np.array([1.0, 0.0])                      # (u_x, u_y) at 0
    hess = np.array([[0.0, 1.0], [1.0, 0.0]])        # u_xx = u_yy = 0, u_xy = 1
    g = np.linalg.norm(grad)
    dgrad_norm = hess @ grad / g                     # gradient of |grad u|
    along = float(grad @ dgrad_norm / g)
    lhs = 3.0 * float(dgrad_norm @ dgrad_norm) + (p - 2.0) * along**2
    rhs = 3.0 / p * (float(np.sum(hess**2)) + (p - 2.0) * float(dgrad_norm @ dgrad_norm))
    return lhs, rhs


@dataclass(frozen=True)
class IneqReport:
    name: str
    samples: int
    violations: int
    worst_margin: float
    witness_of_worst: dict

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def _rng(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, stream])))


def _unit_pair(rng, k):
    # Cauchy magnitudes probe large-scale behaviour; homogeneity lets us normalize
    a, b = rng.standard_cauchy(k), rng.standard_cauchy(k)
    r = np.hypot(a, b)
    r[r == 0] = 1.0
    return a / r, b / r


def _angle_pair(rng, k):
    phi = rng.uniform(0.0, np.pi / 2, k)
    return np.cos(phi), np.sin(phi)


def _report(name, margins, inputs):
    k = int(np.argmin(margins))
    return IneqReport(
        name=name,
        samples=int(margins.size),
        violations=int(np.sum(margins < VIOLATION_THRESHOLD)),
        worst_margin=float(margins[k]),
        witness_of_worst={key: float(val[k]) for key, val in inputs.items()},
    )


def _batched(name, samples, seed, stream, draw, margin, batch=250_000):
    rng = _rng(seed, stream)
    reports = []
    done = 0
    while done < samples:
        k = min(batch, samples - done)
        inputs = draw(rng, k)
        reports.append(_report(name, margin(**inputs), inputs))
        done += k
    worst = min(reports, key=lambda r: r.worst_margin)
    return IneqReport(name, samples, sum(r.violations for r in reports),
                      worst.worst_margin, worst.witness_of_worst)


def fuzz_mixed_csk(samples: int = 10**6, seed: int = 0) -> IneqReport:
    def draw(rng, k):
        x, y = _unit_pair(rng, k)
        t1, t2 = _angle_pair(rng, k)
        return dict(x=x, y=y, theta1=t1, theta2=t2, p=rng.uniform(2.0, 3.0, k))

    return _batched("mixed_csk", samples, seed, 1, draw, mixed_csk_margin)


def fuzz_kato2d_case1(samples: int = 10**6, seed: int = 0) -> IneqReport:
    def draw(rng, k):
        z, w = _unit_pair(rng, k)
        a1, a2 = _angle_pair(rng, k)
        # uniform on [0, 2) maps to p in (2, 4]
        p = 4.0 - rng.uniform(0.0, 2.0, k)
        return dict(z=z, w=w, alpha1=a1, alpha2=a2, p=p)

    return _batched("kato2d_case1", samples, seed, 2, draw, kato2d_margin_case1)


def fuzz_kato2d_case2(samples: int = 10**6, seed: int = 0) -> IneqReport:
    def draw(rng, k):
        z, w = _unit_pair(rng, k)
        a1, a2 = _angle_pair(rng, k)
        return dict(z=z, w=w, alpha1=a1, alpha2=a2, p=rng.uniform(1.0, 2.0, k))

    return _batched("kato2d_case2", samples, seed, 3, draw, kato2d_margin_case2)


def near_equality_mixed_csk(p: float = 2.5, seed: int = 0, starts: int = 8):
    """Locally minimize the mixed margin over unit (x, y) and theta on the quarter circle.

    Returns (margin, sample dict) for the best local minimum found.
    """
    rng = _rng(seed, 5)

    def margin_at(angles):
        phi, psi = angles
        t1, t2 = np.cos(psi), np.sin(psi)
        return float(mixed_csk_margin(np.cos(phi), np.sin(phi), t1, t2, p))

    best = None
    for _ in range(starts):
        x0 = [rng.uniform(0, 2 * np.pi), rng.uniform(0, np.pi / 2)]
        res = minimize(margin_at, x0, method="L-BFGS-B",
                       bounds=[(None, None), (0.0, np.pi / 2)])
        if best is None or res.fun < best.fun:
            best = res
    phi, psi = best.x
    sample = dict(x=float(np.cos(phi)), y=float(np.sin(phi)),
                  theta1=float(np.cos(psi)), theta2=float(np.sin(psi)), p=float(p))
    return float(best.fun), sample
