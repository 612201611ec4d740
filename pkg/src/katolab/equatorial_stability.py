"""Instability certificate for the equatorial map x -> (x/|x|, 0), B^n -> S^n.

The test field ``phi = eta(|x|) e_{n+1}`` reduces the second variation to the
radial integral ``int_0^1 r^(n-p+1) (eta'^2 - (n-1) eta^2 / r^2) dr``.  With
``eta(r) = r^((p-n)/2) sin(mu ln r)`` on ``[r0, 1]`` (zero below ``r0``), where
``mu = sqrt(-Delta_eps)/2`` and ``Delta_eps = (n-p)^2 - 4(n-1-eps)``, eta solves
``eta'' + (n-p+1)/r eta' + (n-1-eps)/r^2 eta = 0`` with ``eta(r0) = eta(1) = 0``,
and integration by parts gives the value ``-eps int r^(n-p-1) eta^2 dr < 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np

from .regularity_constants import adaptive_quad


class ParameterError(ValueError):
    pass


def instability_range(n: int) -> tuple[float, float]:
    if n < 2:
        raise ValueError(f"instability range needs n >= 2, got {n}")
    return n - 2.0 * math.sqrt(n - 1), float(n)


def delta(n: int, p: float, eps: float) -> float:
    return (n - p) ** 2 - 4.0 * (n - 1 - eps)


@dataclass(frozen=True)
class InstabilityCertificate:
    n: int
    p: float
    eps: float
    mu: float
    r0: float
    integral_value: float
    analytic_value: float
    quad_error: float

    @property
    def exponent(self) -> float:
        return (self.p - self.n) / 2.0

    def eta(self, r):
        r = np.asarray(r, dtype=float)
        out = r**self.exponent * np.sin(self.mu * np.log(r))
        return np.where(r >= self.r0, out, 0.0)

    def eta_derivs(self, r):
        """(eta, eta', eta'') on [r0, 1] in closed form."""
        r = np.asarray(r, dtype=float)
        lam, mu = self.exponent, self.mu
        L = np.log(r)
        s, c = np.sin(mu * L), np.cos(mu * L)
        base = r**lam
        e0 = base * s
        e1 = r ** (lam - 1.0) * (lam * s + mu * c)
        e2 = r ** (lam - 2.0) * ((lam * (lam - 1.0) - mu**2) * s + (2.0 * lam - 1.0) * mu * c)
        return e0, e1, e2

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def default_eps(n: int, p: float) -> float:
    """Half of the slack ``n - 1 - (n-p)^2/4`` that keeps Delta_eps negative."""
    return 0.5 * (n - 1 - (n - p) ** 2 / 4.0)


def build_certificate(n: int, p: float, eps: float | None = None,
                      tol: float = 1e-12) -> InstabilityCertificate:
    lo, hi = instability_range(n)
    if not lo < p < hi:
        raise ParameterError(f"p={p} is outside the instability range ({lo}, {hi}) for n={n}")
    if eps is None:
        eps = default_eps(n, p)
    if not eps > 0:
        raise ParameterError(f"eps must be positive, got {eps}")
    dlt = delta(n, p, eps)
    if dlt >= 0:
        raise ParameterError(f"Delta_eps = {dlt} >= 0 leaves only the zero solution; decrease eps")
    mu = math.sqrt(-dlt) / 2.0
    # first zero of sin(mu ln r) below r = 1
    t0 = -math.pi / mu
    r0 = math.exp(t0)
    proto = InstabilityCertificate(n, p, eps, mu, r0, 0.0, 0.0, 0.0)

    # integrate in t = ln r, where sin(mu t) oscillates uniformly; dr = r dt
    def stability_integrand(t):
        r = math.exp(t)
        e0, e1, _ = proto.eta_derivs(r)
        return r ** (n - p + 1) * (e1 * e1 - (n - 1) * e0 * e0 / (r * r)) * r

    def weighted_l2(t):
        r = math.exp(t)
        e0 = proto.eta_derivs(r)[0]
        return r ** (n - p - 1) * e0 * e0 * r

    scale = 1.0 + abs(eps) * math.pi / mu
    val, err1 = adaptive_quad(stability_integrand, t0, 0.0, tol * scale)
    l2, err2 = adaptive_quad(weighted_l2, t0, 0.0, tol * scale / max(eps, 1e-300))
    analytic = -eps * l2
    ulp = 8.0 * np.finfo(float).eps * (abs(val) + abs(analytic))
    quad_error = float(err1 + eps * err2 + ulp)
    return InstabilityCertificate(n, p, eps, mu, r0, val, analytic, quad_error)


def ode_residual(cert: InstabilityCertificate, m_points: int = 200) -> float:
    """Largest relative residual of the radial ODE at log-spaced radii in (r0, 1)."""
    if m_points < 10:
        raise ValueError("need at least 10 points")
    t = np.linspace(math.log(cert.r0), 0.0, m_points + 2)[1:-1]
    r = np.exp(t)
    e0, e1, e2 = cert.eta_derivs(r)
    terms = np.stack([e2, (cert.n - cert.p + 1) / r * e1, (cert.n - 1 - cert.eps) / r**2 * e0])
    res = np.abs(terms.sum(axis=0))
    return float(res.max() / np.abs(terms).max())


def zeta_residual(cert: InstabilityCertificate, m_points: int = 100) -> float:
    """Relative residual of ``zeta'' + (n-p) zeta' + (n-1-eps) zeta = 0`` for zeta(t) = eta(e^t)."""
    t = np.linspace(math.log(cert.r0), 0.0, m_points + 2)[1:-1]
    lam, mu = cert.exponent, cert.mu
    ex, s, c = np.exp(lam * t), np.sin(mu * t), np.cos(mu * t)
    z0 = ex * s
    z1 = ex * (lam * s + mu * c)
    z2 = ex * ((lam**2 - mu**2) * s + 2.0 * lam * mu * c)
    terms = np.stack([z2, (cert.n - cert.p) * z1, (cert.n - 1 - cert.eps) * z0])
    return float(np.abs(terms.sum(axis=0)).max() / np.abs(terms).max())


def closed_form_value(cert: InstabilityCertificate) -> float:
    """``-eps * pi / (2 mu)``: the t-integral of sin^2 over one half period."""
    return -cert.eps * math.pi / (2.0 * cert.mu)


def certificate_grid(points: int = 50, dims=(3, 4, 5, 6)) -> list[tuple[int, float]]:
    """(n, p) pairs spread through the open instability ranges."""
    per = [points // len(dims) + (1 if k < points % len(dims) else 0) for k in range(len(dims))]
    grid = []
    for n, m in zip(dims, per):
        lo, hi = instability_range(n)
        grid += [(n, lo + (hi - lo) * (k + 1) / (m + 1)) for k in range(m)]
    return grid


def eta_samples(cert: InstabilityCertificate, m: int = 200) -> list[tuple[float, float]]:
    r = np.linspace(0.0, 1.0, m + 1)[1:]
    return list(zip(r.tolist(), cert.eta(r).tolist()))
