"""Numerical evaluation of the optimal Kato constant kappa(p, n, d).

For a fixed unit gradient direction ``v`` the best Hessian is the top
eigenvector of the objective's quadratic form restricted to the null space of
the p-harmonic constraints, so ``f(v) = max_w kato_objective(v, w)`` is an
eigenvalue.  ``kappa = 1 / sup_v f(v)``; the sup over ``v`` is found by a seeded
multistart search on the unit sphere followed by step-halving pattern ascent.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
import logging
import os

import numpy as np
import scipy.linalg

from .tensor_core import (
    DEFAULT_FEAS_TOL,
    GradientDirection,
    HessianCandidate,
    Params,
    Witness,
    constraint_matrix,
    make_witness,
    objective_matrix,
)

log = logging.getLogger(__name__)


class NumericError(RuntimeError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 256
    seed: int = 0
    refine_iters: int = 200
    refine_step: float = 0.1
    feas_tol: float = DEFAULT_FEAS_TOL
    conv_tol: float = 1e-10
    refine_top: int = 8

    def __post_init__(self):
        if self.restarts < 1 or self.refine_iters < 1 or self.refine_top < 1:
            raise ValueError("restarts, refine_iters and refine_top must be positive")
        if not (self.refine_step > 0 and self.feas_tol > 0 and self.conv_tol > 0):
            raise ValueError("step and tolerances must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True, eq=False)
class KatoEstimate:
    params: Params
    kappa_upper: float
    lambda_best: float
    witness: Witness
    evaluations: int
    config: SearchConfig
    best_restart: int
    # (evaluations so far, running kappa_upper) after each improvement
    trace: tuple[tuple[int, float], ...] = field(default=())

    def to_json(self) -> dict:
        return {
            "params": asdict(self.params),
            "kappa_upper": self.kappa_upper,
            "lambda_best": self.lambda_best,
            "evaluations": self.evaluations,
            "best_restart": self.best_restart,
            "config": asdict(self.config),
            "trace": [list(t) for t in self.trace],
            "witness": self.witness.to_json(),
        }


def restart_rng(seed: int, index: int) -> np.random.Generator:
    """Counter-based stream owned by one restart, independent of scheduling."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, index])))


def random_direction(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    V = rng.standard_normal((n, d))
    return V / np.linalg.norm(V)


def null_space_basis(C: np.ndarray, rtol: float = 1e-12) -> np.ndarray:
    """Orthonormal basis (columns) of ker C via a rank-revealing SVD."""
    _, s, Vh = scipy.linalg.svd(C, full_matrices=True)
    rank = int(np.sum(s > rtol * max(s[0] if s.size else 0.0, 1.0)))
    return Vh[rank:].T


def inner_max(v: GradientDirection, params: Params,
              feas_tol: float = DEFAULT_FEAS_TOL) -> tuple[float, HessianCandidate]:
    """Largest objective over unit feasible ``w`` for the given ``v``."""
    if (v.n, v.d) != (params.n, params.d):
        raise ValueError(f"v has shape ({v.n}, {v.d}), params say ({params.n}, {params.d})")
    C = constraint_matrix(v.entries, params.p)
    G = objective_matrix(v.entries)
    B = null_space_basis(C)
    if B.shape[1] == 0:
        raise NumericError("constraint null space is empty")
    GB = G @ B
    M = GB.T @ GB
    try:
        evals, evecs = scipy.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed on {M.shape} projected matrix: {exc}") from exc
    y = B @ evecs[:, -1]
    w = HessianCandidate.from_flat(y, params.n, params.d, unit=True)
    res = float(np.linalg.norm(C @ w.flat()))
    if res > feas_tol:
        raise NumericError(f"inner maximizer residual {res:.3e} above feasibility tolerance")
    return float(max(evals[-1], 0.0)), w


def batch_inner_value(V: np.ndarray, p: float) -> np.ndarray:
    """``f(v)`` for a stack of directions of shape (K, n, d).

    Uses the projector ``P = I - C^T (C C^T)^+ C`` onto the constraint null space;
    the top eigenvalue of ``G P G^T`` (n x n) equals that of ``B^T G^T G B``.
    """
    V = np.asarray(V, dtype=float)
    C = constraint_matrix(V, p)
    G = objective_matrix(V)
    GGt = G @ G.swapaxes(-1, -2)
    GCt = G @ C.swapaxes(-1, -2)
    CCt = C @ C.swapaxes(-1, -2)
    H = GGt - GCt @ np.linalg.pinv(CCt, rcond=1e-13, hermitian=True) @ GCt.swapaxes(-1, -2)
    H = 0.5 * (H + H.swapaxes(-1, -2))
    return np.linalg.eigvalsh(H)[..., -1]


def _tangent_trials(x: np.ndarray, h: float) -> np.ndarray:
    """Points ``x +- h t_k`` on the sphere for projected coordinate directions t_k."""
    m = x.size
    T = np.eye(m) - np.outer(x, x)
    cand = np.concatenate([x + h * T, x - h * T])
    return cand / np.linalg.norm(cand, axis=1, keepdims=True)


def _refine(x0: np.ndarray, f0: float, params: Params, cfg: SearchConfig):
    shape = (params.n, params.d)
    x, fx = x0.ravel().copy(), f0
    h = cfg.refine_step
    h_min = np.sqrt(cfg.conv_tol)
    evals = 0
    for _ in range(cfg.refine_iters):
        trials = _tangent_trials(x, h)
        vals = batch_inner_value(trials.reshape(-1, *shape), params.p)
        evals += len(trials)
        k = int(np.argmax(vals))
        if vals[k] > fx:
            x, fx = trials[k], float(vals[k])
        else:
            h *= 0.5
            if h < h_min:
                break
    return x.reshape(shape), fx, evals


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("KATOLAB_THREADS", "1")))
    except ValueError:
        return 1


def outer_search(params: Params, config: SearchConfig | None = None,
                 initial: list[np.ndarray] | None = None) -> KatoEstimate:
    """Multistart estimate of kappa(p, n, d); ``initial`` adds warm-start directions."""
    cfg = config or SearchConfig()
    n, d = params.n, params.d
    starts = [random_direction(restart_rng(cfg.seed, r), n, d) for r in range(cfg.restarts)]
    labels = list(range(cfg.restarts))
    for k, V in enumerate(initial or []):
        V = np.asarray(V, dtype=float).reshape(n, d)
        starts.append(V / np.linalg.norm(V))
        labels.append(cfg.restarts + k)
    starts = np.stack(starts)
    f0 = batch_inner_value(starts, params.p)
    evaluations = len(starts)

    trace = []
    best = -np.inf
    for r in range(len(starts)):
        if f0[r] > best:
            best = float(f0[r])
            trace.append((r + 1, 1.0 / best))

    # stable sort keeps the lowest index first among equal values
    order = np.argsort(-f0, kind="stable")[: min(cfg.refine_top, len(starts))]
    if initial:
        warm = [i for i in range(cfg.restarts, len(starts)) if i not in order]
        order = np.concatenate([order, np.array(warm, dtype=int)])
    order = sorted(int(i) for i in order)

    def work(i):
        return _refine(starts[i], float(f0[i]), params, cfg)

    threads = _threads()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            refined = list(pool.map(work, order))
    else:
        refined = [work(i) for i in order]

    best_i, best_v, best_f = None, None, -np.inf
    for i, (v, fv, ne) in zip(order, refined):
        evaluations += ne
        if fv > best_f + cfg.conv_tol:
            best_i, best_v, best_f = i, v, fv
        if fv > best:
            best = fv
            trace.append((evaluations, 1.0 / best))
    if best_f <= 0:
        raise NumericError(f"search found no positive objective for {params}")

    v_star = GradientDirection(best_v)
    lam, w_star = inner_max(v_star, params, cfg.feas_tol)
    witness = make_witness(v_star, w_star, params.p, cfg.feas_tol)
    evaluations += 1
    log.debug("kappa%s: %.10f after %d evaluations", (params.p, n, d), 1.0 / lam, evaluations)
    return KatoEstimate(
        params=params,
        kappa_upper=1.0 / witness.ratio,
        lambda_best=witness.ratio,
        witness=witness,
        evaluations=evaluations,
        config=cfg,
        best_restart=labels[best_i],
        trace=tuple(trace),
    )


def kappa_curve(n: int, d: int, p_grid, config: SearchConfig | None = None):
    """Estimates along a p-grid, warm-starting each point from the previous optimum."""
    p_grid = list(p_grid)
    if not p_grid:
        raise ValueError("p_grid must be nonempty")
    out = []
    prev = None
    for p in p_grid:
        est = outer_search(Params(p, n, d), config, initial=None if prev is None else [prev])
        out.append((float(p), est))
        prev = est.witness.v.entries
    return out


def curve_csv_rows(curve) -> list[list]:
    return [[p, e.kappa_upper, e.lambda_best, e.evaluations] for p, e in curve]
