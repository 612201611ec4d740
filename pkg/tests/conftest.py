import itertools

import numpy as np
import pytest


def naive_objective(V, W):
    """Direct triple loop over the full tensors."""
    n, d = V.shape
    total = 0.0
    for i in range(n):
        s = 0.0
        for j in range(n):
            for a in range(d):
                s += V[j, a] * W[i, j, a]
        total += s * s
    return total


def naive_residual(V, W, p):
    n, d = V.shape
    out = np.zeros(d)
    for a in range(d):
        out[a] = sum(W[i, i, a] for i in range(n))
        for i, j, b in itertools.product(range(n), range(n), range(d)):
            out[a] += (p - 2.0) * V[i, a] * V[j, b] * W[i, j, b]
    return out


def random_symmetric(rng, n, d):
    W = rng.standard_normal((n, n, d))
    return 0.5 * (W + W.transpose(1, 0, 2))


def symmetric_basis(n, d):
    """Orthonormal (Frobenius) basis of symmetric n x n x d tensors."""
    out = []
    for i in range(n):
        for j in range(i, n):
            for a in range(d):
                E = np.zeros((n, n, d))
                if i == j:
                    E[i, i, a] = 1.0
                else:
                    E[i, j, a] = E[j, i, a] = 1.0 / np.sqrt(2.0)
                out.append(E)
    return out


def feasible_sampler(V, p):
    """Independent projector machinery for random feasible unit Hessians.

    Builds the constraint and objective operators column by column from the
    naive definitions and projects with a least-squares pseudo-inverse.
    Returns (basis, P, G): tensors spanning Sym, the null-space projector in
    those coordinates, and the objective operator y -> (sum_{j,a} v w_ija)_i.
    """
    n, d = V.shape
    basis = symmetric_basis(n, d)
    C = np.column_stack([naive_residual(V, E, p) for E in basis])
    G = np.column_stack([np.einsum("ja,ija->i", V, E) for E in basis])
    P = np.eye(len(basis)) - np.linalg.pinv(C) @ C
    return basis, P, G


def sample_max_ratio(V, p, samples, rng, structured=True):
    """Max of the objective over random unit feasible w (a lower bound on inner_max)."""
    basis, P, G = feasible_sampler(V, p)
    n = V.shape[0]
    if structured:
        # the objective only sees the component of w in range(P G^T), dim <= n
        Z = rng.standard_normal((samples, n)) @ (P @ G.T).T
    else:
        Z = rng.standard_normal((samples, len(basis))) @ P.T
    norms = np.linalg.norm(Z, axis=1)
    keep = norms > 1e-12
    Y = Z[keep] / norms[keep, None]
    vals = np.sum((Y @ G.T) ** 2, axis=1)
    return float(vals.max())


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)
