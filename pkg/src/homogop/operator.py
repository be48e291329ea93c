"""Multiplication by z as a block shift over the K-types H(n).

H(n) is spanned by ``mu_j e^j_{n-j}`` for ``0 <= j <= min(m, n)``, and
``z * H(n)`` lies in H(n+1).  The block ``M(n)`` is obtained from the
triangular coefficient matrices ``E(n)`` by one triangular solve.
"""

from __future__ import annotations

from math import comb, lgamma

import numpy as np
from scipy.linalg import solve_triangular

from .kernels import kernel_eval, log_pochhammer, origin_column
from .params import ParameterError, ParameterSet


def type_dim(m: int, n: int) -> int:
    return min(m, n) + 1


def e_matrix(n: int, params: ParameterSet) -> np.ndarray:
    """``E(n)[l, j]`` = coefficient of ``z^(n-l)`` in component l of ``e^j_{n-j}``.

    Lower triangular with positive diagonal; computed in log space so that
    n in the hundreds does not overflow.
    """
    m = params.m
    r = type_dim(m, n)
    out = np.zeros((r, r))
    for j in range(r):
        a = params.two_lambda(j)
        for ell in range(j, r):
            log_mag = (
                0.5 * lgamma(n - j + 1)
                - lgamma(n - ell + 1)
                + 0.5 * log_pochhammer(a, n - j)
                - log_pochhammer(a, ell - j)
            )
            out[ell, j] = comb(ell, j) * np.exp(log_mag)
    return out


def e_limit(params: ParameterSet) -> np.ndarray:
    """n-independent matrix E with ``E(n)[l, j] ~ n^l n^(lam - m/2 - 1/2) E[l, j]``."""
    m = params.m
    out = np.zeros((m + 1, m + 1))
    for j in range(m + 1):
        for ell in range(j, m + 1):
            x = 2 * params.lam - m
            out[ell, j] = comb(ell, j) * np.exp(0.5 * lgamma(x + 2 * j) - lgamma(x + ell + j))
    return out


def m_block(n: int, params: ParameterSet) -> np.ndarray:
    """``M(n) = D(mu)^-1 E(n+1)^-1 E(n) D(mu)``, shape ``dim H(n+1) x dim H(n)``.

    For n < m the block is rectangular: E(n) is padded with zero rows to the
    index range of E(n+1) before the solve.
    """
    mu = np.asarray(params.mu)
    en = e_matrix(n, params)
    en1 = e_matrix(n + 1, params)
    rows, cols = en1.shape[0], en.shape[1]
    rhs = np.zeros((rows, cols))
    rhs[: en.shape[0]] = en
    x = solve_triangular(en1, rhs, lower=True)
    return x * mu[:cols][None, :] / mu[:rows][:, None]


def identity_block(n: int, m: int) -> np.ndarray:
    """Block of U_+ from H(n) to H(n+1) (inclusion ``e^j_{n-j} -> e^j_{n+1-j}``)."""
    return np.eye(type_dim(m, n + 1), type_dim(m, n))


def type_offsets(m: int, n_max: int) -> np.ndarray:
    dims = [type_dim(m, n) for n in range(n_max + 1)]
    return np.concatenate([[0], np.cumsum(dims)])


def truncated_matrix(params: ParameterSet, n_max: int) -> np.ndarray:
    """Matrix of M compressed to the K-types 0..n_max (block sub-diagonal)."""
    if n_max < params.m:
        raise ParameterError(f"n_max must be at least m = {params.m}")
    off = type_offsets(params.m, n_max)
    out = np.zeros((off[-1], off[-1]))
    for n in range(n_max):
        out[off[n + 1] : off[n + 2], off[n] : off[n + 1]] = m_block(n, params)
    return out


def operator_norm(params: ParameterSet, n_max: int) -> float:
    """Spectral norm of ``truncated_matrix(params, n_max)``.

    M^*M is block diagonal for a block shift, so the norm is the largest
    block norm; no iteration is needed.
    """
    return max((np.linalg.norm(m_block(n, params), 2) for n in range(n_max)), default=0.0)


def block_deviations(params: ParameterSet, n_values) -> np.ndarray:
    """``||M(n) - I||_F`` for each n."""
    return np.array(
        [np.linalg.norm(m_block(n, params) - identity_block(n, params.m)) for n in n_values]
    )


def hs_deviation(params: ParameterSet, n_max: int) -> np.ndarray:
    """Partial sums ``sum_{n <= k} ||M(n) - I||_F^2`` for k = 0..n_max."""
    if n_max < params.m:
        raise ParameterError(f"n_max must be at least m = {params.m}")
    return np.cumsum(block_deviations(params, range(n_max + 1)) ** 2)


def boundedness_certificate(params: ParameterSet, c: float, points) -> float:
    """Smallest eigenvalue of ``[(c - w_j conj(w_i)) K(w_j, w_i)]``.

    A nonnegative value means the sampled positivity test for ``||M||^2 <= c``
    is satisfied.
    """
    pts = [complex(p) for p in points]
    d = params.dim
    k = len(pts)
    g = np.zeros((d * k, d * k), dtype=complex)
    for j, wj in enumerate(pts):
        for i, wi in enumerate(pts):
            g[j * d : (j + 1) * d, i * d : (i + 1) * d] = (c - wj * np.conj(wi)) * kernel_eval(
                params, wj, wi
            )
    g = 0.5 * (g + g.conj().T)
    return float(np.linalg.eigvalsh(g)[0])


def l_matrix(lam: float, m: int) -> np.ndarray:
    """``L(lam)[l, j] = B^(lam_j)(0, 0)[l, l]``; lower triangular, unit diagonal."""
    return np.column_stack([origin_column(lam, m, j) for j in range(m + 1)])


def default_eps(params: ParameterSet) -> float:
    return min(0.1, (params.lam - params.m / 2) / 4)


def mu_prime_solve(params: ParameterSet, eps: float | None = None) -> ParameterSet | None:
    """Find mu' with ``B^(lam, mu)(0,0) = B^(lam - eps, mu')(0,0)``.

    Returns the parameter set ``(lam - eps, mu')``, or None when the solution
    has a nonpositive ``mu'_j^2`` (eps too large).
    """
    m = params.m
    eps = default_eps(params) if eps is None else eps
    if not params.lam - eps > m / 2:
        raise ParameterError(f"lambda - eps = {params.lam - eps} must exceed m/2 = {m / 2}")
    target = l_matrix(params.lam, m) @ np.square(params.mu)
    sq = solve_triangular(l_matrix(params.lam - eps, m), target, lower=True)
    if np.any(sq <= 0):
        return None
    mu = np.sqrt(sq)
    mu[0] = 1.0
    return ParameterSet(m, params.lam - eps, tuple(mu))


def mu_prime_search(
    params: ParameterSet, eps: float | None = None, halvings: int = 30
) -> ParameterSet | None:
    """``mu_prime_solve``, halving eps until the solution is positive.

    The solution tends to mu as eps -> 0, so a small enough eps always works.
    """
    eps = default_eps(params) if eps is None else eps
    for _ in range(halvings + 1):
        q = mu_prime_solve(params, eps)
        if q is not None:
            return q
        eps /= 2
    return None
