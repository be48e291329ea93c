"""The spaces A^(lam, mu): maps Gamma_j, orthonormal basis, reproducing kernel.

Polynomials in z are stored as ascending coefficient arrays.  The inner
product of the scalar space A^(lam) is realised on monomials,
``<z^n, z^n> = n! / (2 lam)_n``, so everything here is exact on polynomials.

The kernel ``B(z, w)`` is produced two ways: by summing ``e(z) e(w)^*`` over
the orthonormal basis (``kernel_from_onb``) and from the closed product
formula (``kernel_closed_form`` / ``kernel_eval``).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial, lgamma

import numpy as np
from numpy.polynomial import polynomial as P

from . import mobius
from .params import ParameterError, ParameterSet
from .series import (
    BiSeries,
    bs_constant,
    bs_exp_nilpotent,
    bs_geometric,
    bs_mul,
)

__all__ = [
    "ParameterError",
    "ParameterSet",
    "VPoly",
    "b_origin",
    "d_series",
    "gamma_apply",
    "kernel_closed_form",
    "kernel_eval",
    "kernel_from_onb",
    "log_pochhammer",
    "onb_vector",
    "pochhammer",
    "quasi_invariance_defect",
    "shift_matrix",
]


def pochhammer(x: float, n: int) -> float:
    """Rising factorial ``x (x+1) ... (x+n-1)``; ``(x)_0 = 1``."""
    out = 1.0
    for i in range(n):
        out *= x + i
    return out


def log_pochhammer(x: float, n: int) -> float:
    """``log (x)_n`` for ``x > 0``, safe for large n."""
    return lgamma(x + n) - lgamma(x)


@dataclass(frozen=True, eq=False)
class VPoly:
    """Polynomial in z with values in C^(m+1); ``coeffs[k]`` multiplies ``z**k``."""

    coeffs: np.ndarray  # shape (degree+1, m+1)

    def __post_init__(self):
        c = np.atleast_2d(np.asarray(self.coeffs, dtype=complex))
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def m(self) -> int:
        return self.coeffs.shape[1] - 1

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    def component(self, ell: int) -> np.ndarray:
        return self.coeffs[:, ell]

    def __call__(self, z: complex) -> np.ndarray:
        return P.polyval(z, self.coeffs)

    def __add__(self, other: VPoly) -> VPoly:
        n = max(self.coeffs.shape[0], other.coeffs.shape[0])
        out = np.zeros((n, self.m + 1), dtype=complex)
        out[: self.coeffs.shape[0]] += self.coeffs
        out[: other.coeffs.shape[0]] += other.coeffs
        return VPoly(out)

    def __mul__(self, x: complex) -> VPoly:
        return VPoly(self.coeffs * x)

    __rmul__ = __mul__

    def times_z(self) -> VPoly:
        out = np.zeros((self.coeffs.shape[0] + 1, self.m + 1), dtype=complex)
        out[1:] = self.coeffs
        return VPoly(out)

    def padded(self, degree: int) -> np.ndarray:
        """Coefficient array padded (or cut) to ``degree + 1`` rows."""
        out = np.zeros((degree + 1, self.m + 1), dtype=complex)
        k = min(degree + 1, self.coeffs.shape[0])
        out[:k] = self.coeffs[:k]
        return out


def gamma_apply(j: int, f, params: ParameterSet) -> VPoly:
    """Apply Gamma_j: component l is ``binom(l, j) / (2 lam_j)_{l-j} * f^{(l-j)}``."""
    m = params.m
    if not 0 <= j <= m:
        raise ValueError(f"j must lie in 0..{m}, got {j}")
    f = np.atleast_1d(np.asarray(f, dtype=complex))
    out = np.zeros((f.size, m + 1), dtype=complex)
    two_lam_j = params.two_lambda(j)
    for ell in range(j, m + 1):
        d = P.polyder(f, ell - j) if ell - j < f.size else np.zeros(1)
        out[: d.size, ell] = comb(ell, j) / pochhammer(two_lam_j, ell - j) * d
    return VPoly(out)


def onb_vector(j: int, n: int, params: ParameterSet) -> VPoly:
    """Basis vector ``e_n^j = Gamma_j(sqrt((2 lam_j)_n / n!) z^n)`` in closed form."""
    m = params.m
    if not 0 <= j <= m:
        raise ValueError(f"j must lie in 0..{m}, got {j}")
    a = params.two_lambda(j)
    out = np.zeros((n + 1, m + 1), dtype=complex)
    for ell in range(j, min(m, n + j) + 1):
        power = n - ell + j
        log_mag = (
            0.5 * lgamma(n + 1)
            - lgamma(power + 1)
            + 0.5 * log_pochhammer(a, n)
            - log_pochhammer(a, ell - j)
        )
        out[power, ell] = comb(ell, j) * np.exp(log_mag)
    return VPoly(out)


def b_origin(params: ParameterSet) -> np.ndarray:
    """Diagonal matrix ``B(0, 0) = sum_j mu_j^2 B^(lam_j)(0, 0)``."""
    m = params.m
    out = np.zeros(m + 1)
    for j in range(m + 1):
        out += params.mu[j] ** 2 * origin_column(params.lam, m, j)
    return np.diag(out)


def origin_column(lam: float, m: int, j: int) -> np.ndarray:
    """Diagonal of ``B^(lam_j)(0, 0)``: ``binom(l, j)^2 (l-j)! / (2 lam_j)_{l-j}``."""
    a = 2 * lam - m + 2 * j
    col = np.zeros(m + 1)
    for ell in range(j, m + 1):
        col[ell] = comb(ell, j) ** 2 * factorial(ell - j) / pochhammer(a, ell - j)
    return col


def shift_matrix(m: int) -> np.ndarray:
    """Weighted forward shift with ``S e_p = (p+1) e_{p+1}``."""
    s = np.zeros((m + 1, m + 1))
    for p in range(m):
        s[p + 1, p] = p + 1
    return s


def nilpotent_exp(nil: np.ndarray, x: complex) -> np.ndarray:
    d = nil.shape[0]
    out = np.eye(d, dtype=complex)
    term = np.eye(d, dtype=complex)
    for k in range(1, d):
        term = term @ nil * (x / k)
        out = out + term
    return out


def d_matrix(m: int, t: complex) -> np.ndarray:
    """``D(t) = diag((1 - t)^(m - l))``."""
    return np.diag([(1 - t) ** (m - ell) for ell in range(m + 1)]).astype(complex)


def d_series(params: ParameterSet, degree: int) -> BiSeries:
    """``D(z conj(w))`` as an exact (finite binomial) series."""
    m = params.m
    c = np.zeros((degree + 1, degree + 1, m + 1, m + 1), dtype=complex)
    for ell in range(m + 1):
        for k in range(min(m - ell, degree) + 1):
            c[k, k, ell, ell] = comb(m - ell, k) * (-1) ** k
    return BiSeries(c)


def kernel_from_onb(params: ParameterSet, degree: int) -> BiSeries:
    """Accumulate ``sum_j mu_j^2 sum_n e_n^j(z) e_n^j(w)^*`` up to ``degree``.

    ``e_n^j`` only has z-powers ``n - m .. n``, so ``n <= degree + m`` is enough.
    """
    m = params.m
    c = np.zeros((degree + 1, degree + 1, m + 1, m + 1), dtype=complex)
    for j in range(m + 1):
        w = params.mu[j] ** 2
        for n in range(degree + m + 1):
            v = onb_vector(j, n, params).padded(degree)
            c += w * np.einsum("si,tk->stik", v, np.conj(v))
    return BiSeries(c)


def kernel_closed_form(params: ParameterSet, degree: int) -> BiSeries:
    """``(1 - z w*)^(-2 lam - m) D exp(w* S) B(0,0) exp(z S^*) D`` as a series."""
    m = params.m
    s = shift_matrix(m)
    d = d_series(params, degree)
    out = bs_geometric(2 * params.lam + m, m, degree)
    for factor in (
        d,
        bs_exp_nilpotent(s, degree, "w"),
        bs_constant(b_origin(params), degree),
        bs_exp_nilpotent(s.T, degree, "z"),
        d,
    ):
        out = bs_mul(out, factor)
    return out


def kernel_eval(params: ParameterSet, z: complex, w: complex) -> np.ndarray:
    """Pointwise value of the closed-form kernel."""
    m = params.m
    s = shift_matrix(m)
    t = complex(z) * np.conj(complex(w))
    d = d_matrix(m, t)
    prefactor = np.exp(-(2 * params.lam + m) * np.log(1 - t))
    return prefactor * d @ nilpotent_exp(s, np.conj(w)) @ b_origin(params) @ nilpotent_exp(s.T, z) @ d


def quasi_invariance_defect(
    params: ParameterSet, g: mobius.GroupElement, z: complex, w: complex
) -> float:
    """Frobenius norm of ``J(g, z) K(gz, gw) J(g, w)^* - K(z, w)``."""
    mobius.require_branch_valid(g)
    jz = mobius.multiplier(g, z, params)
    jw = mobius.multiplier(g, w, params)
    lhs = jz @ kernel_eval(params, mobius.act(g, z), mobius.act(g, w)) @ jw.conj().T
    return float(np.linalg.norm(lhs - kernel_eval(params, z, w)))


def gram_matrix(params: ParameterSet, points) -> np.ndarray:
    """Block matrix ``[K(w_i, w_j)]``."""
    pts = list(points)
    d = params.dim
    out = np.zeros((d * len(pts), d * len(pts)), dtype=complex)
    for i, zi in enumerate(pts):
        for j, zj in enumerate(pts):
            out[i * d : (i + 1) * d, j * d : (j + 1) * d] = kernel_eval(params, zi, zj)
    return out


def weighted_inner(f, g, two_lam: float) -> complex:
    """Inner product of two scalar polynomials in A^(lam): ``sum f_n conj(g_n) n!/(2 lam)_n``."""
    f = np.atleast_1d(np.asarray(f, dtype=complex))
    g = np.atleast_1d(np.asarray(g, dtype=complex))
    n = min(f.size, g.size)
    w = np.array([np.exp(lgamma(k + 1) - log_pochhammer(two_lam, k)) for k in range(n)])
    return complex(np.sum(f[:n] * np.conj(g[:n]) * w))
