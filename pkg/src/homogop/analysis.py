"""Irreducibility and inequivalence checks.

Irreducibility is decided through the commutant of the Taylor coefficients of
the normalised kernel: the operator is irreducible exactly when only scalar
matrices commute with all of them.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import comb, factorial

import numpy as np

from .kernels import b_origin, d_series, kernel_closed_form, shift_matrix
from .params import ParameterError, ParameterSet
from .series import (
    BiSeries,
    bs_constant,
    bs_exp_nilpotent,
    bs_invert,
    bs_mul,
)


@dataclass(frozen=True)
class InvariantTuple:
    lam: float
    mu: tuple[float, ...]  # mu_1..mu_m


@dataclass(frozen=True)
class IrreducibilityReport:
    commutant_dim: int
    reducible: bool
    degree: int


def hat_kernel(params: ParameterSet, degree: int | None = None) -> BiSeries:
    """Normalised kernel ``K0(z,0)^-1 K0(z,w) K0(0,w)^-1`` with ``K0 = B^-1/2 K B^-1/2``."""
    m = params.m
    degree = 2 * m + 2 if degree is None else degree
    r = np.diag(1.0 / np.sqrt(np.diag(b_origin(params))))
    k0 = kernel_closed_form(params, degree).conjugate_by(r, r)
    return bs_mul(bs_mul(bs_invert(k0.z_slice()), k0), bs_invert(k0.w_slice()))


def a_series(params: ParameterSet, degree: int | None = None) -> BiSeries:
    """The polynomial ``A = exp(-zS*) B^-1 D exp(w*S) B exp(zS*) D B^-1 exp(-w*S)``.

    Every factor is a finite expansion, so coefficients up to ``degree`` are exact.
    """
    m = params.m
    degree = 4 * m if degree is None else degree
    s = shift_matrix(m)
    b = b_origin(params)
    binv = np.diag(1.0 / np.diag(b))
    d = d_series(params, degree)
    factors = [
        bs_exp_nilpotent(-s.T, degree, "z"),
        bs_constant(binv, degree),
        d,
        bs_exp_nilpotent(s, degree, "w"),
        bs_constant(b, degree),
        bs_exp_nilpotent(s.T, degree, "z"),
        d,
        bs_constant(binv, degree),
        bs_exp_nilpotent(-s, degree, "w"),
    ]
    out = factors[0]
    for f in factors[1:]:
        out = bs_mul(out, f)
    return out


def a_poly(ell: int, params: ParameterSet) -> np.ndarray:
    """Coefficient ``a(l)`` of ``z^(m+l+1) conj(w)^(m+l)`` in A, ``0 <= l <= m-1``."""
    m = params.m
    if not 0 <= ell <= m - 1:
        raise ValueError(f"ell must lie in 0..{m - 1}, got {ell}")
    return a_series(params, 2 * m)[m + ell + 1, m + ell]


def a_pattern_ok(ell: int, params: ParameterSet, tol: float = 1e-12) -> tuple[bool, float]:
    """Check the zero pattern of a(l) and return ``(ok, a(l)[m-l-1, m-l])``.

    Entries must vanish unless ``n - k == 1`` and ``k <= m - l - 1``; the entry
    at ``(m-l-1, m-l)`` must be real and negative.
    """
    m = params.m
    a = a_poly(ell, params)
    scale = max(np.abs(a).max(), 1.0)
    ok = True
    for k, n in product(range(m + 1), repeat=2):
        if n - k != 1 or k > m - ell - 1:
            ok &= abs(a[k, n]) <= tol * scale
    corner = a[m - ell - 1, m - ell]
    ok &= abs(corner.imag) <= tol * scale and corner.real < 0
    return bool(ok), complex(corner)


def commutant_dimension(family, rel_threshold: float = 1e-8) -> int:
    """Dimension of ``{X : XC = CX for all C in family}``.

    Each member is scaled to unit norm, the equations ``(I (x) C - C^T (x) I) vec X = 0``
    are stacked, and singular values below ``rel_threshold * sigma_max`` count
    as zero.
    """
    mats = [np.asarray(c, dtype=complex) for c in family]
    if not mats:
        raise ValueError("family must be nonempty")
    d = mats[0].shape[0]
    eye = np.eye(d)
    rows = []
    for c in mats:
        if c.shape != (d, d):
            raise ValueError("all matrices in the family must share one shape")
        norm = np.abs(c).max()
        if norm == 0:
            continue
        c = c / norm
        rows.append(np.kron(eye, c) - np.kron(c.T, eye))
    if not rows:
        return d * d
    sv = np.linalg.svd(np.vstack(rows), compute_uv=False)
    if sv[0] == 0:
        return d * d
    return int(d * d - np.sum(sv > rel_threshold * sv[0]))


def irreducibility_check(params: ParameterSet, degree: int | None = None) -> IrreducibilityReport:
    m = params.m
    degree = 2 * m + 4 if degree is None else degree
    if degree < 2 * m + 2:
        raise ValueError(f"degree must be at least 2m+2 = {2 * m + 2}")
    dim = commutant_dimension(hat_kernel(params, degree).coefficient_list())
    return IrreducibilityReport(commutant_dim=dim, reducible=dim > 1, degree=degree)


def invariants(params: ParameterSet) -> InvariantTuple:
    return InvariantTuple(params.lam, params.mu[1:])


def equivalence_check(p: ParameterSet, q: ParameterSet, tol: float = 1e-12) -> bool:
    """Unitary equivalence within the family: same lambda and same mu.

    An inequivalent verdict is cross-checked against B(0,0), which for equal
    lambda determines mu.
    """
    if p.m != q.m:
        raise ParameterError(f"cannot compare m = {p.m} with m = {q.m}")
    ip, iq = invariants(p), invariants(q)
    same = abs(ip.lam - iq.lam) <= tol and all(abs(x - y) <= tol for x, y in zip(ip.mu, iq.mu))
    if not same and abs(ip.lam - iq.lam) <= tol:
        if np.allclose(np.diag(b_origin(p)), np.diag(b_origin(q)), rtol=0, atol=tol):
            raise AssertionError("different mu produced the same B(0,0); encoding bug")
    return same


def d_tilde(params: ParameterSet, s: int) -> np.ndarray:
    """``B^-1 D_s`` where ``D_s = diag(binom(m - l, s))``."""
    m = params.m
    ds = np.diag([comb(m - ell, s) for ell in range(m + 1)]).astype(float)
    return np.diag(1.0 / np.diag(b_origin(params))) @ ds


def lemma_product_matrix(params: ParameterSet, i, j, s, t, p, q) -> np.ndarray:
    sm = shift_matrix(params.m)
    st = sm.T
    mp = np.linalg.matrix_power
    return (
        mp(st, i)
        @ d_tilde(params, s)
        @ mp(sm, p)
        @ b_origin(params)
        @ mp(st, q)
        @ d_tilde(params, t)
        @ mp(sm, j)
    )


def lemma_product_check(params: ParameterSet, i, j, s, t, p, q) -> bool:
    """Every nonzero entry (k, n) of the product must satisfy the index constraints."""
    m = params.m
    mat = lemma_product_matrix(params, i, j, s, t, p, q)
    scale = np.abs(mat).max()
    if scale == 0:
        return True
    for k, n in zip(*np.nonzero(np.abs(mat) > 1e-12 * scale)):
        ok = (
            0 <= s <= m - k - i
            and 0 <= t <= m - n - j
            and 0 <= p <= k + i
            and 0 <= q <= n + j
            and k + i - p == n + j - q
        )
        if not ok:
            return False
    return True


def lemma_product_sweep(params: ParameterSet) -> tuple[int, int]:
    """Run ``lemma_product_check`` over all 6-tuples; returns ``(checked, failures)``."""
    m = params.m
    failures = 0
    checked = 0
    for idx in product(range(m + 1), repeat=6):
        checked += 1
        failures += not lemma_product_check(params, *idx)
    return checked, failures


def a_from_terms(ell: int, params: ParameterSet) -> np.ndarray:
    """a(l) assembled directly from the six-fold term sum (independent of BiSeries)."""
    m = params.m
    total = np.zeros((m + 1, m + 1))
    for i, j, p, q, s, t in product(range(m + 1), repeat=6):
        if s + t + i + q != m + ell + 1 or s + t + p + j != m + ell:
            continue
        c = (-1) ** (i + j + s + t) / (factorial(i) * factorial(j) * factorial(p) * factorial(q))
        total += c * lemma_product_matrix(params, i, j, s, t, p, q)
    return total
