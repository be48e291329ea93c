"""Truncated series arithmetic.

Two containers live here:

``BiSeries``
    a bivariate power series ``sum C[s, t] z**s conj(w)**t`` whose
    coefficients are ``(m+1) x (m+1)`` complex matrices, truncated at order
    ``N`` in each variable.  Kernels ``K(z, w)`` are stored this way.

``Jet``
    a univariate Taylor expansion ``sum c[k] h**k`` of a function at a base
    point, truncated at order ``K``.  Used to differentiate compositions
    exactly (up to rounding).

Products discard every term above the truncation order, so a coefficient of
a product only depends on coefficients of equal or lower order.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import numpy as np


class SeriesError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class BiSeries:
    coeffs: np.ndarray  # shape (N+1, N+1, m+1, m+1)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 4 or c.shape[0] != c.shape[1] or c.shape[2] != c.shape[3]:
            raise SeriesError(f"bad coefficient array shape {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def m(self) -> int:
        return self.coeffs.shape[2] - 1

    @property
    def dim(self) -> int:
        return self.coeffs.shape[2]

    def __getitem__(self, st):
        return self.coeffs[st]

    def __add__(self, other: BiSeries) -> BiSeries:
        _check_compatible(self, other)
        return BiSeries(self.coeffs + other.coeffs)

    def __sub__(self, other: BiSeries) -> BiSeries:
        _check_compatible(self, other)
        return BiSeries(self.coeffs - other.coeffs)

    def __neg__(self) -> BiSeries:
        return BiSeries(-self.coeffs)

    def scale(self, x: complex) -> BiSeries:
        return BiSeries(x * self.coeffs)

    def __matmul__(self, other: BiSeries) -> BiSeries:
        return bs_mul(self, other)

    def conjugate_by(self, left: np.ndarray, right: np.ndarray) -> BiSeries:
        """Return ``left @ C[s, t] @ right`` for every coefficient."""
        return BiSeries(np.einsum("ij,stjk,kl->stil", left, self.coeffs, right))

    def adjoint(self) -> BiSeries:
        """Series of ``K(w, z)^*``: swap (s, t) and conjugate-transpose."""
        return BiSeries(np.conj(self.coeffs.transpose(1, 0, 3, 2)))

    def z_slice(self) -> BiSeries:
        """Series of ``K(z, 0)`` (only the t = 0 column kept)."""
        c = np.zeros_like(self.coeffs)
        c[:, 0] = self.coeffs[:, 0]
        return BiSeries(c)

    def w_slice(self) -> BiSeries:
        """Series of ``K(0, w)`` (only the s = 0 row kept)."""
        c = np.zeros_like(self.coeffs)
        c[0, :] = self.coeffs[0, :]
        return BiSeries(c)

    def evaluate(self, z: complex, w: complex) -> np.ndarray:
        n = self.degree + 1
        zp = np.asarray(z, dtype=complex) ** np.arange(n)
        wp = np.conj(np.asarray(w, dtype=complex)) ** np.arange(n)
        return np.einsum("s,t,stij->ij", zp, wp, self.coeffs)

    def coefficient_list(self) -> list[np.ndarray]:
        n = self.degree + 1
        return [self.coeffs[s, t] for s in range(n) for t in range(n)]


def _check_compatible(a: BiSeries, b: BiSeries) -> None:
    if a.coeffs.shape != b.coeffs.shape:
        raise SeriesError(
            f"series shapes differ: degree {a.degree} vs {b.degree}, m {a.m} vs {b.m}"
        )


def bs_zeros(m: int, degree: int) -> BiSeries:
    return BiSeries(np.zeros((degree + 1, degree + 1, m + 1, m + 1), dtype=complex))


def bs_constant(mat, degree: int) -> BiSeries:
    mat = np.asarray(mat, dtype=complex)
    c = np.zeros((degree + 1, degree + 1) + mat.shape, dtype=complex)
    c[0, 0] = mat
    return BiSeries(c)


def bs_identity(m: int, degree: int) -> BiSeries:
    return bs_constant(np.eye(m + 1), degree)


def bs_monomial(mat, s: int, t: int, degree: int) -> BiSeries:
    """``mat * z**s * conj(w)**t``; zero if the monomial exceeds the truncation."""
    mat = np.asarray(mat, dtype=complex)
    c = np.zeros((degree + 1, degree + 1) + mat.shape, dtype=complex)
    if s <= degree and t <= degree:
        c[s, t] = mat
    return BiSeries(c)


def bs_exp_nilpotent(nil, degree: int, variable: str) -> BiSeries:
    """``exp(x * nil)`` with ``x = z`` or ``x = conj(w)``; ``nil`` must be nilpotent.

    The exponential is a finite sum, so the result is exact up to truncation.
    """
    nil = np.asarray(nil, dtype=complex)
    d = nil.shape[0]
    c = np.zeros((degree + 1, degree + 1, d, d), dtype=complex)
    term = np.eye(d, dtype=complex)
    for k in range(min(d, degree + 1)):
        if variable == "z":
            c[k, 0] = term / factorial(k)
        elif variable == "w":
            c[0, k] = term / factorial(k)
        else:
            raise SeriesError(f"variable must be 'z' or 'w', got {variable!r}")
        term = term @ nil
    if d <= degree and np.abs(term).max() > 1e-12 * max(1.0, np.abs(nil).max()) ** d:
        raise SeriesError("matrix is not nilpotent")
    return BiSeries(c)


def bs_mul(a: BiSeries, b: BiSeries) -> BiSeries:
    """Truncated Cauchy product; matrix order is preserved (``a`` on the left)."""
    _check_compatible(a, b)
    n = a.degree + 1
    ac, bc = a.coeffs, b.coeffs
    out = np.zeros_like(ac)
    for s1 in range(n):
        for t1 in range(n):
            left = ac[s1, t1]
            if not left.any():
                continue
            out[s1:, t1:] += np.einsum("ij,stjk->stik", left, bc[: n - s1, : n - t1])
    return BiSeries(out)


def bs_geometric(alpha: float, m: int, degree: int) -> BiSeries:
    """``(1 - z conj(w))**(-alpha) * I`` truncated at ``degree``.

    The coefficient of ``(z conj(w))**n`` is ``(alpha)_n / n!``.
    """
    c = np.zeros((degree + 1, degree + 1, m + 1, m + 1), dtype=complex)
    eye = np.eye(m + 1)
    coef = 1.0
    for n in range(degree + 1):
        c[n, n] = coef * eye
        coef *= (alpha + n) / (n + 1)
    return BiSeries(c)


def bs_invert(a: BiSeries) -> BiSeries:
    """Two-sided inverse of ``a`` up to the truncation order."""
    n = a.degree + 1
    ac = a.coeffs
    try:
        inv0 = np.linalg.inv(ac[0, 0])
    except np.linalg.LinAlgError as exc:
        raise SeriesError("constant coefficient is singular") from exc
    if not np.all(np.isfinite(inv0)) or np.linalg.cond(ac[0, 0]) > 1e14:
        raise SeriesError("constant coefficient is singular")
    out = np.zeros_like(ac)
    for total in range(2 * n - 1):
        for s in range(max(0, total - n + 1), min(total, n - 1) + 1):
            t = total - s
            acc = np.eye(a.dim, dtype=complex) if (s, t) == (0, 0) else np.zeros_like(inv0)
            for s1 in range(s + 1):
                for t1 in range(t + 1):
                    if s1 == 0 and t1 == 0:
                        continue
                    acc = acc - ac[s1, t1] @ out[s - s1, t - t1]
            out[s, t] = inv0 @ acc
    return BiSeries(out)


def max_relative_deviation(a: BiSeries, b: BiSeries, floor: float = 1e-12) -> float:
    """Largest coefficientwise relative deviation between two series.

    For each (s, t) the max-norm of the difference is divided by the larger of
    the two coefficient max-norms; blocks below ``floor`` times the overall
    scale count as absolute.
    """
    _check_compatible(a, b)
    diff = np.abs(a.coeffs - b.coeffs).max(axis=(2, 3))
    size = np.maximum(np.abs(a.coeffs).max(axis=(2, 3)), np.abs(b.coeffs).max(axis=(2, 3)))
    scale = max(size.max(), np.finfo(float).tiny)
    return float((diff / np.maximum(size, floor * scale)).max())


def bs_allclose(a: BiSeries, b: BiSeries, rtol: float = 1e-9) -> bool:
    return max_relative_deviation(a, b) <= rtol


# --------------------------------------------------------------------- jets


@dataclass(frozen=True, eq=False)
class Jet:
    base: complex
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        if c.size == 0:
            raise SeriesError("a jet needs at least one coefficient")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def variable(cls, base: complex, order: int) -> Jet:
        c = np.zeros(order + 1, dtype=complex)
        c[0] = base
        if order >= 1:
            c[1] = 1.0
        return cls(base, c)

    @classmethod
    def constant(cls, base: complex, value: complex, order: int) -> Jet:
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls(base, c)

    @property
    def order(self) -> int:
        return self.coeffs.size - 1

    def _coerce(self, other) -> Jet:
        if isinstance(other, Jet):
            if other.order != self.order:
                raise SeriesError(f"jet orders differ: {self.order} vs {other.order}")
            return other
        return Jet.constant(self.base, other, self.order)

    def __add__(self, other) -> Jet:
        other = self._coerce(other)
        return Jet(self.base, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __sub__(self, other) -> Jet:
        other = self._coerce(other)
        return Jet(self.base, self.coeffs - other.coeffs)

    def __neg__(self) -> Jet:
        return Jet(self.base, -self.coeffs)

    def __mul__(self, other) -> Jet:
        if not isinstance(other, Jet):
            return Jet(self.base, self.coeffs * other)
        other = self._coerce(other)
        prod = np.convolve(self.coeffs, other.coeffs)[: self.order + 1]
        return Jet(self.base, prod)

    __rmul__ = __mul__

    def reciprocal(self) -> Jet:
        c = self.coeffs
        if c[0] == 0:
            raise SeriesError("cannot invert a jet with zero constant term")
        out = np.zeros_like(c)
        out[0] = 1.0 / c[0]
        for k in range(1, c.size):
            out[k] = -np.dot(c[1 : k + 1], out[k - 1 :: -1][:k]) / c[0]
        return Jet(self.base, out)

    def __truediv__(self, other) -> Jet:
        if not isinstance(other, Jet):
            return Jet(self.base, self.coeffs / other)
        return self * self._coerce(other).reciprocal()

    def derivative(self, k: int) -> complex:
        """k-th derivative of the expanded function at the base point."""
        if k > self.order:
            raise SeriesError(f"derivative {k} exceeds jet order {self.order}")
        return factorial(k) * self.coeffs[k]


def jet_pow(j: Jet, alpha: float) -> Jet:
    """Principal-branch power ``j**alpha``; needs ``Re(c0) > 0``.

    Uses the recurrence obtained from ``x * y' = alpha * x' * y``.
    """
    c = j.coeffs
    if not c[0].real > 0:
        raise SeriesError(f"principal power needs Re(c0) > 0, got c0 = {c[0]}")
    out = np.zeros_like(c)
    out[0] = np.exp(alpha * np.log(c[0]))
    for k in range(1, c.size):
        i = np.arange(1, k + 1)
        out[k] = np.sum((alpha * i - (k - i)) * c[i] * out[k - i]) / (k * c[0])
    return Jet(j.base, out)


def jet_polyval(coeffs, x: Jet) -> Jet:
    """Compose a polynomial (ascending coefficients) with a jet by Horner's rule."""
    coeffs = np.asarray(coeffs, dtype=complex)
    acc = Jet.constant(x.base, 0.0, x.order)
    for a in coeffs[::-1]:
        acc = acc * x + a
    return acc
