"""SU(1,1) elements acting on the unit disc and the matrix multiplier J(g, z).

Elements are stored by the pair (a, b) of the matrix ``[[a, b], [conj(b), conj(a)]]``.
Fractional powers of ``g'`` are taken on the principal branch, which is only
trusted for elements in the neighbourhood ``|a - 1| < 1/2, |b| < 1/2`` of the
identity; there ``Re(conj(b) z + conj(a)) > 0`` on the whole disc.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np
from numpy.polynomial import polynomial as P

from .params import ParameterSet
from .series import Jet, jet_polyval, jet_pow


class BranchError(ValueError):
    """Raised when a principal-branch power is requested outside its domain."""


@dataclass(frozen=True)
class GroupElement:
    a: complex
    b: complex

    def __post_init__(self):
        a, b = complex(self.a), complex(self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if abs(abs(a) ** 2 - abs(b) ** 2 - 1) > 1e-12 * max(1.0, abs(a) ** 2):
            raise ValueError(f"|a|^2 - |b|^2 must be 1, got {abs(a)**2 - abs(b)**2}")

    @property
    def branch_valid(self) -> bool:
        return abs(self.a - 1) < 0.5 and abs(self.b) < 0.5

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.b.conjugate(), self.a.conjugate()]])


IDENTITY = GroupElement(1.0, 0.0)


def from_matrix(mat) -> GroupElement:
    mat = np.asarray(mat, dtype=complex)
    return GroupElement(mat[0, 0], mat[0, 1])


def p_point(w: complex) -> GroupElement:
    """The element ``(1 - |w|^2)^{-1/2} [[1, w], [conj(w), 1]]``, mapping 0 to w."""
    w = complex(w)
    s = 1.0 / np.sqrt(1.0 - abs(w) ** 2)
    return GroupElement(s, s * w)


def rotation(theta: float) -> GroupElement:
    return GroupElement(np.exp(0.5j * theta), 0.0)


def require_branch_valid(*elements: GroupElement) -> None:
    for g in elements:
        if not g.branch_valid:
            raise BranchError(f"element (a={g.a}, b={g.b}) lies outside |a-1|<1/2, |b|<1/2")


def act(g: GroupElement, z: complex) -> complex:
    return (g.a * z + g.b) / (g.b.conjugate() * z + g.a.conjugate())


def compose(g: GroupElement, h: GroupElement) -> GroupElement:
    """Matrix product g h, so that ``act(compose(g, h), z) == act(g, act(h, z))``."""
    return GroupElement(g.a * h.a + g.b * h.b.conjugate(), g.a * h.b + g.b * h.a.conjugate())


def inverse(g: GroupElement) -> GroupElement:
    return GroupElement(g.a.conjugate(), -g.b)


def _denominator(g: GroupElement, z: complex) -> complex:
    return g.b.conjugate() * z + g.a.conjugate()


def deriv(g: GroupElement, z: complex) -> complex:
    return _denominator(g, z) ** -2


def deriv_power(g: GroupElement, z: complex, lam: float) -> complex:
    """``g'(z)**lam`` as ``exp(-2 lam Log(conj(b) z + conj(a)))``."""
    d = _denominator(g, z)
    if not d.real > 0:
        raise BranchError(f"Re(conj(b) z + conj(a)) = {d.real} is not positive")
    return np.exp(-2.0 * lam * np.log(d))


def c_of(g: GroupElement) -> complex:
    """The constant c with ``g'' = -2 c (g')**(3/2)``; equals conj(b)."""
    return g.b.conjugate()


def multiplier(g: GroupElement, z: complex, params: ParameterSet) -> np.ndarray:
    """Lower-triangular matrix J(g, z) with entries
    ``binom(p, l) (-c)^(p-l) (g')^(lam - m/2 + (p+l)/2)(z)`` for p >= l."""
    m = params.m
    mc = -c_of(g)
    out = np.zeros((m + 1, m + 1), dtype=complex)
    for p in range(m + 1):
        for ell in range(p + 1):
            power = params.lam - m / 2 + (p + ell) / 2
            out[p, ell] = comb(p, ell) * mc ** (p - ell) * deriv_power(g, z, power)
    return out


def cocycle_defect(g: GroupElement, h: GroupElement, z: complex, params: ParameterSet) -> float:
    """Frobenius norm of ``J(gh, z) - J(h, z) J(g, h z)``."""
    gh = compose(g, h)
    require_branch_valid(g, h, gh)
    lhs = multiplier(gh, z, params)
    rhs = multiplier(h, z, params) @ multiplier(g, act(h, z), params)
    return float(np.linalg.norm(lhs - rhs))


def _pochhammer(x: float, n: int) -> float:
    out = 1.0
    for i in range(n):
        out *= x + i
    return out


def leibniz_defect(
    g: GroupElement, ell: float, k: int, f, z: complex, order: int | None = None
) -> float:
    """Compare the k-th derivative of ``(g')^ell (f o g)`` with its closed expansion.

    The left side comes from jet arithmetic at ``z``; the right side is
    ``sum_i binom(k, i) (2 ell + i)_{k-i} (-c)^{k-i} (g')^{ell + (k+i)/2} f^{(i)}(g z)``.
    ``f`` is a polynomial given by ascending coefficients.
    """
    require_branch_valid(g)
    order = k + 1 if order is None else order
    if k > order - 1:
        raise ValueError(f"k = {k} needs jet order > k, got {order}")
    f = np.asarray(f, dtype=complex)

    h = Jet.variable(z, order)
    den = h * g.b.conjugate() + g.a.conjugate()
    num = h * g.a + g.b
    lhs_jet = jet_pow(den, -2.0 * ell) * jet_polyval(f, num / den)
    lhs = lhs_jet.derivative(k)

    gz = act(g, z)
    mc = -c_of(g)
    rhs = 0.0
    for i in range(k + 1):
        fi = P.polyval(gz, P.polyder(f, i)) if i < f.size else 0.0
        rhs += (
            comb(k, i)
            * _pochhammer(2 * ell + i, k - i)
            * mc ** (k - i)
            * deriv_power(g, z, ell + (k + i) / 2)
            * fi
        )
    return float(abs(lhs - rhs))


def random_element(rng: np.random.Generator, b_max: float = 0.1, theta_max: float = 0.2) -> GroupElement:
    """Sample a branch-valid element with ``|b| <= b_max``.

    b is drawn uniformly from the disc of radius ``b_max``; a gets modulus
    ``sqrt(1 + |b|^2)`` and a phase uniform in ``[-theta_max, theta_max]``.
    """
    b = b_max * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
    a = np.sqrt(1 + abs(b) ** 2) * np.exp(1j * rng.uniform(-theta_max, theta_max))
    g = GroupElement(a, b)
    require_branch_valid(g)
    return g


def random_disc_point(rng: np.random.Generator, radius: float = 0.8) -> complex:
    return complex(radius * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform()))

