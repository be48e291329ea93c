"""Verification suites: each returns a list of ``Check`` records.

Every suite draws from its own generator seeded by ``(seed, suite index)``
so selecting a single suite reproduces the same numbers as ``all``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from math import isfinite

import numpy as np

from . import analysis, kernels, mobius, operator
from .params import ParameterSet
from .series import bs_geometric, bs_mul, max_relative_deviation

SUITES = ("cocycle", "quasi", "leibniz", "blocks", "bounded", "irreducible", "pattern")

LEIBNIZ_POLY = (0.0, 2.0, 0.0, 1.0)  # z^3 + 2z
LEIBNIZ_ELLS = (0.5, 1.0, 1.5, 2.0)


@dataclass
class Check:
    name: str
    passed: bool
    value: float
    tolerance: float
    runtime_ms: float = 0.0

    def as_dict(self, deterministic: bool = False) -> dict:
        value = float(self.value)
        return {
            "name": self.name,
            "status": "pass" if self.passed else "fail",
            "value": value if isfinite(value) else None,
            "tolerance": float(self.tolerance),
            "runtime_ms": 0.0 if deterministic else round(self.runtime_ms, 3),
        }


@dataclass
class SuiteConfig:
    params: ParameterSet
    degree: int = 12
    n_max: int = 200
    seed: int = 0
    samples: int = 200
    tol: float | None = None  # overrides the tolerance of defect-type checks
    margin: float = 0.05

    def rng(self, suite: str) -> np.random.Generator:
        return np.random.default_rng([self.seed, SUITES.index(suite)])

    def defect_tol(self, default: float) -> float:
        return default if self.tol is None else self.tol


def _timed(name, fn, tolerance, compare):
    t0 = time.perf_counter()
    value = fn()
    ms = (time.perf_counter() - t0) * 1e3
    return Check(name, bool(compare(value, tolerance)), float(value), tolerance, ms)


def _le(v, t):
    return v <= t


def _ge(v, t):
    return v >= t


def _lt(v, t):
    return v < t


def cocycle_suite(cfg: SuiteConfig) -> list[Check]:
    rng = cfg.rng("cocycle")
    p = cfg.params
    tol = cfg.defect_tol(1e-9)

    def random_triples():
        worst = 0.0
        for _ in range(cfg.samples):
            g = mobius.random_element(rng, 0.1)
            h = mobius.random_element(rng, 0.1)
            z = mobius.random_disc_point(rng, 0.8)
            worst = max(worst, mobius.cocycle_defect(g, h, z, p))
        return worst

    def inverse_pairs():
        worst = 0.0
        for _ in range(20):
            h = mobius.random_element(rng, 0.1)
            z = mobius.random_disc_point(rng, 0.8)
            worst = max(worst, mobius.cocycle_defect(mobius.inverse(h), h, z, p))
        return worst

    return [
        _timed("cocycle.random_triples", random_triples, tol, _le),
        _timed("cocycle.inverse_pairs", inverse_pairs, tol, _le),
    ]


def p_point_defect(p: ParameterSet, w: complex) -> float:
    """``J(p_{-w}, w) B(0,0) J(p_{-w}, w)^* - K(w, w)`` (Frobenius)."""
    jm = mobius.multiplier(mobius.p_point(-w), w, p)
    lhs = jm @ kernels.b_origin(p) @ jm.conj().T
    return float(np.linalg.norm(lhs - kernels.kernel_eval(p, w, w)))


def quasi_suite(cfg: SuiteConfig) -> list[Check]:
    rng = cfg.rng("quasi")
    p = cfg.params

    def crosscheck():
        return max_relative_deviation(
            kernels.kernel_from_onb(p, cfg.degree), kernels.kernel_closed_form(p, cfg.degree)
        )

    def random_defect():
        worst = 0.0
        for _ in range(cfg.samples):
            g = mobius.random_element(rng, 0.1)
            z = mobius.random_disc_point(rng, 0.8)
            w = mobius.random_disc_point(rng, 0.8)
            worst = max(worst, kernels.quasi_invariance_defect(p, g, z, w))
        return worst

    def diagonal():
        return max(p_point_defect(p, mobius.random_disc_point(rng, 0.4)) for _ in range(20))

    def gram():
        pts = [mobius.random_disc_point(rng, 0.8) for _ in range(6)]
        g = kernels.gram_matrix(p, pts)
        return float(np.linalg.eigvalsh(0.5 * (g + g.conj().T))[0])

    return [
        _timed("quasi.kernel_crosscheck", crosscheck, cfg.defect_tol(1e-9), _le),
        _timed("quasi.random_samples", random_defect, cfg.defect_tol(1e-8), _le),
        _timed("quasi.p_point_diagonal", diagonal, cfg.defect_tol(1e-9), _le),
        _timed("quasi.gram_min_eigenvalue", gram, -1e-10, _ge),
    ]


def leibniz_suite(cfg: SuiteConfig) -> list[Check]:
    rng = cfg.rng("leibniz")

    def worst():
        out = 0.0
        for _ in range(50):
            g = mobius.random_element(rng, 0.1)
            z = mobius.random_disc_point(rng, 0.8)
            for ell in LEIBNIZ_ELLS:
                for k in range(7):
                    out = max(out, mobius.leibniz_defect(g, ell, k, LEIBNIZ_POLY, z))
        return out

    return [_timed("leibniz.max_defect", worst, cfg.defect_tol(1e-8), _le)]


def defining_relation_defect(p: ParameterSet, n: int) -> float:
    """Max coefficient error of ``z * mu_j e^j_{n-j}`` rebuilt from column j of M(n)."""
    block = operator.m_block(n, p)
    worst = 0.0
    for j in range(operator.type_dim(p.m, n)):
        target = kernels.onb_vector(j, n - j, p).times_z() * p.mu[j]
        rebuilt = None
        for k in range(block.shape[0]):
            term = kernels.onb_vector(k, n + 1 - k, p) * (block[k, j] * p.mu[k])
            rebuilt = term if rebuilt is None else rebuilt + term
        deg = max(target.degree, rebuilt.degree)
        diff = np.abs(target.padded(deg) - rebuilt.padded(deg)).max()
        worst = max(worst, diff / max(1.0, np.abs(target.coeffs).max()))
    return float(worst)


def blocks_suite(cfg: SuiteConfig) -> list[Check]:
    p = cfg.params
    ns = np.arange(50, 501)

    def relation():
        return max(defining_relation_defect(p, n) for n in range(2 * p.m + 6))

    dev = {}

    def deviations():
        if "d" not in dev:
            dev["d"] = operator.block_deviations(p, ns)
        return dev["d"]

    def scaled():
        return float(np.max(ns * deviations()))

    def monotone():
        d = deviations()[ns >= 100]
        return float(np.max(np.diff(d)))

    def hs_decay():
        d = deviations()[ns > 400]
        return float(np.max(ns[ns > 400] ** 2 * d**2))

    return [
        _timed("blocks.defining_relation", relation, 1e-10, _le),
        _timed("blocks.scaled_deviation", scaled, 1e3, _lt),
        _timed("blocks.deviation_decreasing", monotone, 0.0, _lt),
        _timed("blocks.hs_increment_decay", hs_decay, 1e6, _lt),
    ]


def bounded_suite(cfg: SuiteConfig) -> list[Check]:
    rng = cfg.rng("bounded")
    p = cfg.params
    n_max = max(cfg.n_max, p.m)

    def certificate():
        c = (1 + cfg.margin) * operator.operator_norm(p, n_max) ** 2
        pts = [mobius.random_disc_point(rng, 0.7) for _ in range(8)]
        return operator.boundedness_certificate(p, c, pts)

    def norm_growth():
        sizes = sorted({max(p.m, n_max // 4), max(p.m, n_max // 2), n_max})
        norms = [operator.operator_norm(p, n) for n in sizes]
        return float(max(0.0, -min(np.diff(norms), default=0.0)))

    def mu_prime():
        q = operator.mu_prime_search(p)
        if q is None:
            return float("inf")
        eps = p.lam - q.lam
        lhs = kernels.kernel_closed_form(p, cfg.degree)
        rhs = bs_mul(bs_geometric(2 * eps, p.m, cfg.degree), kernels.kernel_from_onb(q, cfg.degree))
        return max_relative_deviation(lhs, rhs)

    return [
        _timed("bounded.certificate", certificate, -1e-10, _ge),
        _timed("bounded.norm_nondecreasing", norm_growth, 0.0, _le),
        _timed("bounded.mu_prime_factorization", mu_prime, cfg.defect_tol(1e-9), _le),
    ]


def irreducible_suite(cfg: SuiteConfig) -> list[Check]:
    p = cfg.params

    def dim():
        return analysis.irreducibility_check(p, 2 * p.m + 4).commutant_dim

    return [_timed("irreducible.commutant_dimension", dim, 1, _le)]


def pattern_suite(cfg: SuiteConfig) -> list[Check]:
    p = cfg.params
    checks = []
    for ell in range(p.m):
        t0 = time.perf_counter()
        ok, corner = analysis.a_pattern_ok(ell, p)
        ms = (time.perf_counter() - t0) * 1e3
        checks.append(Check(f"pattern.a[{ell}]", ok, corner.real, 0.0, ms))

    def sweep():
        return analysis.lemma_product_sweep(p)[1]

    checks.append(_timed("pattern.lemma_product", sweep, 0, _le))
    return checks


RUNNERS = {
    "cocycle": cocycle_suite,
    "quasi": quasi_suite,
    "leibniz": leibniz_suite,
    "blocks": blocks_suite,
    "bounded": bounded_suite,
    "irreducible": irreducible_suite,
    "pattern": pattern_suite,
}


def run(cfg: SuiteConfig, selector: str = "all") -> list[Check]:
    names = SUITES if selector == "all" else (selector,)
    out = []
    for name in names:
        out.extend(RUNNERS[name](cfg))
    return out
