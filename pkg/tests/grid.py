"""Shared parameter grid: m in 0..3, lambda in {m/2 + 0.3, m/2 + 1, 3}, mu_j ~ U[0.5, 2]."""

import numpy as np

from homogop.params import ParameterSet

MU_LOW, MU_HIGH = 0.5, 2.0


def lambdas(m):
    return (m / 2 + 0.3, m / 2 + 1.0, 3.0)


def grid(mu_per_point=3, seed=0, ms=(0, 1, 2, 3)):
    rng = np.random.default_rng(seed)
    out = []
    for m in ms:
        for lam in lambdas(m):
            for _ in range(mu_per_point):
                mu = (1.0,) + tuple(rng.uniform(MU_LOW, MU_HIGH, m))
                out.append(ParameterSet(m, lam, mu))
    return out


def grid_ids(params):
    return [f"m{p.m}-lam{p.lam:.2f}-mu{'_'.join(f'{x:.2f}' for x in p.mu)}" for p in params]
