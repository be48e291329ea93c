from __future__ import annotations

from dataclasses import dataclass


class ParameterError(ValueError):
    """Raised for parameter sets outside the admissible region."""


@dataclass(frozen=True)
class ParameterSet:
    """Selects one operator: dimension ``m + 1``, weight ``lam`` and scales ``mu``.

    ``mu[0]`` is normalised to 1 and ``lam > m / 2`` is required, otherwise
    the kernel is not positive definite.
    """

    m: int
    lam: float
    mu: tuple[float, ...]

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 0:
            raise ParameterError(f"m must be a nonnegative integer, got {self.m}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "lam", float(self.lam))
        mu = tuple(float(x) for x in self.mu)
        object.__setattr__(self, "mu", mu)
        if len(mu) != self.m + 1:
            raise ParameterError(f"mu needs m+1 = {self.m + 1} entries, got {len(mu)}")
        if not self.lam > self.m / 2:
            raise ParameterError(
                f"lambda must exceed m/2 = {self.m / 2} (got lambda = {self.lam})"
            )
        if mu[0] != 1.0:
            raise ParameterError(f"mu_0 must equal 1, got {mu[0]}")
        if any(not x > 0 for x in mu):
            raise ParameterError(f"all mu_j must be positive, got {mu}")

    @classmethod
    def create(cls, m: int, lam: float, mu=None) -> ParameterSet:
        """Convenience constructor; ``mu`` defaults to all ones."""
        if mu is None:
            mu = (1.0,) * (m + 1)
        return cls(m, lam, tuple(mu))

    @property
    def dim(self) -> int:
        return self.m + 1

    def two_lambda(self, j: int) -> float:
        """The shifted weight ``2 lambda_j = 2 lambda - m + 2 j``."""
        return 2 * self.lam - self.m + 2 * j
