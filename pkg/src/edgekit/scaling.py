"""Edge scaling constants for the Laguerre unitary ensemble."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .errors import DomainError


@dataclass(frozen=True)
class EnsembleParams:
    """An LUE instance: X is (N + a) x N, the spectrum is that of X* X."""

    big_n: int
    a: int
    n: int = field(init=False)
    gamma: float = field(init=False)

    def __post_init__(self):
        if int(self.big_n) != self.big_n or self.big_n < 1:
            raise DomainError(f"N must be a positive integer, got {self.big_n}")
        if int(self.a) != self.a or self.a < 0:
            raise DomainError(f"a must be a nonnegative integer, got {self.a}")
        object.__setattr__(self, "big_n", int(self.big_n))
        object.__setattr__(self, "a", int(self.a))
        object.__setattr__(self, "n", self.big_n + self.a)
        object.__setattr__(self, "gamma", self.big_n / (self.big_n + self.a))

    @classmethod
    def from_gamma(cls, big_n: int, gamma: float) -> "EnsembleParams":
        """Nearest integer a to N(1 - gamma)/gamma; the realized ratio is stored in .gamma."""
        if not 0.0 < gamma <= 1.0:
            raise DomainError(f"gamma must lie in (0, 1], got {gamma}")
        return cls(big_n, int(round(big_n * (1.0 - gamma) / gamma)))


class Side(str, Enum):
    LEFT_SOFT = "left_soft"
    RIGHT_SOFT = "right_soft"


@dataclass(frozen=True)
class EdgeScaling:
    """Affine map s -> mu - sigma*s (left edge) or mu + sigma*s (right edge)."""

    mu: float
    sigma: float
    side: Side = Side.LEFT_SOFT

    def to_spectrum(self, s):
        if self.side == Side.LEFT_SOFT:
            return self.mu - self.sigma * s
        return self.mu + self.sigma * s

    def from_spectrum(self, x):
        if self.side == Side.LEFT_SOFT:
            return (self.mu - x) / self.sigma
        return (x - self.mu) / self.sigma


@dataclass(frozen=True)
class DeviationParams:
    theta_left: float
    theta_right: float
    delta_left: float
    delta_right: float


def mu_sigma_left(j: int, k: int) -> tuple[float, float]:
    """Left soft edge pair for index pair j > k; sigma is normalized to be positive."""
    if j <= k:
        raise DomainError(f"left pair needs j > k, got j={j}, k={k}")
    if k < 0:
        raise DomainError("k must be nonnegative")
    rj, rk = math.sqrt(j + 0.5), math.sqrt(k + 0.5)
    d = rj - rk
    return d * d, d * (1.0 / rk - 1.0 / rj) ** (1.0 / 3.0)


def mu_sigma_right(j: int, k: int) -> tuple[float, float]:
    """Right soft edge pair."""
    if j < 0 or k < 0:
        raise DomainError("indices must be nonnegative")
    rj, rk = math.sqrt(j + 0.5), math.sqrt(k + 0.5)
    s = rj + rk
    return s * s, s * (1.0 / rj + 1.0 / rk) ** (1.0 / 3.0)


def _combine(p1, p2):
    (m1, s1), (m2, s2) = p1, p2
    den = 1.0 / (m1 * math.sqrt(s1)) + 1.0 / (m2 * math.sqrt(s2))
    mu = (1.0 / math.sqrt(s1) + 1.0 / math.sqrt(s2)) / den
    sigma = (math.sqrt(s1) / m1 + math.sqrt(s2) / m2) / den
    return mu, sigma


def left_pairs(params: EnsembleParams):
    """The two elementary left pairs (n-1, N) and (n, N-1)."""
    if params.a < 2:
        raise DomainError(f"left soft edge scaling needs a >= 2, got a={params.a}")
    n, big_n = params.n, params.big_n
    return mu_sigma_left(n - 1, big_n), mu_sigma_left(n, big_n - 1)


def composite_left(params: EnsembleParams) -> EdgeScaling:
    """Weighted combination of the pairs (n-1, N) and (n, N-1) used for the least eigenvalue."""
    mu, sigma = _combine(*left_pairs(params))
    return EdgeScaling(mu, sigma, Side.LEFT_SOFT)


def composite_right(params: EnsembleParams) -> EdgeScaling:
    """Right edge analogue built from the pairs (n-1, N) and (n, N-1)."""
    n, big_n = params.n, params.big_n
    mu, sigma = _combine(mu_sigma_right(n - 1, big_n), mu_sigma_right(n, big_n - 1))
    return EdgeScaling(mu, sigma, Side.RIGHT_SOFT)


def theta(params: EnsembleParams, scaling: EdgeScaling, pair_sigma: float) -> float:
    return (params.n * params.big_n) ** 0.25 * math.sqrt(pair_sigma) * scaling.sigma / scaling.mu


def deviation_params(params: EnsembleParams, scaling: EdgeScaling) -> DeviationParams:
    """theta_{j,k} for the pairs (n-1, N), (n, N-1) and the relative offsets of their centres.

    delta_{j,k} = (mu_{j,k} - mu_tilde)/kappa_{j,k} with kappa_{j,k} = (j + k + 1)/2.
    """
    if scaling.side != Side.LEFT_SOFT:
        raise DomainError("deviation parameters are defined for the left soft edge")
    (m1, s1), (m2, s2) = left_pairs(params)
    n, big_n = params.n, params.big_n
    k1 = (n - 1 + big_n + 1) / 2.0
    k2 = (n + big_n - 1 + 1) / 2.0
    return DeviationParams(
        theta_left=theta(params, scaling, s1),
        theta_right=theta(params, scaling, s2),
        delta_left=(m1 - scaling.mu) / k1,
        delta_right=(m2 - scaling.mu) / k2,
    )


def theta_from_pairs(params: EnsembleParams):
    """Same thetas through the ratio form (s~/s)(mu/mu~) * (nN / ((j + 1/2)(k + 1/2)))^(1/4).

    Uses (n-1/2)(N+1/2) = (j+1/2)(k+1/2) for the pair (n-1, N) and (n+1/2)(N-1/2) for (n, N-1),
    together with mu_{j,k} = sigma_{j,k}^{3/2} ((j+1/2)(k+1/2))^{1/4} for left pairs.
    """
    (m1, s1), (m2, s2) = left_pairs(params)
    sc = composite_left(params)
    n, big_n = params.n, params.big_n
    t1 = (sc.sigma / s1) * (m1 / sc.mu) * (n * big_n / ((n - 0.5) * (big_n + 0.5))) ** 0.25
    t2 = (sc.sigma / s2) * (m2 / sc.mu) * (n * big_n / ((n + 0.5) * (big_n - 0.5))) ** 0.25
    return t1, t2
