"""Quadrature rules on truncated half-lines."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError

# region split constant: the Airy approximation is used on s <= E0 * mu/sigma
E0 = 1.0 - 1.0 / math.e


@lru_cache(maxsize=64)
def _legendre(m: int):
    x, w = np.polynomial.legendre.leggauss(m)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@dataclass(frozen=True)
class QuadratureSpec:
    """Gauss-Legendre rule with m nodes mapped affinely onto [s0, s0 + length]."""

    s0: float = 0.0
    length: float = 16.0
    nodes: int = 80
    rule: str = "gauss_legendre_mapped"

    def __post_init__(self):
        if self.length <= 0:
            raise DomainError("quadrature length must be positive")
        if self.nodes < 1:
            raise DomainError("quadrature needs at least one node")
        if self.rule != "gauss_legendre_mapped":
            raise DomainError(f"unknown quadrature rule {self.rule!r}")

    @property
    def tail_bound(self) -> float:
        """exp(-(s0 + L)/2), the size of the neglected tail for kernels decaying like e^(-x/2)."""
        return math.exp(-(self.s0 + self.length) / 2.0)

    def points(self):
        x, w = _legendre(int(self.nodes))
        half = 0.5 * self.length
        return self.s0 + half * (x + 1.0), half * w

    def shifted(self, s0: float) -> "QuadratureSpec":
        return QuadratureSpec(s0, self.length, self.nodes, self.rule)

    def refined(self, factor: int = 2) -> "QuadratureSpec":
        return QuadratureSpec(self.s0, self.length, self.nodes * factor, self.rule)
