"""Nystrom discretization of symmetric kernels, Schatten norms and Fredholm determinants."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConvergenceError, GridMismatchError
from .kernels import SQRT2, KernelSpec
from .quadrature import E0, QuadratureSpec
from .scaling import EdgeScaling, EnsembleParams
from .specfun import airy_arrays

__all__ = [
    "E0",
    "DiscretizedOperator",
    "QuadratureSpec",
    "discretize",
    "fredholm_det",
    "hs_norm",
    "trace_bound",
    "tw2_cdf",
    "w1_components",
    "w1_upper_bound",
]


@dataclass(frozen=True)
class DiscretizedOperator:
    """Nodes, weights and the symmetric matrix sqrt(w_i) K(x_i, x_j) sqrt(w_j)."""

    nodes: np.ndarray
    weights: np.ndarray
    matrix: np.ndarray

    @classmethod
    def from_matrix(cls, matrix) -> "DiscretizedOperator":
        """Wrap a plain symmetric matrix (unit weights, integer nodes)."""
        m = np.asarray(matrix, dtype=float)
        k = m.shape[0]
        return cls(np.arange(k, dtype=float), np.ones(k), m)

    def same_grid(self, other: "DiscretizedOperator") -> bool:
        return (self.nodes.shape == other.nodes.shape and np.array_equal(self.nodes, other.nodes)
                and np.array_equal(self.weights, other.weights))

    def eigenvalues(self):
        return np.linalg.eigvalsh(self.matrix)

    def hs_norm(self) -> float:
        return float(np.linalg.norm(self.matrix, "fro"))

    def trace_norm(self) -> float:
        return float(np.sum(np.abs(self.eigenvalues())))

    def combine(self, other: "DiscretizedOperator", alpha: float = 1.0, beta: float = 1.0) -> "DiscretizedOperator":
        """alpha*self + beta*other on the shared grid."""
        if not self.same_grid(other):
            raise GridMismatchError("operators live on different quadrature grids")
        return DiscretizedOperator(self.nodes, self.weights, alpha * self.matrix + beta * other.matrix)


def _airy_matrix(x):
    ai, aip, _, _ = airy_arrays(x)
    dx = x[:, None] - x[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        k = (ai[:, None] * aip[None, :] - aip[:, None] * ai[None, :]) / dx
    d = aip**2 - x * ai**2
    np.fill_diagonal(k, d)
    return k


def kernel_values(spec: KernelSpec, x) -> np.ndarray:
    """K(x_i, x_j) on a node vector."""
    if spec.kind == "airy":
        return _airy_matrix(x)
    return np.asarray(spec(x[:, None], x[None, :]), dtype=float)


def discretize(spec: KernelSpec, quad: QuadratureSpec) -> DiscretizedOperator:
    x, w = quad.points()
    k = kernel_values(spec, x)
    sw = np.sqrt(w)
    m = sw[:, None] * k * sw[None, :]
    m = 0.5 * (m + m.T)
    return DiscretizedOperator(x, w, m)


def hs_norm(spec: KernelSpec, quad: QuadratureSpec) -> float:
    """(int int K(x,y)^2 dx dy)^(1/2) over [s0, s0+L]^2 by the product rule."""
    x, w = quad.points()
    k = kernel_values(spec, x)
    return float(math.sqrt(np.einsum("i,ij,j->", w, k * k, w)))


def trace_bound(a_op: DiscretizedOperator, b_op: DiscretizedOperator, c_op: DiscretizedOperator):
    """(2||AB + BA - CC||_1, ||A+B-sqrt2 C||_2 ||A+B+sqrt2 C||_2 + ||A-B||_2^2)."""
    if not (a_op.same_grid(b_op) and a_op.same_grid(c_op)):
        raise GridMismatchError("trace bound needs operators on one grid")
    a, b, c = a_op.matrix, b_op.matrix, c_op.matrix
    p = a @ b + b @ a - c @ c
    scale = max(1.0, float(np.max(np.abs(p))))
    if np.max(np.abs(p - p.T)) > 1e-10 * scale:
        raise GridMismatchError("operator combination is not symmetric")
    p = 0.5 * (p + p.T)
    lhs = 2.0 * float(np.sum(np.abs(np.linalg.eigvalsh(p))))
    fro = lambda m: float(np.linalg.norm(m, "fro"))  # noqa: E731
    rhs = fro(a + b - SQRT2 * c) * fro(a + b + SQRT2 * c) + fro(a - b) ** 2
    return lhs, rhs


def _det_one(spec: KernelSpec, quad: QuadratureSpec) -> float:
    op = discretize(spec, quad)
    sign, logdet = np.linalg.slogdet(np.eye(len(op.nodes)) - op.matrix)
    return float(sign * math.exp(logdet)) if sign != 0 else 0.0


def fredholm_det(spec: KernelSpec, s: float, quad: QuadratureSpec, tol: Optional[float] = None) -> float:
    """det(I - K) on (s, s + L): the probability of no points in (s, inf) up to truncation.

    With tol set, the value is recomputed with twice the nodes and a ConvergenceError is raised
    if the two differ by more than tol.
    """
    q = quad.shifted(float(s))
    val = _det_one(spec, q)
    if tol is not None:
        fine = _det_one(spec, q.refined(2))
        if abs(fine - val) > tol:
            raise ConvergenceError(f"Fredholm determinant at s={s} moved by {abs(fine - val):.3g} on refinement")
    return val


def tw2_cdf(s, quad: Optional[QuadratureSpec] = None, tol: Optional[float] = None):
    """Tracy-Widom (beta = 2) distribution function as the Airy-kernel Fredholm determinant."""
    quad = quad or QuadratureSpec(0.0, 16.0, 80)
    spec = KernelSpec.airy()
    arr = np.atleast_1d(np.asarray(s, dtype=float))
    out = np.array([fredholm_det(spec, v, quad, tol) for v in arr])
    return float(out[0]) if np.ndim(s) == 0 else out


def _parity_sign(params: EnsembleParams) -> float:
    return 1.0 if (params.big_n + 1) % 2 == 0 else -1.0


def w1_components(params: EnsembleParams, scaling: EdgeScaling, s0: float, quad: QuadratureSpec) -> dict:
    """Hilbert-Schmidt norms of the combinations entering the W1 bound, on L^2(s0, s0+L).

    The Airy operator enters with the parity sign (-1)^(N+1), which makes G + H + sign sqrt2 Ai small.
    """
    q = quad.shifted(s0)
    g = discretize(KernelSpec.g_tau(params, scaling, s0), q)
    h = discretize(KernelSpec.h_tau(params, scaling, s0), q)
    ai = discretize(KernelSpec.airy_sum(s0), q)
    sg = _parity_sign(params)
    gm, hm, am = g.matrix, h.matrix, ai.matrix
    fro = lambda m: float(np.linalg.norm(m, "fro"))  # noqa: E731
    norm_sum = fro(gm + hm + sg * SQRT2 * am)
    norm_sum_other = fro(gm + hm - sg * SQRT2 * am)
    norm_diff = fro(gm - hm)
    return {
        "norm_sum": norm_sum,
        "norm_sum_other": norm_sum_other,
        "norm_g": fro(gm + sg * SQRT2 / 2.0 * am),
        "norm_h": fro(hm + sg * SQRT2 / 2.0 * am),
        "norm_diff": norm_diff,
        "w1_bound": 0.5 * norm_sum * norm_sum_other + 0.5 * norm_diff**2,
        "sign": sg,
    }


def w1_upper_bound(params: EnsembleParams, scaling: EdgeScaling, s0: float, quad: QuadratureSpec) -> float:
    """1/2 ||G+H-sqrt2 Ai||_2 ||G+H+sqrt2 Ai||_2 + 1/2 ||G-H||_2^2, an upper bound for
    ||K_LS - K_Ai||_1 and hence for W1 between the point counts on (s0, inf)."""
    return w1_components(params, scaling, s0, quad)["w1_bound"]
