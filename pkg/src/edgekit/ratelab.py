"""Rate experiments: sweep N at fixed gamma and fit log-log slopes of kernel-difference norms."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError
from .kernels import SQRT2, eta_tau, xi_tau
from .operator import QuadratureSpec, w1_components
from .quadrature import E0
from .scaling import EnsembleParams, composite_left
from .specfun import airy_ai

SLOPE_SUM_RANGE = (-0.80, -0.55)
SLOPE_SINGLE_RANGE = (-0.45, -0.22)
SLOPE_W1_MAX = -0.5
R2_MIN = 0.98


@dataclass(frozen=True)
class RateEntry:
    n: int
    a: int
    gamma_n: float
    norm_sum: float
    norm_g: float
    norm_h: float
    w1_bound: float


@dataclass(frozen=True)
class RateReport:
    gamma: float
    s0: float
    entries: list
    slopes: dict = field(default_factory=dict)
    r2: dict = field(default_factory=dict)

    @property
    def slope_sum(self):
        return self.slopes["sum"]

    @property
    def slope_g(self):
        return self.slopes["g"]

    @property
    def slope_h(self):
        return self.slopes["h"]

    @property
    def slope_w1(self):
        return self.slopes["w1"]

    def to_dict(self) -> dict:
        return {
            "gamma": self.gamma,
            "s0": self.s0,
            "entries": [
                {"n": e.n, "a": e.a, "gamma_n": e.gamma_n, "norm_sum": e.norm_sum, "norm_g": e.norm_g,
                 "norm_h": e.norm_h, "w1_bound": e.w1_bound}
                for e in self.entries
            ],
            "slopes": dict(self.slopes),
            "r2": dict(self.r2),
        }


def fit_slope(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    """Least-squares slope of log(y) against x, with r^2."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if len(x) < 3 or len(x) != len(y):
        raise DomainError("slope fit needs at least 3 paired points")
    if np.any(y <= 0) or not np.all(np.isfinite(y)):
        raise DomainError("slope fit needs positive finite values")
    if np.ptp(x) == 0:
        raise DomainError("slope fit design is degenerate (all x equal)")
    ly = np.log(y)
    xc = x - x.mean()
    slope = float(np.dot(xc, ly - ly.mean()) / np.dot(xc, xc))
    resid = ly - ly.mean() - slope * xc
    sst = float(np.dot(ly - ly.mean(), ly - ly.mean()))
    r2 = 1.0 if sst == 0 else 1.0 - float(np.dot(resid, resid)) / sst
    return slope, r2


def params_for(gamma: float, big_n: int) -> EnsembleParams:
    if not 0.0 < gamma < 1.0:
        raise DomainError(f"gamma must lie in (0, 1), got {gamma}")
    p = EnsembleParams.from_gamma(big_n, gamma)
    if p.a < 2:
        raise DomainError(f"N={big_n}, gamma={gamma} gives a={p.a} < 2")
    return p


def norm_sweep(gamma: float, n_list: Sequence[int], s0: float = 0.0,
               quad: Optional[QuadratureSpec] = None) -> RateReport:
    """Per-N Hilbert-Schmidt norms of the parity-matched kernel differences and the W1 bound."""
    n_list = [int(v) for v in n_list]
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise DomainError("n_list must be strictly increasing")
    if len(n_list) < 3:
        raise DomainError("a rate sweep needs at least 3 values of N")
    quad = quad or QuadratureSpec(s0, 14.0, 120)
    entries = []
    for big_n in n_list:
        p = params_for(gamma, big_n)
        c = w1_components(p, composite_left(p), s0, quad)
        entries.append(RateEntry(big_n, p.a, p.gamma, c["norm_sum"], c["norm_g"], c["norm_h"], c["w1_bound"]))
    logn = np.log([e.n for e in entries])
    slopes, r2 = {}, {}
    for key, attr in (("sum", "norm_sum"), ("g", "norm_g"), ("h", "norm_h"), ("w1", "w1_bound")):
        slopes[key], r2[key] = fit_slope(logn, [getattr(e, attr) for e in entries])
    return RateReport(float(gamma), float(s0), entries, slopes, r2)


@dataclass(frozen=True)
class EnvelopeTable:
    t: np.ndarray
    value: np.ndarray
    value_other_sign: np.ndarray
    g_value: np.ndarray
    h_value: np.ndarray
    below_cap: Optional[np.ndarray]


def pointwise_envelope(gamma: float, big_n: int, s0: float, t_grid, cap: Optional[float] = None,
                       split: bool = True) -> EnvelopeTable:
    """N^(2/3) |G(t) + H(t) + (-1)^(N+1) sqrt2 Ai(t)| e^(t/2) along a grid, with the N^(1/3)-scaled
    single-kernel analogues and the opposite-sign pairing for comparison.

    G(t) = xi_tau(t), H(t) = -eta_tau(t) as functions of the single variable t = x + y - s0.
    With split=True, points t >= e0 mu/sigma use G = H = 0 directly.
    """
    p = params_for(gamma, big_n)
    sc = composite_left(p)
    t = np.asarray(t_grid, dtype=float)
    g = np.asarray(xi_tau(p, sc, t), dtype=float)
    h = -np.asarray(eta_tau(p, sc, t), dtype=float)
    if split:
        far = t >= E0 * sc.mu / sc.sigma
        g = np.where(far, 0.0, g)
        h = np.where(far, 0.0, h)
    ai = airy_ai(t)
    sg = 1.0 if (big_n + 1) % 2 == 0 else -1.0
    w = np.exp(t / 2.0)
    n23, n13 = big_n ** (2.0 / 3.0), big_n ** (1.0 / 3.0)
    val = n23 * np.abs(g + h + sg * SQRT2 * ai) * w
    other = n23 * np.abs(g + h - sg * SQRT2 * ai) * w
    gv = n13 * np.abs(g + sg * SQRT2 / 2.0 * ai) * w
    hv = n13 * np.abs(h + sg * SQRT2 / 2.0 * ai) * w
    below = None if cap is None else val <= cap
    return EnvelopeTable(t, val, other, gv, hv, below)


def envelope_max(gamma: float, n_list: Sequence[int], s0: float = 0.0, t_grid=None) -> dict:
    t_grid = np.arange(0.0, 8.0 + 1e-9, 0.1) if t_grid is None else t_grid
    return {int(n): float(np.max(pointwise_envelope(gamma, n, s0, t_grid).value)) for n in n_list}


def slope_checks(report: RateReport) -> dict:
    """Pass/fail of the fitted slopes against the acceptance windows."""
    inr = lambda v, r: r[0] <= v <= r[1]  # noqa: E731
    w1 = [e.w1_bound for e in report.entries]
    return {
        "slope_sum": inr(report.slopes["sum"], SLOPE_SUM_RANGE) and report.r2["sum"] >= R2_MIN,
        "slope_g": inr(report.slopes["g"], SLOPE_SINGLE_RANGE),
        "slope_h": inr(report.slopes["h"], SLOPE_SINGLE_RANGE),
        "w1_decreasing": all(b < a for a, b in zip(w1, w1[1:])) and report.slopes["w1"] <= SLOPE_W1_MAX,
    }


def log_log(values):
    return [math.log(v) for v in values]
