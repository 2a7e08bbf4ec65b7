"""Correlation kernels: Airy, Bessel, Laguerre (LUE), its Hankel factors xi/eta and their
left-soft-edge rescalings."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import special
from scipy.special import gammaln

from .errors import DomainError
from .quadrature import QuadratureSpec
from .scaling import EdgeScaling, EnsembleParams, Side, mu_sigma_left
from .specfun import _laguerre_tail, airy_arrays

SQRT2 = math.sqrt(2.0)


def seam_width(x):
    """Half-width of the band around the diagonal where the confluent formula is used."""
    return 1e-6 * np.maximum(1.0, np.abs(x))


def airy_kernel(x, y):
    """(Ai(x)Ai'(y) - Ai'(x)Ai(y))/(x - y), with (Ai')^2 - x Ai^2 on the diagonal band."""
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    ax, apx, _, _ = airy_arrays(x)
    ay, apy, _, _ = airy_arrays(y)
    diag = np.abs(x - y) <= seam_width(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        off = (ax * apy - apx * ay) / (x - y)
    if diag.any():
        m = 0.5 * (x + y)
        am, apm, _, _ = airy_arrays(m)
        off = np.where(diag, apm**2 - m * am**2, off)
    return float(off) if off.ndim == 0 else off


def bessel_j(a: float, r):
    """J_a(r) and J_a'(r).

    The power series cancels badly once r passes ~10 (terms grow like e^r), so scipy's
    Amos-based routines are used instead.
    """
    r = np.asarray(r, dtype=float)
    return special.jv(a, r), special.jvp(a, r)


def bessel_kernel(a: float, x, y):
    """Bessel kernel of order a on [0, inf)."""
    if a < 0:
        raise DomainError("Bessel order must be nonnegative")
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    if np.any(x < 0) or np.any(y < 0):
        raise DomainError("Bessel kernel is defined for x, y >= 0")
    rx, ry = np.sqrt(x), np.sqrt(y)
    jx, djx = bessel_j(a, rx)
    jy, djy = bessel_j(a, ry)
    diag = np.abs(x - y) <= seam_width(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        off = (ry * djy * jx - rx * djx * jy) / (2.0 * (x - y))
    if diag.any():
        m = 0.5 * (x + y)
        jm, djm = bessel_j(a, np.sqrt(m))
        with np.errstate(divide="ignore", invalid="ignore"):
            d = (m - a * a) / (4.0 * m) * jm**2 + 0.25 * djm**2
        d = np.where(m > 0, d, 0.25 if a == 0 else 0.0)
        off = np.where(diag, d, off)
    return float(off) if off.ndim == 0 else off


def _lag_log(j: int, a: float, x):
    """Mantissas of L_{j-2}, L_{j-1}, L_j at x and the shared log scale, with a/2 log x - x/2 folded in."""
    l2, l1, l0, logs = _laguerre_tail(j, a, x)
    with np.errstate(divide="ignore"):
        lw = np.where(x > 0, 0.5 * a * np.log(np.where(x > 0, x, 1.0)), 0.0) - 0.5 * x + logs
    return l2, l1, l0, lw


def lue_kernel(params: EnsembleParams, x, y):
    """Christoffel-Darboux kernel of the LUE,
    K(x, y) = -N!/Gamma(N+a) (psi_N(x) psi_{N-1}(y) - psi_N(y) psi_{N-1}(x))/(x - y),
    with psi_j = x^(a/2) e^(-x/2) L_j^a. Zero where an argument is negative."""
    big_n, a = params.big_n, params.a
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    scalar = x.ndim == 0
    x, y = np.atleast_1d(x).astype(float), np.atleast_1d(y).astype(float)
    valid = (x >= 0) & (y >= 0)
    xs, ys = np.where(valid, x, 0.0), np.where(valid, y, 0.0)
    lpref = gammaln(big_n + 1) - gammaln(big_n + a)
    _, mx1, mx0, cx = _lag_log(big_n, a, xs)
    _, my1, my0, cy = _lag_log(big_n, a, ys)
    diag = np.abs(xs - ys) <= seam_width(xs)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        num = mx0 * my1 - my0 * mx1
        out = -np.exp(lpref + cx + cy) * num / (xs - ys)
    if diag.any():
        m = 0.5 * (xs[diag] + ys[diag])
        out[diag] = _lue_diag(params, m)
    out = np.where(valid, out, 0.0)
    return float(out[0]) if scalar else out


def _lue_diag(params: EnsembleParams, x):
    """Confluent limit: -N!/Gamma(N+a) x^(a-1) e^(-x) [L_N L_{N-1} - (N+a) L_{N-1}^2 + (N+a-1) L_N L_{N-2}]."""
    big_n, a = params.big_n, params.a
    lpref = gammaln(big_n + 1) - gammaln(big_n + a)
    l2, l1, l0, logs = _laguerre_tail(big_n, a, x)
    bracket = l0 * l1 - (big_n + a) * l1 * l1 + (big_n + a - 1) * l0 * l2
    with np.errstate(divide="ignore", invalid="ignore"):
        logx = np.log(np.where(x > 0, x, 1.0))
        out = -np.exp(lpref + (a - 1) * logx - x + 2 * logs) * bracket
    if a == 0:
        out = np.where(x == 0, float(big_n), out)
    elif a >= 2:
        out = np.where(x == 0, 0.0, out)
    return out


def _require_a2(params):
    if params.a < 2:
        raise DomainError(f"the Hankel factorization needs a >= 2, got a={params.a}")


def xi_eta(params: EnsembleParams, x):
    """Hankel factors with K_LUE(x, y) = int_0^inf xi(x+t) eta(t+y) + eta(x+t) xi(t+y) dt.

    xi(x)  = (-1)^N/sqrt2 (N n)^(1/4) sqrt(N!/Gamma(N+a)) x^(a/2-1) e^(-x/2) L_N^(a-1)(x),
    eta(x) = (-1)^(N-1)/sqrt2 (N n)^(1/4) sqrt((N-1)!/n!) x^(a/2) e^(-x/2) L_{N-1}^(a+1)(x),
    both zero for x <= 0.
    """
    _require_a2(params)
    big_n, a, n = params.big_n, params.a, params.n
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    pos = x > 0
    xp = np.where(pos, x, 1.0)
    lx = np.log(xp)
    base = 0.25 * math.log(big_n * n) - 0.5 * math.log(2.0)
    lxi = base + 0.5 * (gammaln(big_n + 1) - gammaln(big_n + a))
    leta = base + 0.5 * (gammaln(big_n) - gammaln(n + 1))
    _, _, m_xi, s_xi = _laguerre_tail(big_n, a - 1, xp)
    _, _, m_eta, s_eta = _laguerre_tail(big_n - 1, a + 1, xp)
    with np.errstate(over="ignore", under="ignore"):
        xi = (-1) ** big_n * m_xi * np.exp(lxi + (0.5 * a - 1) * lx - 0.5 * xp + s_xi)
        eta = (-1) ** (big_n - 1) * m_eta * np.exp(leta + 0.5 * a * lx - 0.5 * xp + s_eta)
    xi = np.where(pos, xi, 0.0)
    eta = np.where(pos, eta, 0.0)
    if scalar:
        return float(xi[0]), float(eta[0])
    return xi, eta


def default_factor_quad(params: EnsembleParams) -> QuadratureSpec:
    """Rule on [0, L] covering the support of the Laguerre functions plus a decay margin."""
    right = (math.sqrt(params.n + 0.5) + math.sqrt(params.big_n + 0.5)) ** 2
    length = right + 12.0 * params.n ** (1.0 / 3.0) + 60.0
    nodes = int(max(200, 6 * params.big_n + 120))
    return QuadratureSpec(0.0, length, nodes)


def factor_integral(params: EnsembleParams, x, y, quad: Optional[QuadratureSpec] = None):
    """int_0^inf [xi(x+t) eta(t+y) + eta(x+t) xi(t+y)] dt by Gauss-Legendre on [0, L]."""
    quad = quad or default_factor_quad(params)
    t, w = quad.points()
    xi_x, eta_x = xi_eta(params, float(x) + t)
    xi_y, eta_y = xi_eta(params, float(y) + t)
    return float(np.sum(w * (xi_x * eta_y + eta_x * xi_y)))


def factorization_residual(params: EnsembleParams, x: float, y: float, quad: Optional[QuadratureSpec] = None) -> float:
    """|K_LUE(x, y) - int_0^inf [xi(x+t) eta(t+y) + eta(x+t) xi(t+y)] dt|."""
    _require_a2(params)
    if x <= 0 or y <= 0:
        raise DomainError("factorization residual needs x, y > 0")
    return abs(float(lue_kernel(params, x, y)) - factor_integral(params, x, y, quad))


def xi_tau(params: EnsembleParams, scaling: EdgeScaling, u):
    """sigma~ xi(mu~ - sigma~ u)."""
    xi, _ = xi_eta(params, scaling.mu - scaling.sigma * np.asarray(u, dtype=float))
    return scaling.sigma * xi


def eta_tau(params: EnsembleParams, scaling: EdgeScaling, u):
    _, eta = xi_eta(params, scaling.mu - scaling.sigma * np.asarray(u, dtype=float))
    return scaling.sigma * eta


def f_normalized(j: int, k: int, x):
    """F_{j,k}(x) = sigma_{j,k}^(-1/2) sqrt(k!/j!) x^((j-k+1)/2) e^(-x/2) L_k^(j-k)(x), for x > 0."""
    _, sig = mu_sigma_left(j, k)
    x = np.asarray(x, dtype=float)
    _, _, m, s = _laguerre_tail(k, j - k, x)
    lg = -0.5 * math.log(sig) + 0.5 * (gammaln(k + 1) - gammaln(j + 1))
    return m * np.exp(lg + 0.5 * (j - k + 1) * np.log(x) - 0.5 * x + s)


def xi_tau_via_f(params: EnsembleParams, scaling: EdgeScaling, u):
    """xi_tau through F_{n-1,N}: (-1)^N/sqrt2 (N n)^(1/4) sigma_{n-1,N}^(1/2) sigma~ F_{n-1,N}(x)/x."""
    big_n, n = params.big_n, params.n
    x = scaling.mu - scaling.sigma * np.asarray(u, dtype=float)
    _, sig = mu_sigma_left(n - 1, big_n)
    pref = (-1) ** big_n / SQRT2 * (big_n * n) ** 0.25 * math.sqrt(sig) * scaling.sigma
    return np.where(x > 0, pref * f_normalized(n - 1, big_n, np.where(x > 0, x, 1.0)) / np.where(x > 0, x, 1.0), 0.0)


def eta_tau_via_f(params: EnsembleParams, scaling: EdgeScaling, u):
    big_n, n = params.big_n, params.n
    x = scaling.mu - scaling.sigma * np.asarray(u, dtype=float)
    _, sig = mu_sigma_left(n, big_n - 1)
    pref = (-1) ** (big_n - 1) / SQRT2 * (big_n * n) ** 0.25 * math.sqrt(sig) * scaling.sigma
    return np.where(x > 0, pref * f_normalized(n, big_n - 1, np.where(x > 0, x, 1.0)) / np.where(x > 0, x, 1.0), 0.0)


def lue_scaled_left(params: EnsembleParams, scaling: EdgeScaling, s, t):
    """sigma~ K_LUE(mu~ - sigma~ s, mu~ - sigma~ t); zero where an argument is negative."""
    x = scaling.mu - scaling.sigma * np.asarray(s, dtype=float)
    y = scaling.mu - scaling.sigma * np.asarray(t, dtype=float)
    return scaling.sigma * np.asarray(lue_kernel(params, x, y))


def scaled_kernels(params: EnsembleParams, scaling: EdgeScaling, s0: float, s, t):
    """(G, H, K_LS) at (s, t): G = xi_tau(s+t-s0), H = -eta_tau(s+t-s0), K_LS the rescaled LUE kernel."""
    if scaling.side != Side.LEFT_SOFT:
        raise DomainError("scaled kernels use a left soft edge scaling")
    _require_a2(params)
    u = np.asarray(s, dtype=float) + np.asarray(t, dtype=float) - s0
    g = xi_tau(params, scaling, u)
    h = -eta_tau(params, scaling, u)
    k = lue_scaled_left(params, scaling, s, t)
    if np.ndim(g) == 0 or np.size(g) == 1 and np.ndim(s) == 0 and np.ndim(t) == 0:
        return float(np.ravel(g)[0]), float(np.ravel(h)[0]), float(np.ravel(k)[0])
    return g, h, k


def mp_density(lam: float, sigma: float, x):
    """Marchenko-Pastur density sqrt((l+ - x)(x - l-))/(2 pi sigma^2 lam x) on [l-, l+], l+- = sigma^2 (1 +- sqrt(lam))^2."""
    if lam <= 0 or sigma <= 0:
        raise DomainError("Marchenko-Pastur parameters must be positive")
    x = np.asarray(x, dtype=float)
    lo = sigma**2 * (1.0 - math.sqrt(lam)) ** 2
    hi = sigma**2 * (1.0 + math.sqrt(lam)) ** 2
    inside = (x > lo) & (x < hi) & (x > 0)
    xs = np.where(inside, x, 0.5 * (lo + hi))
    val = np.sqrt((hi - xs) * (xs - lo)) / (2.0 * math.pi * sigma**2 * lam * xs)
    out = np.where(inside, val, 0.0)
    return float(out) if out.ndim == 0 else out


def mp_edges(lam: float, sigma: float = 1.0):
    return sigma**2 * (1.0 - math.sqrt(lam)) ** 2, sigma**2 * (1.0 + math.sqrt(lam)) ** 2


@dataclass(frozen=True)
class KernelSpec:
    """A symmetric kernel K(x, y) on a half-line, identified by kind and parameters.

    kinds: airy, bessel, lue, lue_scaled_left, g_tau, h_tau, airy_sum, custom
    """

    kind: str
    params: Optional[EnsembleParams] = None
    scaling: Optional[EdgeScaling] = None
    shift: float = 0.0
    order: float = 0.0
    func: Optional[Callable] = field(default=None, compare=False)
    description: str = ""

    _KINDS = ("airy", "bessel", "lue", "lue_scaled_left", "g_tau", "h_tau", "airy_sum", "custom")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise DomainError(f"unknown kernel kind {self.kind!r}")
        if self.kind in ("lue", "lue_scaled_left", "g_tau", "h_tau") and self.params is None:
            raise DomainError(f"{self.kind} kernel needs ensemble parameters")
        if self.kind in ("lue_scaled_left", "g_tau", "h_tau") and self.scaling is None:
            raise DomainError(f"{self.kind} kernel needs an edge scaling")
        if self.kind == "custom" and self.func is None:
            raise DomainError("custom kernel needs a callable")

    @classmethod
    def airy(cls):
        return cls("airy", description="Airy kernel")

    @classmethod
    def bessel(cls, order: float):
        return cls("bessel", order=order, description=f"Bessel kernel, order {order}")

    @classmethod
    def lue(cls, params: EnsembleParams):
        return cls("lue", params=params, description=f"LUE kernel N={params.big_n} a={params.a}")

    @classmethod
    def lue_left(cls, params: EnsembleParams, scaling: EdgeScaling):
        return cls("lue_scaled_left", params=params, scaling=scaling,
                   description=f"left-edge rescaled LUE kernel N={params.big_n} a={params.a}")

    @classmethod
    def g_tau(cls, params: EnsembleParams, scaling: EdgeScaling, s0: float):
        return cls("g_tau", params=params, scaling=scaling, shift=s0, description="Hankel kernel xi_tau(x+y-s0)")

    @classmethod
    def h_tau(cls, params: EnsembleParams, scaling: EdgeScaling, s0: float):
        return cls("h_tau", params=params, scaling=scaling, shift=s0, description="Hankel kernel -eta_tau(x+y-s0)")

    @classmethod
    def airy_sum(cls, s0: float):
        return cls("airy_sum", shift=s0, description="Hankel kernel Ai(x+y-s0)")

    @classmethod
    def custom(cls, func: Callable, description: str = "custom kernel"):
        return cls("custom", func=func, description=description)

    def __call__(self, x, y):
        k = self.kind
        if k == "airy":
            return airy_kernel(x, y)
        if k == "bessel":
            return bessel_kernel(self.order, x, y)
        if k == "lue":
            return lue_kernel(self.params, x, y)
        if k == "lue_scaled_left":
            return lue_scaled_left(self.params, self.scaling, x, y)
        u = np.asarray(x, dtype=float) + np.asarray(y, dtype=float) - self.shift
        if k == "g_tau":
            return xi_tau(self.params, self.scaling, u)
        if k == "h_tau":
            return -eta_tau(self.params, self.scaling, u)
        if k == "airy_sum":
            return airy_arrays(u)[0]
        return self.func(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
