"""Liouville-Green quantities for the transformed Laguerre equation around the left turning point.

With x = kappa z the Laguerre function satisfies w'' = (kappa^2 f(z) + g(z)) w where
f(z) = (z - z1)(z - z2)/(4 z^2) and g(z) = -1/(4 z^2). The map zeta solves
zeta (zeta')^2 = f and turns the equation into a perturbed Airy equation.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from .errors import ConvergenceError, DomainError
from .scaling import EnsembleParams
from .specfun import lambda0_estimate, m_over_e

QUAD_EPSABS = 1e-12
QUAD_EPSREL = 1e-10
QUAD_LIMIT = 2000

_GL_U, _GL_W = np.polynomial.legendre.leggauss(48)
_GL_U = 0.5 * (_GL_U + 1.0)
_GL_W = 0.5 * _GL_W


@dataclass(frozen=True)
class LGContext:
    ensemble: EnsembleParams
    kappa: float
    lambda_half: float
    omega: float
    z1: float
    z2: float

    @property
    def spread(self) -> float:
        return self.z2 - self.z1


def lg_context(params: EnsembleParams) -> LGContext:
    kappa = params.big_n + (params.a + 1) / 2.0
    lam = params.a / 2.0
    omega = 2.0 * lam / kappa
    r = math.sqrt(4.0 - omega * omega)
    # z1 = omega^2 / z2 avoids the cancellation in 2 - r for small omega
    z2 = 2.0 + r
    z1 = omega * omega / z2
    return LGContext(params, kappa, lam, omega, z1, z2)


def f_eval(ctx: LGContext, z):
    z = np.asarray(z, dtype=float)
    return (z - ctx.z1) * (z - ctx.z2) / (4.0 * z * z)


def g_eval(z):
    z = np.asarray(z, dtype=float)
    return -1.0 / (4.0 * z * z)


def _check_range(ctx, z):
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0) or np.any(z >= ctx.z2):
        raise DomainError(f"z must lie in (0, z2) = (0, {ctx.z2})")
    return z


def _antiderivative(ctx: LGContext, z, logz=None):
    """F with F' = -sqrt(f) on (0, z1); logz may be passed when z underflows."""
    w = ctx.omega
    z = np.asarray(z, dtype=float)
    if logz is None:
        with np.errstate(divide="ignore"):
            logz = np.log(z)
    q = np.sqrt(np.maximum(z * z - 4.0 * z + w * w, 0.0))
    out = -0.5 * q + np.log(np.abs(q + z - 2.0))
    if w > 0:
        out = out - 0.5 * w * logz + 0.5 * w * np.log(np.abs(w * q + w * w - 2.0 * z))
    return out


def lg_integral_closed(ctx: LGContext, z, logz=None):
    """Closed form of the integral of sqrt(f) from z to z1, for 0 < z <= z1."""
    return _antiderivative(ctx, z, logz) - _antiderivative(ctx, ctx.z1)


def _lg_integral_near(ctx: LGContext, z):
    """|int_z^z1 sqrt|f||| for z near z1, with t = z1 -+ d u^2 removing the square-root endpoint."""
    z = np.asarray(z, dtype=float)
    d = np.abs(ctx.z1 - z)
    sgn = np.sign(ctx.z1 - z)
    t = ctx.z1 - (sgn * d)[..., None] * _GL_U**2
    integrand = _GL_U**2 * np.sqrt(ctx.z2 - t) / t
    return d**1.5 * (integrand @ _GL_W)


def lg_integral_quad(ctx: LGContext, z: float) -> float:
    """Adaptive quadrature of the signed integral: int_z^z1 sqrt(f) for z < z1, int_z1^z sqrt(-f) beyond."""
    a, b = (z, ctx.z1) if z <= ctx.z1 else (ctx.z1, z)

    def h(t):
        return math.sqrt(abs((t - ctx.z1) * (t - ctx.z2))) / (2.0 * t)

    return _quad(h, a, b)


def _quad(func, a, b):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, _ = integrate.quad(func, a, b, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT)
        except integrate.IntegrationWarning as exc:
            raise ConvergenceError(f"adaptive quadrature failed: {exc}") from exc
    return val


def _zeta_from_integral(i, sign):
    return sign * (1.5 * np.abs(i)) ** (2.0 / 3.0)


def zeta_left(ctx: LGContext, z):
    """The transform zeta around z1: positive and decreasing on (0, z1), zero at z1, negative on (z1, z2)."""
    z = _check_range(ctx, z)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.zeros_like(z)
    far = z < 0.5 * ctx.z1
    near = (z >= 0.5 * ctx.z1) & (z < ctx.z1)
    near_right = (z > ctx.z1) & (z <= ctx.z1 + 0.25 * ctx.spread)
    right = z > ctx.z1 + 0.25 * ctx.spread
    if far.any():
        out[far] = _zeta_from_integral(lg_integral_closed(ctx, z[far]), 1.0)
    if near.any():
        out[near] = _zeta_from_integral(_lg_integral_near(ctx, z[near]), 1.0)
    if near_right.any():
        out[near_right] = _zeta_from_integral(_lg_integral_near(ctx, z[near_right]), -1.0)
    for i in np.flatnonzero(right):
        out[i] = _zeta_from_integral(lg_integral_quad(ctx, float(z[i])), -1.0)
    return float(out[0]) if scalar else out


def zeta_closed(ctx: LGContext, z, logz=None):
    """zeta on (0, z1) straight from the closed-form antiderivative (kept for cross-checks)."""
    return _zeta_from_integral(lg_integral_closed(ctx, z, logz), 1.0)


def zeta_quad(ctx: LGContext, z: float) -> float:
    s = 1.0 if z <= ctx.z1 else -1.0
    return float(_zeta_from_integral(lg_integral_quad(ctx, z), s))


def zeta_prime_at_z1(ctx: LGContext) -> float:
    return -((ctx.z2 - ctx.z1) / (4.0 * ctx.z1**2)) ** (1.0 / 3.0)


def f_tilde(ctx: LGContext, z):
    """f/zeta = (zeta')^2, continuous across z1."""
    z = _check_range(ctx, z)
    zt = np.asarray(zeta_left(ctx, z))
    fv = f_eval(ctx, z)
    lim = zeta_prime_at_z1(ctx) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(z == ctx.z1, lim, fv / np.where(zt == 0, 1.0, zt))
    return float(out) if out.ndim == 0 else out


def _psi_core(ctx: LGContext, z, zeta):
    w2 = ctx.omega**2
    q = z * z - 4.0 * z + w2
    return 5.0 / (16.0 * zeta**2) - zeta * z * (z**3 + (4.0 - 4.0 * w2) * z + 4.0 * w2) / q**3


def psi_eval(ctx: LGContext, z):
    """Perturbation Psi(zeta(z)) = 5/(16 zeta^2) + zeta (4 f f'' - 5 f'^2)/(16 f^3) + zeta g/f, for 0 < z < z1."""
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0) or np.any(z >= ctx.z1):
        raise DomainError("psi is evaluated on 0 < z < z1")
    out = _psi_core(ctx, z, np.asarray(zeta_left(ctx, z)))
    return float(out) if out.ndim == 0 else out


def s_sequence(ctx: LGContext) -> float:
    """Second-order coefficient of the local expansion of zeta at z1."""
    return 1.0 / ctx.z1 + 1.0 / (2.0 * ctx.spread)


def v_integral(ctx: LGContext, z: float) -> float:
    """V(zeta(z)) = int_zeta^inf |Psi(t)| t^(-1/2) dt, computed in the variable v = -log(u)."""
    if ctx.omega <= 0:
        raise DomainError("V needs a >= 1")
    if not 0 < z < ctx.z1:
        raise DomainError("V is evaluated on 0 < z < z1")

    def h(v):
        u = math.exp(-v)
        zt = float(zeta_closed(ctx, u, logz=-v)) if u < 0.5 * ctx.z1 else float(zeta_left(ctx, u))
        q = u * u - 4.0 * u + ctx.omega**2
        return abs(_psi_core(ctx, u, zt)) * math.sqrt(q) / (2.0 * zt)

    return _quad(h, -math.log(z), math.inf)


def eps2_bound(ctx: LGContext, z: float) -> float:
    """(M/E)(kappa^(2/3) zeta) (exp(lambda0 V(zeta)/kappa) - 1)."""
    v = v_integral(ctx, z)
    zt = float(zeta_left(ctx, z))
    return float(m_over_e(ctx.kappa ** (2.0 / 3.0) * zt)) * math.expm1(lambda0_estimate() * v / ctx.kappa)


def c_constant(params: EnsembleParams) -> tuple[float, int]:
    """(log c_N, sign) for the normalizing constant of the Laguerre function against the Airy approximant.

    log c = 1/2 log(2 pi a) + log n! - log a! - log N! + 1/6 log kappa + a log a - a/2
            + (N + 1/2)/2 log(N + 1/2) - (n + 1/2)/2 log(n + 1/2)
    """
    if params.a < 1:
        raise DomainError("c_N needs a >= 1")
    big_n, a, n = params.big_n, params.a, params.n
    kappa = big_n + (a + 1) / 2.0
    logc = (
        0.5 * math.log(2.0 * math.pi * a)
        + gammaln(n + 1)
        - gammaln(a + 1)
        - gammaln(big_n + 1)
        + math.log(kappa) / 6.0
        + a * math.log(a)
        - 0.5 * a
        + 0.5 * (big_n + 0.5) * math.log(big_n + 0.5)
        - 0.5 * (n + 0.5) * math.log(n + 0.5)
    )
    return float(logc), 1


def r_constant(params: EnsembleParams) -> float:
    """r_N = sqrt(N!/n!) c_N kappa^(-1/6), which tends to 1 at rate 1/N."""
    logc, sgn = c_constant(params)
    kappa = params.big_n + (params.a + 1) / 2.0
    logr = 0.5 * (gammaln(params.big_n + 1) - gammaln(params.n + 1)) + logc - math.log(kappa) / 6.0
    return sgn * math.exp(logr)
