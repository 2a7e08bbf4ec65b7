"""Airy functions, their modulus/phase companions, and Laguerre polynomials/functions.

Airy values come from a table of anchors every 0.5 on [-32, 32] plus a short
Taylor expansion from the nearest anchor; beyond |x| > 32 the classical
asymptotic expansions are used. Anchors are built once by Taylor stepping along
the Airy equation y'' = x y, always in the direction in which the function being
stepped is dominant, so the table is accurate to a few ulps.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

_STEP = 0.5
_XMAX = 32.0
_NTERMS = 34
_ASYM_TERMS = 14

AI0 = 1.0 / (3.0 ** (2.0 / 3.0) * math.gamma(2.0 / 3.0))
AIP0 = -1.0 / (3.0 ** (1.0 / 3.0) * math.gamma(1.0 / 3.0))
BI0 = 1.0 / (3.0 ** (1.0 / 6.0) * math.gamma(2.0 / 3.0))
BIP0 = 3.0 ** (1.0 / 6.0) / math.gamma(1.0 / 3.0)


@dataclass(frozen=True)
class AiryPair:
    ai: float
    ai_prime: float
    bi: float
    bi_prime: float


@dataclass(frozen=True)
class AiryModulus:
    big_e: float
    big_m: float
    big_n: float
    theta: float
    omega: float
    crossover_c: float


def _taylor(x0, y, yp, h):
    """Advance a solution of y'' = x y from x0 by h with a fixed-length Taylor series.

    t_k = y^(k)(x0) h^k / k!  and  q_k = y^(k+1)(x0) h^k / k!  obey short recurrences
    that follow from y^(k+2) = x0 y^(k) + k y^(k-1).
    """
    h2 = h * h
    h3 = h2 * h
    t_prev, t_cur, t_next = np.zeros_like(y), y, yp * h
    q_cur, q_next = yp, x0 * y * h
    val = t_cur + t_next
    der = q_cur + q_next
    # shift so that (tm1, t0, t1) = (t_{k-1}, t_k, t_{k+1}) with k = 0
    tm1, t0, t1 = t_prev, t_cur, t_next
    q0, q1 = q_cur, q_next
    for k in range(0, _NTERMS):
        t2 = (x0 * h2 * t0 + h3 * tm1) / ((k + 1) * (k + 2))
        q2 = x0 * h2 * q0 / ((k + 1) * (k + 2)) + t0 * h2 / (k + 2)
        val = val + t2
        der = der + q2
        tm1, t0, t1 = t0, t1, t2
        q0, q1 = q1, q2
    return val, der


def _u_coeffs(n):
    u = [1.0]
    for k in range(1, n):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k))
    v = [-(6 * k + 1) / (6 * k - 1) * u[k] for k in range(n)]
    return np.array(u), np.array(v)


_U, _V = _u_coeffs(_ASYM_TERMS)


def _asym_pos_scaled(x):
    """Scaled Ai, Ai', Bi, Bi' for large positive x (Ai*e^z, Bi*e^-z with z = 2/3 x^1.5)."""
    x = np.asarray(x, dtype=float)
    z = 2.0 / 3.0 * x**1.5
    q = x**0.25
    alt = np.zeros_like(x)
    alt_v = np.zeros_like(x)
    plain = np.zeros_like(x)
    plain_v = np.zeros_like(x)
    p = np.ones_like(x)
    for k in range(_ASYM_TERMS):
        s = (-1.0) ** k
        alt += s * _U[k] * p
        alt_v += s * _V[k] * p
        plain += _U[k] * p
        plain_v += _V[k] * p
        p = p / z
    rp = 1.0 / math.sqrt(math.pi)
    ai = 0.5 * rp / q * alt
    aip = -0.5 * rp * q * alt_v
    bi = rp / q * plain
    bip = rp * q * plain_v
    return ai, aip, bi, bip


def _asym_neg(x):
    """Ai, Ai', Bi, Bi' at x = -r for large r > 0."""
    r = -np.asarray(x, dtype=float)
    z = 2.0 / 3.0 * r**1.5
    q = r**0.25
    ue = np.zeros_like(r)
    uo = np.zeros_like(r)
    ve = np.zeros_like(r)
    vo = np.zeros_like(r)
    for k in range(_ASYM_TERMS // 2):
        s = (-1.0) ** k
        pe = z ** (-2.0 * k)
        po = pe / z
        ue += s * _U[2 * k] * pe
        uo += s * _U[2 * k + 1] * po
        ve += s * _V[2 * k] * pe
        vo += s * _V[2 * k + 1] * po
    ph = z - math.pi / 4.0
    c, sn = np.cos(ph), np.sin(ph)
    rp = 1.0 / math.sqrt(math.pi)
    ai = rp / q * (c * ue + sn * uo)
    aip = rp * q * (sn * ve - c * vo)
    bi = rp / q * (-sn * ue + c * uo)
    bip = rp * q * (c * ve + sn * vo)
    return ai, aip, bi, bip


@lru_cache(maxsize=1)
def _anchors():
    xs = np.arange(-_XMAX, _XMAX + 0.5 * _STEP, _STEP)
    m = len(xs)
    i0 = int(np.argmin(np.abs(xs)))
    ai = np.empty(m)
    aip = np.empty(m)
    bi = np.empty(m)
    bip = np.empty(m)
    ai[i0], aip[i0], bi[i0], bip[i0] = AI0, AIP0, BI0, BIP0
    # Bi everywhere and Ai on the oscillatory side: step outward from 0
    for i in range(i0 + 1, m):
        bi[i], bip[i] = _taylor(xs[i - 1], bi[i - 1], bip[i - 1], _STEP)
    for i in range(i0 - 1, -1, -1):
        bi[i], bip[i] = _taylor(xs[i + 1], bi[i + 1], bip[i + 1], -_STEP)
        ai[i], aip[i] = _taylor(xs[i + 1], ai[i + 1], aip[i + 1], -_STEP)
    # Ai on x > 0 is recessive going right, so step leftwards from the asymptotic value
    a_s, ap_s, _, _ = _asym_pos_scaled(np.array([xs[-1]]))
    e = math.exp(-2.0 / 3.0 * xs[-1] ** 1.5)
    ai[-1], aip[-1] = a_s[0] * e, ap_s[0] * e
    for i in range(m - 2, i0, -1):
        ai[i], aip[i] = _taylor(xs[i + 1], ai[i + 1], aip[i + 1], -_STEP)
    return xs, ai, aip, bi, bip


def airy_arrays(x, scaled=False):
    """Vectorized (Ai, Ai', Bi, Bi') at real x.

    With scaled=True, for x > 0 the Ai pair is multiplied by exp(2/3 x^1.5) and the
    Bi pair by exp(-2/3 x^1.5); values at x <= 0 are unchanged.
    """
    x = np.asarray(x, dtype=float)
    shape = x.shape
    x = x.ravel()
    out = [np.empty_like(x) for _ in range(4)]
    xs, tai, taip, tbi, tbip = _anchors()
    mid = np.abs(x) <= _XMAX
    if mid.any():
        xm = x[mid]
        idx = np.clip(np.rint((xm + _XMAX) / _STEP).astype(int), 0, len(xs) - 1)
        x0 = xs[idx]
        h = xm - x0
        a, ap = _taylor(x0, tai[idx], taip[idx], h)
        b, bp = _taylor(x0, tbi[idx], tbip[idx], h)
        if scaled:
            z = np.where(xm > 0, 2.0 / 3.0 * np.abs(xm) ** 1.5, 0.0)
            ez = np.exp(z)
            a, ap, b, bp = a * ez, ap * ez, b / ez, bp / ez
        for o, v in zip(out, (a, ap, b, bp)):
            o[mid] = v
    hi = x > _XMAX
    if hi.any():
        vals = _asym_pos_scaled(x[hi])
        if not scaled:
            z = 2.0 / 3.0 * x[hi] ** 1.5
            with np.errstate(over="ignore"):
                em, ep = np.exp(-z), np.exp(z)
            vals = (vals[0] * em, vals[1] * em, vals[2] * ep, vals[3] * ep)
        for o, v in zip(out, vals):
            o[hi] = v
    lo = x < -_XMAX
    if lo.any():
        for o, v in zip(out, _asym_neg(x[lo])):
            o[lo] = v
    return tuple(o.reshape(shape) for o in out)


def airy_eval(x) -> AiryPair:
    """Ai, Ai', Bi, Bi' at x (scalar or array). Bi overflows to inf for x beyond ~104."""
    ai, aip, bi, bip = airy_arrays(x)
    if np.ndim(ai) == 0:
        return AiryPair(float(ai), float(aip), float(bi), float(bip))
    return AiryPair(ai, aip, bi, bip)


def airy_ai(x):
    return airy_arrays(x)[0]


@lru_cache(maxsize=1)
def crossover_c() -> float:
    """Largest negative root of Ai = Bi, by bisection on [-1.5, 0]."""
    lo, hi = -1.5, 0.0

    def d(t):
        a, _, b, _ = airy_arrays(t)
        return float(a - b)

    flo = d(lo)
    while hi - lo > 1e-13:
        mid = 0.5 * (lo + hi)
        fm = d(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _modulus_arrays(x):
    x = np.asarray(x, dtype=float)
    c = crossover_c()
    a, ap, b, bp = airy_arrays(x, scaled=True)
    left = x <= c
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        ratio = np.where(left, 1.0, b / a)
        # E * Ai' and Bi'/E are invariant under the exponential scaling
        e_ai_p = ap * np.sqrt(ratio)
        bp_e = bp / np.sqrt(ratio)
        big_m = np.where(left, np.hypot(a, b), np.sqrt(2.0 * np.abs(a * b)))
        big_n = np.hypot(e_ai_p, bp_e)
        theta = np.where(left, np.arctan2(a, b), math.pi / 4.0)
        omega = np.arctan2(e_ai_p, bp_e)
        zeta = np.where(x > 0, 2.0 / 3.0 * np.abs(x) ** 1.5, 0.0)
        big_e = np.where(left, 1.0, np.sqrt(ratio) * np.exp(zeta))
    return big_e, big_m, big_n, theta, omega


def airy_modulus(x) -> AiryModulus:
    """Weight E, modulus M, derivative modulus N and phases theta, omega at x.

    E = 1 for x <= c and sqrt(Bi/Ai) beyond, with M sin(theta)/E = Ai and
    M E cos(theta) = Bi (and the analogous identities for the derivatives).
    """
    vals = _modulus_arrays(x)
    c = crossover_c()
    if np.ndim(vals[0]) == 0:
        return AiryModulus(*(float(v) for v in vals), crossover_c=c)
    return AiryModulus(*vals, crossover_c=c)


def m_over_e(x):
    """M/E, which equals sqrt(2) Ai for x > c; finite for all x."""
    x = np.asarray(x, dtype=float)
    c = crossover_c()
    a, _, b, _ = airy_arrays(x)
    return np.where(x <= c, np.hypot(a, b), math.sqrt(2.0) * a)


def _sup_on_grid(func, lo, hi, step):
    xs = np.arange(lo, hi + 0.5 * step, step)
    vals = func(xs)
    i = int(np.argmax(vals))
    a, b = xs[max(i - 1, 0)], xs[min(i + 1, len(xs) - 1)]
    if b > a:
        res = minimize_scalar(lambda t: -float(func(np.array([t]))[0]), bounds=(a, b),
                              method="bounded", options={"xatol": 1e-12})
        return max(float(vals[i]), -float(res.fun)), float(res.x)
    return float(vals[i]), float(xs[i])


def _lambda0_integrand(xs):
    _, big_m, _, _, _ = _modulus_arrays(xs)
    return math.pi * np.sqrt(np.abs(xs)) * big_m**2


@lru_cache(maxsize=1)
def lambda0_estimate() -> float:
    """sup over x of pi |x|^(1/2) M(x)^2, from a dense grid on [-100, 100] plus local refinement."""
    return _sup_on_grid(_lambda0_integrand, -100.0, 100.0, 1e-3)[0]


def _lambda1_integrand(xs):
    big_e, big_m, _, _, _ = _modulus_arrays(xs)
    c = crossover_c()
    a, _, b, _ = airy_arrays(xs, scaled=True)
    # for x > c, E M |Ai| = sqrt(2) Ai Bi exactly; avoids inf*0 at large x
    em_ai = np.where(xs <= c, big_e * big_m * np.abs(a), math.sqrt(2.0) * np.abs(a * b))
    return math.pi * np.sqrt(np.abs(xs)) * em_ai


def lambda1_estimate(lo: float = -100.0, hi: float = 50.0, step: float = 1e-3) -> float:
    """sup over [lo, hi] of pi E(x) M(x) |x|^(1/2) |Ai(x)|; the supremum over the line is 1,
    approached as x -> -infinity, so the window must extend well into x < 0."""
    return _sup_on_grid(_lambda1_integrand, lo, hi, step)[0]


# keeps mantissas below 2^200 so products of two of them stay finite
_RESCALE = 2.0**200
_LOG_RESCALE = 200.0 * math.log(2.0)


def _laguerre_tail(j: int, a: float, x):
    """Return (L_{j-2}, L_{j-1}, L_j) mantissas and a shared log scale.

    L_k^a(x) = mantissa_k * exp(logscale). Entries for negative indices are 0.
    """
    x = np.asarray(x, dtype=float)
    logs = np.zeros_like(x)
    l2 = np.zeros_like(x)
    l1 = np.zeros_like(x)
    l0 = np.ones_like(x)
    if j == 0:
        return l2, l1, l0, logs
    l1, l0 = l0, 1.0 + a - x
    for k in range(1, j):
        nxt = ((2 * k + 1 + a - x) * l0 - (k + a) * l1) / (k + 1)
        l2, l1, l0 = l1, l0, nxt
        big = np.abs(l0) > _RESCALE
        if big.any():
            l2 = np.where(big, l2 / _RESCALE, l2)
            l1 = np.where(big, l1 / _RESCALE, l1)
            l0 = np.where(big, l0 / _RESCALE, l0)
            logs = logs + np.where(big, _LOG_RESCALE, 0.0)
    return l2, l1, l0, logs


def laguerre_poly(j: int, a: float, x):
    """Generalized Laguerre polynomial L_j^a(x) by the three-term recurrence.

    Raises OverflowError when the value leaves the double range; use laguerre_fn
    (or laguerre_log) in that case.
    """
    if j < 0 or a < 0:
        raise ValueError("j and a must be nonnegative")
    _, _, l0, logs = _laguerre_tail(int(j), float(a), x)
    if np.any(logs + np.log(np.abs(l0) + 1e-300) > 709.0):
        raise OverflowError(f"L_{j}^{a}(x) exceeds the floating range; use laguerre_fn")
    val = l0 * np.exp(logs)
    return float(val) if np.ndim(val) == 0 else val


def laguerre_log(j: int, a: float, x):
    """(sign, log|L_j^a(x)|) without overflow."""
    _, _, l0, logs = _laguerre_tail(int(j), float(a), x)
    with np.errstate(divide="ignore"):
        return np.sign(l0), logs + np.log(np.abs(l0))


def laguerre_fn(j: int, a: float, x):
    """Laguerre function x^(a/2) e^(-x/2) L_j^a(x) assembled in the log domain."""
    if j < 0 or a < 0:
        raise ValueError("j and a must be nonnegative")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("x must be nonnegative")
    sgn, logl = laguerre_log(j, a, x)
    with np.errstate(divide="ignore", invalid="ignore"):
        logx = np.log(x)
        expo = np.where(x > 0, 0.5 * a * logx, 0.0) - 0.5 * x + logl
        val = sgn * np.exp(expo)
    if a > 0:
        val = np.where(x == 0, 0.0, val)
    return float(val) if np.ndim(val) == 0 else val
