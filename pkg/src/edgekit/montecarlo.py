"""Complex Wishart sampling and empirical comparisons with TW2 and Marchenko-Pastur."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .errors import ConvergenceError, DomainError
from .kernels import mp_density, mp_edges
from .operator import QuadratureSpec, tw2_cdf
from .scaling import EnsembleParams, composite_left


@dataclass(frozen=True)
class SampleBatch:
    params: EnsembleParams
    seed: int
    reps: int
    min_eigs: np.ndarray
    scaled_min: np.ndarray
    mu: float = float("nan")
    sigma: float = float("nan")


def rep_generator(seed: int, rep: int) -> np.random.Generator:
    """Counter-based Philox stream keyed by (seed, repetition index)."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(rep)])))


def _gaussian_matrix(params: EnsembleParams, rng: np.random.Generator):
    shape = (params.n, params.big_n)
    # real and imaginary parts independent with variance 1/2, so E|X_jk|^2 = 1
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * np.sqrt(0.5)


def _eigs(x, smallest_only=False):
    w = x.conj().T @ x
    try:
        if smallest_only:
            return scipy.linalg.eigvalsh(w, subset_by_index=[0, 0])
        return scipy.linalg.eigvalsh(w)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"Hermitian eigensolver failed: {exc}") from exc


def sample_wishart(params: EnsembleParams, seed: int, rep: int = 0) -> np.ndarray:
    """Ascending eigenvalues of X* X, X an (N+a) x N standard complex Gaussian matrix."""
    return _eigs(_gaussian_matrix(params, rep_generator(seed, rep)))


def default_threads() -> int:
    env = os.environ.get("EDGEKIT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise DomainError(f"EDGEKIT_THREADS must be an integer, got {env!r}") from None
    return 1


def _map_reps(func, reps: int, threads: Optional[int]):
    threads = threads or default_threads()
    if threads <= 1 or reps < 2:
        return [func(i) for i in range(reps)]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(func, range(reps)))


def min_eigs(params: EnsembleParams, reps: int, seed: int, threads: Optional[int] = None) -> np.ndarray:
    def one(i):
        return float(_eigs(_gaussian_matrix(params, rep_generator(seed, i)), smallest_only=True)[0])

    return np.array(_map_reps(one, reps, threads), dtype=float)


def scaled_min_batch(params: EnsembleParams, reps: int, seed: int, threads: Optional[int] = None) -> SampleBatch:
    """Least eigenvalues and their left-edge coordinates s = (mu - lambda_min)/sigma."""
    sc = composite_left(params)
    if reps < 0:
        raise DomainError("reps must be nonnegative")
    lam = min_eigs(params, reps, seed, threads)
    return SampleBatch(params, int(seed), int(reps), lam, (sc.mu - lam) / sc.sigma, sc.mu, sc.sigma)


def ks_statistic(samples, cdf_values) -> float:
    """sup |ECDF - F| over the jump points, given F at the sorted samples."""
    xs = np.asarray(samples, dtype=float)
    order = np.argsort(xs, kind="stable")
    f = np.asarray(cdf_values, dtype=float)[order]
    n = len(xs)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def ks_to_tw2(batch: SampleBatch, quad: Optional[QuadratureSpec] = None, convention: str = "gap") -> float:
    """Kolmogorov-Smirnov distance between the scaled least eigenvalues and TW2.

    convention "gap" uses s = (mu - lambda_min)/sigma; "literal" uses -(lambda_min + mu)/sigma,
    which is reported only to show that it does not match TW2.
    """
    if batch.reps == 0 or len(batch.scaled_min) == 0:
        raise DomainError("KS distance needs a nonempty batch")
    if convention == "gap":
        s = np.asarray(batch.scaled_min)
    elif convention == "literal":
        s = -(np.asarray(batch.min_eigs) + batch.mu) / batch.sigma
    else:
        raise DomainError(f"unknown convention {convention!r}")
    quad = quad or QuadratureSpec(0.0, 16.0, 60)
    f = tw2_values(s, quad)
    return ks_statistic(s, f)


def tw2_values(s, quad: QuadratureSpec):
    """TW2 at many points; far tails are clamped (F < 1e-30 below -12, F = 1 to double precision above 12)."""
    s = np.asarray(s, dtype=float)
    out = np.empty_like(s)
    lo, hi = s < -12.0, s > 12.0
    mid = ~(lo | hi)
    out[lo] = 0.0
    out[hi] = 1.0
    if mid.any():
        out[mid] = tw2_cdf(s[mid], quad)
    return out


@dataclass(frozen=True)
class MPComparison:
    edges: np.ndarray
    empirical: np.ndarray
    density: np.ndarray
    l1: float
    support: tuple


def esm_vs_mp(params: EnsembleParams, reps: int, seed: int, bins: int = 40, threads: Optional[int] = None) -> MPComparison:
    """Histogram of the eigenvalues of L/n against the Marchenko-Pastur density with ratio gamma = N/n.

    The density column is the bin average of the density, and l1 = sum |hist - density| * width.
    """
    if params.big_n < 10:
        raise DomainError("ESM comparison needs N >= 10")
    eig = np.concatenate(_map_reps(lambda i: sample_wishart(params, seed, i), reps, threads)) / params.n
    lo, hi = mp_edges(params.gamma)
    a = min(max(lo - 0.2, 0.0), float(eig.min()))
    b = max(hi + 0.2, float(eig.max()))
    edges = np.linspace(a, b, bins + 1)
    counts, _ = np.histogram(eig, bins=edges)
    width = np.diff(edges)
    emp = counts / (counts.sum() * width)
    # bin averages of the density by a 16-point Gauss rule per bin
    gx, gw = np.polynomial.legendre.leggauss(16)
    mids, halfw = 0.5 * (edges[1:] + edges[:-1]), 0.5 * width
    pts = mids[:, None] + halfw[:, None] * gx[None, :]
    dens = (mp_density(params.gamma, 1.0, pts) @ gw) / 2.0
    l1 = float(np.sum(np.abs(emp - dens) * width))
    return MPComparison(edges, emp, dens, l1, (lo, hi))
