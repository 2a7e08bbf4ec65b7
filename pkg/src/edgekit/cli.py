"""Command line interface: `edgekit <subcommand> ...`.

Exit codes: 0 success, 2 domain or usage error, 3 numerical convergence failure.
"""
from __future__ import annotations

import csv
import datetime as _dt
import io
import json
import math
import os
import sys
from typing import Optional

import click
import numpy as np

from . import __version__
from .errors import ConvergenceError, DomainError, MissingInputError
from .kernels import KernelSpec
from .operator import QuadratureSpec, tw2_cdf, w1_components
from .scaling import EnsembleParams, composite_left, deviation_params, left_pairs

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_CONVERGENCE = 3


def fmt(v) -> str:
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return "%.17g" % v


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([c if isinstance(c, (str, int, np.integer)) else fmt(c) for c in r])
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"


def emit(text: str, out: Optional[str], config: dict, extra_meta: Optional[dict] = None):
    """Write the primary artifact; with a file target also write <out>.meta.json holding the config."""
    if out is None or out == "-":
        click.echo(text, nl=False)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    meta = {"config": config, "version": __version__,
            "created": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")}
    if extra_meta:
        meta.update(extra_meta)
    with open(out + ".meta.json", "w", encoding="utf-8") as fh:
        fh.write(json_text(meta))


def parse_grid(spec: str) -> np.ndarray:
    try:
        start, stop, step = (float(p) for p in spec.split(":"))
    except ValueError:
        raise DomainError(f"grid must be start:stop:step, got {spec!r}") from None
    if step <= 0 or stop < start:
        raise DomainError(f"invalid grid {spec!r}")
    count = int(round((stop - start) / step)) + 1
    return np.linspace(start, start + (count - 1) * step, count)


def parse_int_list(text: str) -> list:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise DomainError(f"expected a comma separated list of integers, got {text!r}") from None


def _config(ctx: click.Context) -> dict:
    cfg = {"subcommand": ctx.info_name}
    cfg.update({k: v for k, v in sorted(ctx.params.items())})
    cfg["threads"] = ctx.obj.get("threads") if ctx.obj else None
    return cfg


def _check_gamma(gamma: float, allow_one: bool = False):
    ok = 0.0 < gamma < 1.0 or (allow_one and gamma == 1.0)
    if not ok:
        raise DomainError(f"gamma must lie in (0, 1), got {gamma}")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--threads", type=int, default=None, help="Worker threads (overrides EDGEKIT_THREADS).")
@click.version_option(__version__)
@click.pass_context
def main(ctx, threads):
    """Edge statistics of the Laguerre unitary ensemble."""
    ctx.ensure_object(dict)
    if threads is None:
        env = os.environ.get("EDGEKIT_THREADS")
        threads = int(env) if env and env.isdigit() else 1
    if threads < 1:
        raise click.BadParameter("threads must be >= 1", param_hint="--threads")
    ctx.obj["threads"] = threads


@main.command()
@click.option("--which", type=click.Choice(["airy", "bessel", "lue", "gtau", "htau"]), required=True)
@click.option("--grid", "grid", required=True, help="start:stop:step for both arguments.")
@click.option("--n", "big_n", type=int, default=10, show_default=True)
@click.option("--a", "a", type=int, default=10, show_default=True)
@click.option("--order", type=float, default=0.0, show_default=True, help="Bessel order.")
@click.option("--s0", type=float, default=0.0, show_default=True)
@click.option("--diagonal", is_flag=True, help="Only emit K(x, x).")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def kernel(ctx, which, grid, big_n, a, order, s0, diagonal, out):
    """Tabulate a kernel on a grid as CSV (x, y, value)."""
    xs = parse_grid(grid)
    if which == "airy":
        spec = KernelSpec.airy()
    elif which == "bessel":
        spec = KernelSpec.bessel(order)
    else:
        p = EnsembleParams(big_n, a)
        if which == "lue":
            spec = KernelSpec.lue(p)
        else:
            sc = composite_left(p)
            spec = KernelSpec.g_tau(p, sc, s0) if which == "gtau" else KernelSpec.h_tau(p, sc, s0)
    if diagonal:
        vals = np.asarray(spec(xs, xs))
        rows = [(x, x, v) for x, v in zip(xs, vals)]
    else:
        xx, yy = np.meshgrid(xs, xs, indexing="ij")
        vals = np.asarray(spec(xx.ravel(), yy.ravel()))
        rows = list(zip(xx.ravel(), yy.ravel(), vals))
    emit(csv_text(["x", "y", "value"], rows), out, _config(ctx))


@main.command()
@click.option("--n", "big_n", type=int, required=True)
@click.option("--a", "a", type=int, required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def scaling(ctx, big_n, a, out):
    """Composite left-edge scaling and deviation parameters as JSON."""
    p = EnsembleParams(big_n, a)
    sc = composite_left(p)
    dev = deviation_params(p, sc)
    (m1, s1), (m2, s2) = left_pairs(p)
    rec = {
        "mu_tilde": sc.mu,
        "sigma_tilde": sc.sigma,
        "theta_left": dev.theta_left,
        "theta_right": dev.theta_right,
        "delta_left": dev.delta_left,
        "delta_right": dev.delta_right,
        "mu_pairs": {"n-1,N": m1, "n,N-1": m2},
        "sigma_pairs": {"n-1,N": s1, "n,N-1": s2},
        "config": _config(ctx),
    }
    emit(json_text(rec), out, _config(ctx))


@main.command()
@click.option("--n", "big_n", type=int, required=True)
@click.option("--a", "a", type=int, required=True)
@click.option("--grid", "grid", required=True, help="start:stop:step in z, inside (0, z2).")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def lg(ctx, big_n, a, grid, out):
    """Liouville-Green table: z, f, zeta, f_tilde, psi (psi is nan for z >= z1)."""
    from .lgtransform import f_eval, f_tilde, lg_context, psi_eval, zeta_left

    c = lg_context(EnsembleParams(big_n, a))
    zs = parse_grid(grid)
    rows = []
    for z in zs:
        psi = psi_eval(c, z) if 0 < z < c.z1 else float("nan")
        rows.append((z, f_eval(c, z), zeta_left(c, z), f_tilde(c, z), psi))
    emit(csv_text(["z", "f", "zeta", "f_tilde", "psi"], rows), out, _config(ctx))


@main.command()
@click.option("--s-min", type=float, default=-6.0, show_default=True)
@click.option("--s-max", type=float, default=3.0, show_default=True)
@click.option("--step", type=float, default=0.05, show_default=True)
@click.option("--nodes", type=int, default=80, show_default=True)
@click.option("--length", type=float, default=16.0, show_default=True)
@click.option("--tol", type=float, default=1e-8, show_default=True, help="Refinement tolerance (0 disables).")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def tw2(ctx, s_min, s_max, step, nodes, length, tol, out):
    """Tracy-Widom (beta = 2) distribution function on a grid, CSV (s, F2)."""
    ss = parse_grid(f"{s_min}:{s_max}:{step}")
    quad = QuadratureSpec(0.0, length, nodes)
    vals = tw2_cdf(ss, quad, tol if tol > 0 else None)
    emit(csv_text(["s", "F2"], zip(ss, np.atleast_1d(vals))), out, _config(ctx))


def _quad_opts(f):
    f = click.option("--length", type=float, default=14.0, show_default=True)(f)
    f = click.option("--nodes", type=int, default=120, show_default=True)(f)
    return f


@main.command()
@click.option("--gamma", type=float, required=True)
@click.option("--n", "big_n", type=int, required=True)
@click.option("--s0", type=float, default=0.0, show_default=True)
@_quad_opts
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def w1bound(ctx, gamma, big_n, s0, nodes, length, out):
    """Upper bound on W1 between the rescaled LUE and Airy point counts on (s0, inf), as JSON."""
    from .ratelab import params_for

    _check_gamma(gamma)
    p = params_for(gamma, big_n)
    comps = w1_components(p, composite_left(p), s0, QuadratureSpec(s0, length, nodes))
    rec = {"gamma": gamma, "n": big_n, "a": p.a, "gamma_n": p.gamma, "s0": s0}
    rec.update(comps)
    rec["config"] = _config(ctx)
    emit(json_text(rec), out, _config(ctx))


@main.command()
@click.option("--gamma", type=float, required=True)
@click.option("--n-list", "n_list", default="64,128,256,512", show_default=True)
@click.option("--s0", type=float, default=0.0, show_default=True)
@_quad_opts
@click.option("--json", "out", type=click.Path(dir_okay=False), default=None, help="Output path (stdout if absent).")
@click.pass_context
def rate(ctx, gamma, n_list, s0, nodes, length, out):
    """Sweep N at fixed gamma; norms, W1 bound and fitted log-log slopes as JSON."""
    from .ratelab import norm_sweep

    _check_gamma(gamma)
    rep = norm_sweep(gamma, parse_int_list(n_list), s0, QuadratureSpec(s0, length, nodes))
    rec = rep.to_dict()
    rec["config"] = _config(ctx)
    emit(json_text(rec), out, _config(ctx))


@main.command()
@click.option("--n", "big_n", type=int, required=True)
@click.option("--a", "a", type=int, required=True)
@click.option("--reps", type=int, required=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--verbose", is_flag=True, help="Report KS distances to TW2 under both scaling conventions.")
@click.pass_context
def sample(ctx, big_n, a, reps, seed, out, verbose):
    """Least eigenvalues of complex Wishart samples, CSV (rep, min_eig, scaled_min)."""
    from .montecarlo import ks_to_tw2, scaled_min_batch

    if seed < 0:
        raise DomainError("seed must be nonnegative")
    b = scaled_min_batch(EnsembleParams(big_n, a), reps, seed, ctx.obj["threads"])
    rows = [(i, m, s) for i, (m, s) in enumerate(zip(b.min_eigs, b.scaled_min))]
    extra = None
    if verbose and reps > 0:
        ks_gap = ks_to_tw2(b)
        ks_lit = ks_to_tw2(b, convention="literal")
        click.echo(f"ks_tw2 (mu - lambda_min)/sigma: {fmt(ks_gap)}", err=True)
        click.echo(f"ks_tw2 -(lambda_min + mu)/sigma: {fmt(ks_lit)}", err=True)
        extra = {"ks_gap_convention": ks_gap, "ks_literal_convention": ks_lit}
    emit(csv_text(["rep", "min_eig", "scaled_min"], rows), out, _config(ctx), extra)


@main.command()
@click.option("--n", "big_n", type=int, required=True)
@click.option("--a", "a", type=int, required=True)
@click.option("--reps", type=int, default=50, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--bins", type=int, default=40, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def mp(ctx, big_n, a, reps, seed, bins, out):
    """Eigenvalue histogram of L/n against the Marchenko-Pastur density, CSV."""
    from .montecarlo import esm_vs_mp

    r = esm_vs_mp(EnsembleParams(big_n, a), reps, seed, bins, ctx.obj["threads"])
    rows = zip(r.edges[:-1], r.edges[1:], r.empirical, r.density)
    click.echo(f"l1: {fmt(r.l1)}", err=True)
    emit(csv_text(["bin_left", "bin_right", "empirical", "density"], rows), out, _config(ctx), {"l1": r.l1})


@main.command()
@click.option("--rate", "rate_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--sample", "sample_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--nodes", type=int, default=60, show_default=True, help="Nodes for TW2 in the KS statistic.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_context
def report(ctx, rate_path, sample_path, nodes, out):
    """Markdown summary of a rate JSON and/or a sample CSV with pass/fail against the thresholds."""
    from .report import build_report

    text = build_report(rate_path, sample_path, QuadratureSpec(0.0, 16.0, nodes))
    emit(text, out, _config(ctx))


def run(argv=None) -> int:
    """Entry point returning the exit status instead of raising SystemExit."""
    try:
        main.main(args=argv, prog_name="edgekit", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return EXIT_DOMAIN
    except click.exceptions.Abort:
        return 1
    except (DomainError, MissingInputError, OverflowError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_DOMAIN
    except ConvergenceError as exc:
        click.echo(f"convergence failure: {exc}", err=True)
        return EXIT_CONVERGENCE
    return EXIT_OK


def entry():
    sys.exit(run())


if __name__ == "__main__":
    entry()
