"""Markdown summary of rate and Monte Carlo outputs."""
from __future__ import annotations

import csv
import json
from typing import Optional

import numpy as np

from .errors import MissingInputError
from .montecarlo import ks_statistic, tw2_values
from .operator import QuadratureSpec
from .ratelab import R2_MIN, SLOPE_SINGLE_RANGE, SLOPE_SUM_RANGE, SLOPE_W1_MAX

KS_MAX = 0.05


def _mark(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _rate_lines(path: str) -> list:
    with open(path, encoding="utf-8") as fh:
        rec = json.load(fh)
    sl, r2 = rec["slopes"], rec["r2"]
    w1 = [e["w1_bound"] for e in rec["entries"]]
    dec = all(b < a for a, b in zip(w1, w1[1:]))
    lines = [
        "## Rate sweep",
        "",
        f"gamma = {rec['gamma']}, s0 = {rec['s0']}, N = {', '.join(str(e['n']) for e in rec['entries'])}",
        "",
        "| N | a | norm_sum | norm_g | norm_h | w1_bound |",
        "|---|---|---|---|---|---|",
    ]
    for e in rec["entries"]:
        lines.append(f"| {e['n']} | {e['a']} | {e['norm_sum']:.6g} | {e['norm_g']:.6g} | {e['norm_h']:.6g} | {e['w1_bound']:.6g} |")
    lo, hi = SLOPE_SUM_RANGE
    glo, ghi = SLOPE_SINGLE_RANGE
    lines += [
        "",
        f"- slope_sum: {sl['sum']:.4f} (r2 {r2['sum']:.4f}), window [{lo}, {hi}], r2 >= {R2_MIN}: "
        f"{_mark(lo <= sl['sum'] <= hi and r2['sum'] >= R2_MIN)}",
        f"- slope_g: {sl['g']:.4f}, window [{glo}, {ghi}]: {_mark(glo <= sl['g'] <= ghi)}",
        f"- slope_h: {sl['h']:.4f}, window [{glo}, {ghi}]: {_mark(glo <= sl['h'] <= ghi)}",
        f"- slope_w1: {sl['w1']:.4f}, decreasing and <= {SLOPE_W1_MAX}: {_mark(dec and sl['w1'] <= SLOPE_W1_MAX)}",
        "",
    ]
    return lines


def _sample_lines(path: str, quad: QuadratureSpec) -> list:
    with open(path, encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise MissingInputError(f"{path} holds no samples")
    s = np.array([float(r["scaled_min"]) for r in rows])
    ks = ks_statistic(s, tw2_values(s, quad))
    return [
        "## Least eigenvalue vs TW2",
        "",
        f"samples = {len(s)}, mean scaled_min = {s.mean():.4f}",
        "",
        f"- ks_tw2: {ks:.4f}, threshold {KS_MAX}: {_mark(ks <= KS_MAX)}",
        "",
    ]


def build_report(rate_path: Optional[str], sample_path: Optional[str], quad: Optional[QuadratureSpec] = None) -> str:
    if not rate_path and not sample_path:
        raise MissingInputError("report needs --rate and/or --sample inputs")
    quad = quad or QuadratureSpec(0.0, 16.0, 60)
    lines = ["# edgekit summary", ""]
    if rate_path:
        lines += _rate_lines(rate_path)
    if sample_path:
        lines += _sample_lines(sample_path, quad)
    return "\n".join(lines)
