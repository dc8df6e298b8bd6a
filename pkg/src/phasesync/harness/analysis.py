"""Aggregates over trial records and the fits used by the acceptance checks."""
import math
from collections import defaultdict

import numpy as np

from .records import SCHEMA_VERSION


def _quantiles(values):
    if not values:
        return {"median": None, "q10": None, "q90": None}
    a = np.asarray(values, dtype=float)
    return {
        "median": float(np.median(a)),
        "q10": float(np.quantile(a, 0.1)),
        "q90": float(np.quantile(a, 0.9)),
    }


def loglog_slope(x, y):
    """Least-squares slope of log(y) against log(x)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    keep = (x > 0) & (y > 0)
    if keep.sum() < 2:
        return None
    return float(np.polyfit(np.log(x[keep]), np.log(y[keep]), 1)[0])


def logistic_fit(x, y, ridge=1e-3, iters=50):
    """Fit ``P(y=1) = 1/(1+exp(-(a + b x)))`` by Newton's method.

    A small ridge penalty on ``b`` keeps the fit finite when the data are
    perfectly separated. Returns ``(a, b)``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    X = np.column_stack([np.ones_like(x), x])
    beta = np.zeros(2)
    pen = np.diag([0.0, ridge])
    for _ in range(iters):
        p = 1.0 / (1.0 + np.exp(-np.clip(X @ beta, -500, 500)))
        grad = X.T @ (y - p) - pen @ beta
        hess = X.T @ (X * (p * (1 - p))[:, None]) + pen + 1e-12 * np.eye(2)
        step = np.linalg.solve(hess, grad)
        beta = beta + step
        if np.abs(step).max() < 1e-10:
            break
    return float(beta[0]), float(beta[1])


def nonincreasing_within_se(rates, counts, k=2.0):
    """True when every increase between consecutive rates is within ``k``
    standard errors of the difference."""
    for (p1, n1), (p2, n2) in zip(zip(rates, counts), zip(rates[1:], counts[1:])):
        se = math.sqrt(p1 * (1 - p1) / n1 + p2 * (1 - p2) / n2)
        if p2 - p1 > k * se:
            return False
    return True


def summarize(records):
    """Per-cell aggregates plus per-(n, estimator) fits."""
    cells = defaultdict(list)
    for rec in records:
        cells[rec.cell].append(rec)
    out_cells = []
    for key in sorted(cells):
        recs = cells[key]
        ok = [r for r in recs if r.ok]
        head = recs[0]
        scale = head.sigma * math.sqrt(math.log(head.n) / head.n)
        cell = {
            "n": head.n,
            "sigma": head.sigma,
            "sigma_rel": head.sigma_rel,
            "sigma_index": head.sigma_index,
            "estimator": head.estimator,
            "trials": len(recs),
            "failures": len(recs) - len(ok),
            "l2_err": _quantiles([r.l2_err for r in ok]),
            "linf_err": _quantiles([r.linf_err for r in ok]),
            "l2_over_sigma": _quantiles([r.l2_err / head.sigma for r in ok] if head.sigma > 0 else []),
            "linf_ratio": _quantiles([r.linf_err / scale for r in ok] if scale > 0 else []),
        }
        if head.estimator == "gpm":
            # None when the sweep ran without certificates.
            certified = [r for r in recs if r.cert_rank_ok is not None]
            cell["success_rate"] = (
                sum(r.cert_rank_ok for r in certified) / len(certified) if certified else None
            )
            cell["psd_rate"] = (
                sum(bool(r.cert_psd) for r in certified) / len(certified) if certified else None
            )
            its = [r.iterations for r in ok if r.iterations is not None]
            cell["mean_iterations"] = float(np.mean(its)) if its else None
            cell["contraction_max"] = _quantiles(
                [r.contraction_max for r in ok if r.contraction_max is not None]
            )
        out_cells.append(cell)

    fits = []
    by_series = defaultdict(list)
    for cell in out_cells:
        by_series[(cell["n"], cell["estimator"])].append(cell)
    for (n, est), series in sorted(by_series.items()):
        fit = {"n": n, "estimator": est}
        pts = [(c["sigma"], c["l2_err"]["median"]) for c in series
               if c["sigma"] > 0 and c["l2_err"]["median"] is not None]
        fit["l2_loglog_slope"] = loglog_slope(*zip(*pts)) if len(pts) >= 2 else None
        if est == "gpm":
            sel = [r for r in records
                   if r.n == n and r.estimator == est and r.cert_rank_ok is not None]
            xs = [r.sigma_rel for r in sel]
            ys = [float(r.cert_rank_ok) for r in sel]
            fit["logistic_slope"] = logistic_fit(xs, ys)[1] if len(set(xs)) >= 2 else None
        fits.append(fit)
    return {"schema_version": SCHEMA_VERSION, "cells": out_cells, "fits": fits}
