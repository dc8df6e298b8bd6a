"""Per-trial pipeline and the Monte Carlo sweep driver."""
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor

from ..certificate import verify_optimality
from ..errors import ConvergenceError, ValidationError
from ..gpm import GPMConfig, auxiliary_indices, run_auxiliary, run_gpm
from ..metrics import aligned_linf, d2
from ..model import sample_model
from ..rng import derive_seed
from ..spectral import eigenvector_estimator, projected_estimator
from .analysis import summarize
from .config import ESTIMATORS, ExperimentConfig, sigma_scale
from .records import RecordWriter, TrialRecord

log = logging.getLogger(__name__)

# Ratios whose denominator is below this are round-off, not contraction.
CONTRACTION_FLOOR = 1e-8


def trial_seed(base_seed, n, sigma_index, trial_index):
    """BLAKE2b of ``repr((base_seed, n, sigma_index, trial_index))`` joined by ':'."""
    return derive_seed(int(base_seed), int(n), int(sigma_index), int(trial_index))


def _max_or_none(values):
    values = [v for v in values if v is not None and math.isfinite(v)]
    return float(max(values)) if values else None


def _gpm_fields(model, gpm_max_iter, aux_m_count, certify=True):
    cfg = GPMConfig(max_iter=gpm_max_iter)
    trace = run_gpm(model.C, cfg=cfg, z=model.z, W=model.W)
    x = trace.x
    out = {
        "l2_err": d2(x, model.z),
        "linf_err": aligned_linf(x, model.z),
        "iterations": trace.iterations,
        "converged": trace.converged,
        "contraction_max": _max_or_none(trace.ratios(CONTRACTION_FLOOR)),
        "region_n1_max": _max_or_none(trace.region_n1),
        "region_n2_max": _max_or_none(trace.region_n2),
    }
    if aux_m_count:
        prox = []
        for m in auxiliary_indices(model.n, aux_m_count):
            prox.extend(run_auxiliary(model, m, cfg, primary=trace).proximity)
        out["proximity_max"] = _max_or_none(prox)
    if not certify:
        return out
    report = verify_optimality(model.C, x)
    out.update(
        cert_psd=report.psd,
        cert_rank_ok=report.rank_deficiency_ok,
        lambda2=report.lambda2,
        kernel_residual=report.kernel_residual,
    )
    return out


def _eig_fields(model, projected):
    x = eigenvector_estimator(model.C, model.z)
    if projected:
        x = projected_estimator(x)
    return {"l2_err": d2(x, model.z), "linf_err": aligned_linf(x, model.z)}


def run_cell_trial(n, sigma, kind, estimators, seed, *, sigma_index=0, trial=0, sigma_rel=None,
                   aux_m_count=0, gpm_max_iter=None, certify=True,
                   record_wallclock=False):
    """All requested estimators on one sampled instance.

    Solver failures are caught and reported in ``status``; error fields
    stay empty for failed records.
    """
    model = sample_model(n, sigma, kind, seed)
    if sigma_rel is None:
        sigma_rel = float(sigma) / sigma_scale(n)
    records = []
    for est in estimators:
        if est not in ESTIMATORS:
            raise ValidationError(f"unknown estimator {est!r}")
        rec = TrialRecord(
            n=int(n), sigma=float(sigma), sigma_rel=float(sigma_rel),
            sigma_index=int(sigma_index), trial=int(trial), seed=int(seed),
            noise_kind=kind, estimator=est,
        )
        t0 = time.perf_counter()
        try:
            if est == "gpm":
                values = _gpm_fields(model, gpm_max_iter, aux_m_count, certify)
            else:
                values = _eig_fields(model, est == "projected-eig")
        except ConvergenceError as exc:
            rec.status = f"solver-failure: {exc}"
            if est == "gpm" and certify:
                rec.cert_psd = rec.cert_rank_ok = False
        else:
            for key, value in values.items():
                setattr(rec, key, value)
        if record_wallclock:
            rec.wallclock_ms = (time.perf_counter() - t0) * 1e3
        records.append(rec)
    return records


def run_trial(n, sigma, kind, estimator, seed, **kwargs):
    return run_cell_trial(n, sigma, kind, [estimator], seed, **kwargs)[0]


def _job(args):
    return run_cell_trial(*args[0], **args[1])


def _jobs(cfg):
    for n in cfg.n_values:
        for si, value in enumerate(cfg.sigma_values):
            sigma = cfg.sigma_for(n, value)
            rel = value if cfg.sigma_mode == "relative" else sigma / sigma_scale(n)
            for t in range(cfg.trials_per_cell):
                seed = trial_seed(cfg.base_seed, n, si, t)
                yield (
                    (n, sigma, cfg.noise_kind, cfg.estimator_set, seed),
                    dict(sigma_index=si, trial=t, sigma_rel=rel, aux_m_count=cfg.aux_m_count,
                         gpm_max_iter=cfg.gpm_max_iter, certify=cfg.certify,
                         record_wallclock=cfg.record_wallclock),
                )


def _check_output_dir(path):
    try:
        os.makedirs(path, exist_ok=True)
        probe = os.path.join(path, ".write-test")
        with open(probe, "w") as fh:
            fh.write("")
        os.remove(probe)
    except OSError as exc:
        raise OSError(f"output directory {path!r} is not writable: {exc}") from exc


def run_sweep(cfg):
    """Run every (n, sigma, trial) job and write records, summary and plots.

    Records are written in job order (n, sigma index, trial, estimator)
    whatever the worker count, so serial and parallel runs produce the
    same ``records.csv``. Returns the summary dict.
    """
    if not isinstance(cfg, ExperimentConfig):
        cfg = ExperimentConfig.from_dict(cfg)
    out = cfg.output_dir
    _check_output_dir(out)
    jobs = list(_jobs(cfg))
    records = []
    with RecordWriter(os.path.join(out, "records.csv")) as writer:
        if cfg.workers > 1:
            with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
                results = pool.map(_job, jobs, chunksize=max(1, len(jobs) // (4 * cfg.workers)))
                for recs in results:
                    for rec in recs:
                        writer.write(rec)
                        records.append(rec)
        else:
            for job in jobs:
                for rec in _job(job):
                    writer.write(rec)
                    records.append(rec)
    summary = summarize(records)
    summary["config"] = cfg.to_dict()
    with open(os.path.join(out, "summary.json"), "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if cfg.plots:
        from .plots import emit_plots

        emit_plots(summary, os.path.join(out, "records.csv"), os.path.join(out, "plots"))
    failures = sum(not r.ok for r in records)
    if failures:
        log.warning("%d of %d records are solver failures", failures, len(records))
    return summary

