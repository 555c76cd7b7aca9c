"""Report assembly and serialization for the command-line interface.

Every report is a dict with ``metrics``, ``se``, ``flags`` and ``meta`` keys.
Tabular commands put a list of row dicts under ``metrics``. Numbers are
passed through unrounded.
"""

import json
import logging
import math
from collections.abc import Sequence
from typing import Any

import numpy as np
import pandas as pd

from hitcurve.config import BOOTSTRAP_METHODS, RunConfig
from hitcurve.data import PartitionTable, ScoreColumns
from hitcurve.errors import HitCurveError, RandomDenominator
from hitcurve.inference import difference_se, difference_test, standard_error
from hitcurve.metrics import (
    SEMethod,
    ap,
    auc,
    beta_hat,
    hit_curve,
    inflate_table,
    pr_curve,
    roc_curve,
)
from hitcurve.quasiconcave import QuasiConcaveModel, model_ap, model_auc, theorem2_check
from hitcurve.simulation import ScenarioSummary, StudyResult

logger = logging.getLogger(__name__)


def _meta(config: RunConfig) -> dict[str, Any]:
    meta: dict[str, Any] = {
        "command": config.command,
        "seed": config.seed,
        "methods": [m.value for m in config.se_methods],
    }
    if BOOTSTRAP_METHODS.intersection(config.se_methods):
        meta["bootstrap"] = config.bootstrap
    if config.input is not None:
        meta["input"] = config.input.name
    return meta


def _standard_errors(table: PartitionTable, config: RunConfig) -> dict[str, dict[str, Any]]:
    se: dict[str, dict[str, Any]] = {}
    for method in config.se_methods:
        if method == SEMethod.NONE:
            continue
        se[method.value] = {
            metric: standard_error(
                table, metric, method, B=config.bootstrap, seed=config.seed
            ).se
            for metric in ("ap", "auc")
        }
    return se


def _table_metrics(table: PartitionTable) -> tuple[dict[str, Any], dict[str, Any]]:
    ap_value = ap(table)
    auc_exact = auc(table)
    metrics: dict[str, Any] = {
        "ap": ap_value,
        "auc_exact": auc_exact,
        "auc_paper": auc(table, mode="paper"),
        "pi": table.pi,
        "n": table.n,
        "n1": table.n1,
        "n0": table.n0,
        "K": table.K,
    }
    try:
        estimate = beta_hat(ap_value, auc_exact, table.pi)
        metrics["beta_hat"] = estimate.value
        flags = {"beta_hat_out_of_range": not estimate.in_range, "beta_hat_undefined": False}
    except RandomDenominator:
        metrics["beta_hat"] = None
        flags = {"beta_hat_out_of_range": False, "beta_hat_undefined": True}
    return metrics, flags


def metrics_report(table: PartitionTable, config: RunConfig) -> dict[str, Any]:
    """AP, both AUC modes, prevalence, beta_hat and the requested standard errors."""
    table.require_both_classes()
    metrics, flags = _table_metrics(table)
    return {
        "metrics": metrics,
        "se": _standard_errors(table, config),
        "flags": flags,
        "meta": _meta(config),
    }


def rank_report(data: ScoreColumns, config: RunConfig) -> dict[str, Any]:
    """One row per usable score column, ordered by AP, then AUC, then name."""
    rows = []
    skipped = dict(data.problems)
    for name, scores in data.columns.items():
        table = PartitionTable.from_arrays(scores, data.labels)
        table.require_both_classes()
        metrics, flags = _table_metrics(table)
        rows.append({"column": name, **metrics, "se": _standard_errors(table, config), **flags})
    for name, problem in skipped.items():
        logger.warning("Skipping column %s: %s", name, problem)
    rows.sort(key=lambda r: (-r["ap"], -r["auc_exact"], r["column"]))
    for rank, row in enumerate(rows, start=1):
        row["rank"] = rank
    return {"metrics": rows, "se": {}, "flags": {"skipped": skipped}, "meta": _meta(config)}


def curves_report(table: PartitionTable, config: RunConfig) -> dict[str, Any]:
    """Hit, ROC and PR points as ``kind, x, y`` rows."""
    rows = []
    for curve in (hit_curve(table), roc_curve(table), pr_curve(table)):
        rows.extend({"kind": curve.kind, "x": x, "y": y} for x, y in curve.points)
    return {"metrics": rows, "se": {}, "flags": {}, "meta": _meta(config)}


def inflate_report(data: ScoreColumns, config: RunConfig) -> dict[str, Any]:
    """AP and exact AUC per score column and control inflation factor."""
    rows = []
    for name, scores in data.columns.items():
        table = PartitionTable.from_arrays(scores, data.labels)
        table.require_both_classes()
        for m in config.inflate:
            inflated = inflate_table(table, m)
            rows.append(
                {
                    "column": name,
                    "m": m,
                    "n0": inflated.n0,
                    "pi": inflated.pi,
                    "ap": ap(inflated),
                    "auc_exact": auc(inflated),
                }
            )
    return {
        "metrics": rows,
        "se": {},
        "flags": {"skipped": dict(data.problems)},
        "meta": _meta(config),
    }


def quasi_report(model: QuasiConcaveModel) -> dict[str, Any]:
    """Closed-form AUC, exact and approximate AP, rescaled metrics and the theorem gap."""
    exact = theorem2_check(model, mode="exact")
    taylor = theorem2_check(model, mode="taylor")
    auc_value = model_auc(model)
    return {
        "metrics": {
            "alpha": model.alpha,
            "beta": model.beta,
            "pi": model.pi,
            "auc": auc_value,
            "ap_exact": model_ap(model, mode="exact"),
            "ap_taylor": model_ap(model, mode="taylor"),
            "auc_tilde": 2 * auc_value - 1,
            "ap_tilde_exact": exact.ap_tilde,
            "ap_tilde_taylor": taylor.ap_tilde,
            "beta_times_auc_tilde": exact.beta_times_auc_tilde,
            "theorem2_gap_exact": exact.gap,
            "theorem2_gap_taylor": taylor.gap,
        },
        "se": {},
        "flags": {},
        "meta": {"command": "quasi"},
    }


def _summary_row(summary: ScenarioSummary) -> dict[str, Any]:
    return {
        "n": summary.scenario.n,
        "pi": summary.scenario.pi,
        "delta": summary.scenario.delta,
        "ap": summary.ap,
        "auc_exact": summary.auc_exact,
        "auc_paper": summary.auc_paper,
        "beta_hat": summary.beta_hat.value,
        "beta_hat_in_range": summary.beta_hat.in_range,
        "overlay_slope": summary.overlay_slope,
    }


def scenario_report(summaries: Sequence[ScenarioSummary], seed: int) -> dict[str, Any]:
    """Metrics per simulated cell; a single cell also carries its hit curve."""
    report: dict[str, Any] = {
        "metrics": [_summary_row(s) for s in summaries],
        "se": {},
        "flags": {},
        "meta": {"command": "simulate", "seed": seed},
    }
    if len(summaries) == 1:
        report["curve"] = summaries[0].hit.points
    return report


def study_report(study: StudyResult) -> dict[str, Any]:
    """Aggregates of a replicate study plus the per-replicate metrics."""
    s = study.scenario
    return {
        "metrics": {"n": s.n, "pi": s.pi, "delta": s.delta, **study.aggregates()},
        "se": {},
        "flags": {},
        "meta": {"command": "simulate", "seed": s.seed},
        "replicates": [
            {"ap": r.ap, "auc": r.auc, "beta_hat": r.beta_hat, "in_range": r.in_range}
            for r in study.replicates
        ],
    }


def diff_report(
    se1: float,
    se2: float,
    rhos: Sequence[float],
    ap1: float | None = None,
    ap2: float | None = None,
) -> dict[str, Any]:
    """Standard error of a paired difference across correlations, with z tests if given."""
    rows = []
    for rho in rhos:
        row: dict[str, Any] = {"rho": rho, "se": difference_se(se1, se2, rho)}
        if ap1 is not None and ap2 is not None:
            test = difference_test(ap1, ap2, se1, se2, rho)
            row.update({"difference": test.difference, "z": test.z, "p_value": test.p_value})
        rows.append(row)
    return {
        "metrics": rows,
        "se": {},
        "flags": {},
        "meta": {"command": "diff-se", "se1": se1, "se2": se2},
    }


def _plain(value: Any) -> Any:
    """Convert numpy scalars and non-finite floats into JSON-safe values."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def _flatten(prefix: str, value: Any, out: list[tuple[str, Any]]) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(value, list) and value and isinstance(value[0], (dict, list)):
        for i, v in enumerate(value):
            _flatten(f"{prefix}.{i}", v, out)
    else:
        out.append((prefix, value))


def render(report: dict[str, Any], fmt: str) -> str:
    """Serialize a report as JSON or CSV.

    CSV renders tabular reports as one row per entry of ``metrics`` and
    other reports as ``key,value`` pairs.
    """
    plain = _plain(report)
    if fmt == "json":
        return json.dumps(plain, indent=2) + "\n"
    if fmt != "csv":
        raise HitCurveError(f"unknown output format: {fmt!r}")
    metrics = plain["metrics"]
    if isinstance(metrics, list):
        frame = pd.json_normalize(metrics) if metrics else pd.DataFrame()
    else:
        pairs: list[tuple[str, Any]] = []
        _flatten("", {k: v for k, v in plain.items() if k != "meta"}, pairs)
        frame = pd.DataFrame(pairs, columns=["key", "value"])
    return str(frame.to_csv(index=False, lineterminator="\n"))

