"""The 34-model hypothesis suite with per-RQ BH correction."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from ..io_utils import write_csv, write_json
from .design import (
    DesignError,
    ModelSpec,
    all_model_specs,
    null_design,
    prepare_design,
)
from .fitbase import FitResult
from .glm import DispersionError, dispersion_statistic, fit_poisson
from .glmm import fit_negbin_random_intercept
from .inference import bh_adjust, effect_sizes, fit_quality, one_sided_p, randomized_quantile_residuals

ALPHA = 0.05

ACCEPTED = "accepted"
REJECTED = "rejected"
INCONCLUSIVE = "inconclusive"


@dataclass
class HypothesisResult:
    spec: ModelSpec
    fit: FitResult | None = None
    poisson_fit: FitResult | None = None
    null_ll: float = float("nan")
    dispersion_stat: float = float("nan")
    p_raw: float = 1.0
    p_bh: float = 1.0
    irr: float = float("nan")
    ame: float = float("nan")
    mcfadden: float = float("nan")
    status: str = INCONCLUSIVE
    note: str = ""

    @property
    def accepted(self) -> bool:
        return self.status == ACCEPTED

    @property
    def converged(self) -> bool:
        return self.fit is not None and self.fit.converged

    def iv_stats(self) -> tuple[float, float, float, float]:
        if self.fit is None:
            nan = float("nan")
            return nan, nan, nan, nan
        k = self.fit.coef(self.spec.iv)
        return (
            float(self.fit.beta[k]),
            float(self.fit.se[k]),
            float(self.fit.ci_low[k]),
            float(self.fit.ci_high[k]),
        )


@dataclass(frozen=True)
class HypothesisVerdict:
    hypothesis: str  # e.g. "H1.2:ChF"
    p_raw: float
    p_bh: float
    accepted: bool
    status: str


@dataclass
class SuiteResult:
    results: list[HypothesisResult]
    verdicts: list[HypothesisVerdict] = field(default_factory=list)

    def by_label(self, label: str) -> HypothesisResult:
        for r in self.results:
            if r.spec.label == label:
                return r
        raise KeyError(label)


def run_hypothesis_suite(rows: list[dict], seed: int = 0) -> SuiteResult:
    """Fit all 34 models, BH-adjust within each RQ, emit verdicts.

    Non-converged or unfittable models carry a conservative raw p of 1.0
    into the family adjustment (family sizes stay 6/12/4/12) and are marked
    inconclusive, never accepted.
    """
    specs = all_model_specs()
    results: list[HypothesisResult] = []
    null_cache: dict[tuple[str, str], float] = {}
    for spec in specs:
        res = HypothesisResult(spec)
        results.append(res)
        try:
            design = prepare_design(rows, spec)
        except DesignError as exc:
            res.note = str(exc)
            continue
        res.poisson_fit = fit_poisson(design)
        if res.poisson_fit.converged:
            try:
                res.dispersion_stat = dispersion_statistic(res.poisson_fit, design)
            except DispersionError:
                pass
        fit = fit_negbin_random_intercept(design)
        res.fit = fit
        if not fit.converged:
            res.note = f"fit not converged: {fit.message}".strip()
            continue
        key = (spec.dv, spec.population)
        if key not in null_cache:
            null_fit = fit_negbin_random_intercept(null_design(design))
            null_cache[key] = null_fit.ll if null_fit.converged else float("nan")
        res.null_ll = null_cache[key]
        res.p_raw = one_sided_p(fit, spec.iv, spec.direction)
        if math.isnan(res.p_raw):
            res.p_raw = 1.0
            res.note = "degenerate IV standard error"
            continue
        res.irr, res.ame = effect_sizes(fit, design, spec.iv)
        if math.isfinite(res.null_ll) and res.null_ll != 0:
            _, res.mcfadden = fit_quality(fit.ll, res.null_ll)
        res.status = REJECTED  # upgraded after BH below

    for rq in ("RQ1", "RQ2", "RQ3", "RQ4"):
        family = [r for r in results if r.spec.rq == rq]
        adjusted = bh_adjust([r.p_raw for r in family])
        for r, adj in zip(family, adjusted):
            r.p_bh = float(adj)
            if r.status == INCONCLUSIVE:
                continue
            beta_iv = r.fit.beta[r.fit.coef(r.spec.iv)]
            in_direction = (beta_iv > 0) if r.spec.direction > 0 else (beta_iv < 0)
            r.status = ACCEPTED if (in_direction and r.p_bh < ALPHA) else REJECTED

    verdicts = [
        HypothesisVerdict(r.spec.label, r.p_raw, r.p_bh, r.accepted, r.status) for r in results
    ]
    return SuiteResult(results, verdicts)


RESULTS_HEADER = [
    "hypothesis", "dv", "beta", "se", "ci_low", "ci_high", "p_raw", "p_bh",
    "irr", "ame", "ll", "mcfadden_r2", "dispersion_stat", "converged", "accepted",
]


def results_rows(suite: SuiteResult) -> list[list]:
    rows = []
    for r in suite.results:
        beta, se, lo, hi = r.iv_stats()
        rows.append([
            r.spec.hypothesis, r.spec.dv, beta, se, lo, hi, r.p_raw, r.p_bh,
            r.irr, r.ame, r.fit.ll if r.fit is not None else float("nan"),
            r.mcfadden, r.dispersion_stat, r.converged, r.accepted,
        ])
    return rows


def export_results_csv(suite: SuiteResult, path: str | Path) -> None:
    write_csv(path, RESULTS_HEADER, results_rows(suite))


def export_fits_json(suite: SuiteResult, path: str | Path, seed: int = 0, config_echo: dict | None = None) -> None:
    doc = {
        "alpha": ALPHA,
        "seed": seed,
        "config": config_echo or {},
        "fits": {},
    }
    for r in suite.results:
        entry: dict = {
            "hypothesis": r.spec.hypothesis,
            "dv": r.spec.dv,
            "rq": r.spec.rq,
            "iv": r.spec.iv,
            "cvs": list(r.spec.cvs),
            "population": r.spec.population,
            "status": r.status,
            "p_raw": r.p_raw,
            "p_bh": r.p_bh,
            "irr": r.irr,
            "ame": r.ame,
            "mcfadden_r2": r.mcfadden,
            "dispersion_stat": r.dispersion_stat,
            "null_ll": r.null_ll,
            "note": r.note,
        }
        if r.fit is not None:
            entry["fit"] = r.fit.to_dict()
        doc["fits"][r.spec.label] = entry
    write_json(path, doc)


def export_quantile_residuals(suite: SuiteResult, rows: list[dict], path: str | Path, seed: int = 0) -> None:
    """Randomized quantile residuals per model, for external QQ plotting."""
    out_rows: list[list] = []
    for r in suite.results:
        if r.fit is None or not r.fit.converged:
            continue
        try:
            design = prepare_design(rows, r.spec)
        except DesignError:
            continue
        resid = randomized_quantile_residuals(design.y, r.fit.mu_hat, r.fit.theta, seed)
        for idx, value in zip(design.row_index, resid):
            out_rows.append([r.spec.label, int(idx), float(value)])
    write_csv(path, ["hypothesis", "row", "quantile_residual"], out_rows)
