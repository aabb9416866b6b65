"""Hypothesis table and design-matrix preparation.

Seventeen hypotheses over four research questions, each evaluated against
both stability outcomes (ChF, ChS) -- 34 models, BH families of 6/12/4/12
per research question.  Count-based predictors are log(1+x)-transformed;
binary flags enter untransformed.  Every alternative hypothesis predicts
lower stability, i.e. higher counts, so the predicted coefficient sign is
positive throughout (encoded in the table, not assumed downstream).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DVS = ("ChF", "ChS")
BASE_CVS = ("ClSize", "#EffNei")

LOG_TRANSFORMED = frozenset(
    {"ClSize", "#EffNei", "#SmellFoc", "#SmellEff", "VarSmellFoc", "VarSmellEff",
     "#EffSmellInt", "EffIntInten"}
)
BINARY = frozenset({"IsSmelly", "HasSmellEff", "HasEffCoup", "HasEffInt"})

POP_ALL = "all"
POP_NON_SMELLY = "non_smelly"


@dataclass(frozen=True)
class ModelSpec:
    hypothesis: str  # e.g. "H1.2"
    rq: str  # "RQ1".."RQ4"
    dv: str  # "ChF" | "ChS"
    iv: str
    cvs: tuple[str, ...]
    population: str
    direction: int = +1  # predicted sign of the IV coefficient

    @property
    def label(self) -> str:
        return f"{self.hypothesis}:{self.dv}"


_HYPOTHESES: list[tuple[str, str, str, tuple[str, ...], str]] = [
    ("H1.1", "RQ1", "IsSmelly", BASE_CVS, POP_ALL),
    ("H1.2", "RQ1", "#SmellFoc", BASE_CVS, POP_ALL),
    ("H1.3", "RQ1", "VarSmellFoc", BASE_CVS, POP_ALL),
    ("H2.1", "RQ2", "HasSmellEff", BASE_CVS, POP_ALL),
    ("H2.2", "RQ2", "#SmellEff", BASE_CVS, POP_ALL),
    ("H2.3", "RQ2", "VarSmellEff", BASE_CVS, POP_ALL),
    ("H2.4", "RQ2", "HasSmellEff", BASE_CVS, POP_NON_SMELLY),
    ("H2.5", "RQ2", "#SmellEff", BASE_CVS, POP_NON_SMELLY),
    ("H2.6", "RQ2", "VarSmellEff", BASE_CVS, POP_NON_SMELLY),
    ("H3.1", "RQ3", "HasEffCoup", BASE_CVS, POP_ALL),
    ("H3.2", "RQ3", "HasEffCoup", BASE_CVS + ("IsSmelly", "HasSmellEff"), POP_ALL),
    ("H4.1", "RQ4", "HasEffInt", BASE_CVS, POP_ALL),
    ("H4.2", "RQ4", "#EffSmellInt", BASE_CVS, POP_ALL),
    ("H4.3", "RQ4", "EffIntInten", BASE_CVS, POP_ALL),
    ("H4.4", "RQ4", "HasEffInt", BASE_CVS + ("#SmellFoc", "#SmellEff"), POP_ALL),
    ("H4.5", "RQ4", "#EffSmellInt", BASE_CVS + ("#SmellFoc", "#SmellEff"), POP_ALL),
    ("H4.6", "RQ4", "EffIntInten", BASE_CVS + ("#SmellFoc", "#SmellEff"), POP_ALL),
]
# H3.2 carries extra controls; H4.4-H4.6 likewise (held-constant variants).

FAMILY_SIZES = {"RQ1": 6, "RQ2": 12, "RQ3": 4, "RQ4": 12}


def all_model_specs() -> list[ModelSpec]:
    specs = []
    for hyp, rq, iv, cvs, pop in _HYPOTHESES:
        for dv in DVS:
            specs.append(ModelSpec(hyp, rq, dv, iv, cvs, pop))
    assert len(specs) == 34
    counts: dict[str, int] = {}
    for s in specs:
        counts[s.rq] = counts.get(s.rq, 0) + 1
    assert counts == FAMILY_SIZES
    return specs


class DesignError(ValueError):
    pass


@dataclass
class DesignMatrix:
    y: np.ndarray  # counts
    X: np.ndarray  # intercept + iv + cvs, transformed
    names: list[str]  # column names, "Intercept" first
    groups: np.ndarray  # dense project codes, one per row
    n_groups: int
    project_labels: list[str]
    row_index: np.ndarray  # indices into the source dataset


def _as_float(column: str, values: list) -> np.ndarray:
    if column in BINARY:
        out = np.array([1.0 if str(v).lower() in ("true", "1") else 0.0 for v in values])
        return out
    return np.array([float(v) for v in values], dtype=float)


def prepare_design(rows: list[dict], spec: ModelSpec) -> DesignMatrix:
    """Build the design matrix for one model spec from joined dataset rows."""
    if spec.population == POP_NON_SMELLY:
        keep = [i for i, r in enumerate(rows) if str(r["IsSmelly"]).lower() not in ("true", "1")]
    else:
        keep = list(range(len(rows)))
    if not keep:
        raise DesignError(f"{spec.label}: empty population {spec.population!r}")
    sub = [rows[i] for i in keep]
    y = np.array([float(r[spec.dv]) for r in sub])
    if np.any(y < 0) or np.any(y != np.floor(y)):
        raise DesignError(f"{spec.label}: response {spec.dv} must be non-negative integers")
    columns = [spec.iv, *spec.cvs]
    mats = [np.ones(len(sub))]
    for col in columns:
        v = _as_float(col, [r[col] for r in sub])
        if col in LOG_TRANSFORMED:
            v = np.log1p(v)
        mats.append(v)
    X = np.column_stack(mats)
    projects = [str(r["project"]) for r in sub]
    labels = sorted(set(projects))
    code = {p: i for i, p in enumerate(labels)}
    groups = np.array([code[p] for p in projects], dtype=np.int64)
    return DesignMatrix(
        y=y,
        X=X,
        names=["Intercept", *columns],
        groups=groups,
        n_groups=len(labels),
        project_labels=labels,
        row_index=np.array(keep, dtype=np.int64),
    )


def null_design(design: DesignMatrix) -> DesignMatrix:
    """Intercept-only design on the same rows (same grouping)."""
    return DesignMatrix(
        y=design.y,
        X=design.X[:, :1],
        names=["Intercept"],
        groups=design.groups,
        n_groups=design.n_groups,
        project_labels=design.project_labels,
        row_index=design.row_index,
    )
