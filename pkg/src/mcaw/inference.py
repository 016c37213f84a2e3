"""Dimension descriptions and group confidence ellipses.

Dimension description ranks variables by their squared correlation ratio
with an axis (one-way ANOVA F-test) and categories by their mean axis
coordinate (t-test against the centered grand mean of 0, pooled within
variance).  Estimates follow the sum-to-zero convention: within each
variable the count-weighted category estimates sum to 0.

F and t tail probabilities go through the regularized incomplete beta
function directly; a reported "p value of 0" renders as "< 1e-16".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import special, stats

from .dataset import CategoricalDataset
from .errors import DegenerateError
from .mca import McaModel


@dataclass(frozen=True)
class VariableRow:
    name: str
    eta2: float
    p_value: float


@dataclass(frozen=True)
class CategoryRow:
    label: str
    estimate: float
    p_value: float


@dataclass(frozen=True)
class DimensionDescription:
    axis: int
    variables: tuple[VariableRow, ...]
    categories: tuple[CategoryRow, ...]


@dataclass(frozen=True)
class EllipseSpec:
    label: str
    center: tuple[float, float]
    semi_major: float
    semi_minor: float
    angle: float  # radians, in (-pi/2, pi/2]
    level: float
    kind: str
    member_count: int
    degenerate: bool = False


def f_sf(f_stat: float, df1: int, df2: int) -> float:
    """Upper tail of the F distribution via the incomplete beta function."""
    if f_stat <= 0:
        return 1.0
    x = df2 / (df2 + df1 * f_stat)
    return float(special.betainc(df2 / 2.0, df1 / 2.0, x))


def t_sf2(t_stat: float, df: int) -> float:
    """Two-sided tail of the t distribution via the incomplete beta function."""
    x = df / (df + t_stat * t_stat)
    return float(special.betainc(df / 2.0, 0.5, x))


def describe_dimension(model: McaModel, ds: CategoricalDataset, axis: int,
                       p_threshold: float = 1.0) -> DimensionDescription:
    """Statistical description of one axis, sorted by ascending p-value.

    Only entries with p <= p_threshold are included (threshold 1 keeps
    everything).  The dataset must be the one the model was fitted on.
    """
    if ds.n != model.n:
        raise DegenerateError(
            f"dataset has {ds.n} rows but model was fitted on {model.n}"
        )
    if not 1 <= axis <= model.n_dims:
        raise DegenerateError(f"axis {axis} out of range (1..{model.n_dims})")

    f = model.row_coords[:, axis - 1]
    n = model.n
    ss_total = float(np.sum(f ** 2))  # grand mean is 0 by centering

    var_rows = []
    cat_rows = []
    for q, var in enumerate(ds.variables):
        codes = ds.codes[:, q]
        jq = len(var.labels)
        counts = np.bincount(codes, minlength=jq)
        sums = np.bincount(codes, weights=f, minlength=jq)
        means = sums / counts
        ss_between = float(np.sum(counts * means ** 2))
        ss_within = ss_total - ss_between
        eta2 = ss_between / ss_total
        df1, df2 = jq - 1, n - jq
        if df2 <= 0 or ss_within <= 0:
            p_var = 0.0 if ss_between > 0 else 1.0
            s2_pooled = 0.0
        else:
            f_stat = (ss_between / df1) / (ss_within / df2)
            p_var = f_sf(f_stat, df1, df2)
            s2_pooled = ss_within / df2
        var_rows.append(VariableRow(name=var.name, eta2=eta2, p_value=p_var))

        for j, label in enumerate(var.labels):
            est = float(means[j])
            if s2_pooled <= 0:
                p_cat = 0.0 if abs(est) > 0 else 1.0
            else:
                t_stat = est / math.sqrt(s2_pooled / counts[j])
                p_cat = t_sf2(t_stat, df2)
            cat_rows.append(
                CategoryRow(label=f"{var.name}::{label}", estimate=est, p_value=p_cat)
            )

    var_rows = [r for r in var_rows if r.p_value <= p_threshold]
    cat_rows = [r for r in cat_rows if r.p_value <= p_threshold]
    var_rows.sort(key=lambda r: (r.p_value, r.name))
    cat_rows.sort(key=lambda r: (r.p_value, r.label))
    return DimensionDescription(axis=axis, variables=tuple(var_rows),
                                categories=tuple(cat_rows))


def format_p(p: float) -> str:
    return "< 1e-16" if p < 1e-16 else f"{p:.6g}"


def ellipse_from_points(points: np.ndarray, label: str, level: float = 0.95,
                        kind: str = "mean") -> EllipseSpec:
    """Confidence ellipse for a 2-column cloud of member points.

    ``kind="mean"`` scales the sample covariance by 1/m (barycenter
    confidence); ``kind="observation"`` uses it as is.  Semi-axes are
    sqrt of the chi-square(2) quantile at ``level`` times the covariance
    eigenvalues; the orientation angle lies in (-pi/2, pi/2].
    """
    points = np.asarray(points, dtype=float)
    m = points.shape[0]
    if m < 3 or points.shape[1] != 2:
        raise DegenerateError("ellipse needs >= 3 two-dimensional points")
    quantile = stats.chi2.ppf(level, df=2)
    center = points.mean(axis=0)
    cov = np.cov(points, rowvar=False)
    if kind == "mean":
        cov = cov / m
    evals, evecs = np.linalg.eigh(cov)
    evals = np.clip(evals, 0.0, None)
    # Coincident points leave numerical dust in the covariance; treat
    # spread below 1e-9 of the data scale as exactly degenerate.
    scale = max(float(np.abs(points).max()), 1.0)
    tiny = (1e-9 * scale) ** 2
    evals[evals <= tiny] = 0.0
    # eigh returns ascending order; major axis last.
    a = math.sqrt(quantile * evals[1])
    b = math.sqrt(quantile * evals[0])
    degenerate = bool(evals[1] <= 0)
    if degenerate:
        angle = 0.0
    else:
        vx, vy = evecs[:, 1]
        angle = math.atan2(vy, vx)
        if angle <= -math.pi / 2:
            angle += math.pi
        elif angle > math.pi / 2:
            angle -= math.pi
    return EllipseSpec(
        label=label, center=(float(center[0]), float(center[1])),
        semi_major=a, semi_minor=b, angle=angle, level=level,
        kind=kind, member_count=m, degenerate=degenerate,
    )


def group_ellipse(model: McaModel, ds: CategoricalDataset, group_variable: str,
                  axes: Sequence[int] = (1, 2), level: float = 0.95,
                  kind: str = "mean") -> tuple[list[EllipseSpec], list[str]]:
    """Confidence ellipses for each category of a grouping variable.

    Groups with fewer than 3 members are skipped with a warning entry
    rather than failing.
    """
    if kind not in ("mean", "observation"):
        raise DegenerateError(f"unknown ellipse kind {kind!r}")
    if not 0 < level < 1:
        raise DegenerateError("confidence level must be in (0, 1)")
    if ds.n != model.n:
        raise DegenerateError("dataset/model mismatch")
    ax1, ax2 = axes
    for a in (ax1, ax2):
        if not 1 <= a <= model.n_dims:
            raise DegenerateError(f"axis {a} out of range (1..{model.n_dims})")
    q = ds.variable_index(group_variable)
    coords = model.row_coords[:, [ax1 - 1, ax2 - 1]]

    ellipses = []
    warnings = []
    for j, label in enumerate(ds.variables[q].labels):
        member = coords[ds.codes[:, q] == j]
        if member.shape[0] < 3:
            warnings.append(
                f"group {label!r}: only {member.shape[0]} member(s), "
                "ellipse needs >= 3"
            )
            continue
        ellipses.append(ellipse_from_points(member, label, level, kind))
    return ellipses, warnings
