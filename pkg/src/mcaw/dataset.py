"""Analysis-ready categorical datasets and descriptive tables.

Builds the n x Q category-coded matrix the decomposition consumes:
age is binned into intervals, rows are filtered, unobserved categories
are pruned, and every transformation is recorded in a provenance trail.
Also houses the frequency / rate / proportion-estimate tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from .errors import DatasetError, EmptyDatasetError
from .ingest import RawTable, is_missing

MISSING_LABEL = "(missing)"


@dataclass(frozen=True)
class Variable:
    name: str
    labels: tuple[str, ...]


@dataclass(frozen=True)
class CategoricalDataset:
    """n individuals by Q categorical variables, category-coded.

    ``codes[i, q]`` indexes into ``variables[q].labels``.  Every listed
    category is observed at least once; immutable after construction.
    """

    variables: tuple[Variable, ...]
    codes: np.ndarray  # (n, Q) int
    provenance: tuple[str, ...] = ()

    def __post_init__(self):
        codes = np.asarray(self.codes, dtype=int)
        object.__setattr__(self, "codes", codes)
        if codes.ndim != 2 or codes.shape[1] != len(self.variables):
            raise DatasetError("codes must be n x Q with one column per variable")
        if codes.shape[0] < 1 or codes.shape[1] < 1:
            raise DatasetError("need n >= 1 and Q >= 1")
        for q, var in enumerate(self.variables):
            col = codes[:, q]
            if col.min() < 0 or col.max() >= len(var.labels):
                raise DatasetError(f"variable {var.name!r}: code out of range")
        self.codes.setflags(write=False)

    @property
    def n(self) -> int:
        return self.codes.shape[0]

    @property
    def n_variables(self) -> int:
        return len(self.variables)

    @property
    def n_categories(self) -> int:
        return sum(len(v.labels) for v in self.variables)

    def variable_index(self, name: str) -> int:
        for q, var in enumerate(self.variables):
            if var.name == name:
                return q
        raise DatasetError(f"unknown variable {name!r}")

    def counts(self, name: str) -> np.ndarray:
        q = self.variable_index(name)
        return np.bincount(self.codes[:, q], minlength=len(self.variables[q].labels))


@dataclass(frozen=True)
class FrequencyTable:
    variable: str
    labels: tuple[str, ...]
    counts: tuple[int, ...]
    proportions: tuple[float, ...]
    n: int


@dataclass(frozen=True)
class RateTable:
    variable: str
    labels: tuple[str, ...]
    counts: tuple[int, ...]
    percentages: tuple[float, ...]
    n: int


@dataclass(frozen=True)
class ProportionEstimate:
    count: int
    n: int
    estimate: float
    level: float
    lo: float
    hi: float


def bin_age(age: int, breaks: Sequence[float]) -> str:
    """Map an age to its interval label under the left-closed convention.

    Intervals are "[b_i, b_{i+1})" except the last, which is closed:
    "[b_{m-1}, b_m]".  Ages outside [b_0, b_m] raise DatasetError.
    """
    breaks = list(breaks)
    if len(breaks) < 2:
        raise DatasetError("need at least two break points")
    if any(breaks[i] >= breaks[i + 1] for i in range(len(breaks) - 1)):
        raise DatasetError("breaks must be strictly ascending")
    if age < breaks[0] or age > breaks[-1]:
        raise DatasetError(f"age {age} outside [{breaks[0]}, {breaks[-1]}]")
    if age == breaks[-1]:
        return _interval_label(breaks, len(breaks) - 2)
    for i in range(len(breaks) - 1):
        if breaks[i] <= age < breaks[i + 1]:
            return _interval_label(breaks, i)
    raise AssertionError("unreachable: intervals partition the range")


def _fmt_break(b) -> str:
    return str(int(b)) if float(b).is_integer() else str(b)


def _interval_label(breaks: Sequence[float], i: int) -> str:
    lo, hi = _fmt_break(breaks[i]), _fmt_break(breaks[i + 1])
    closer = "]" if i == len(breaks) - 2 else ")"
    return f"[{lo},{hi}{closer}"


DEFAULT_AGE_BREAKS = (0, 18, 30, 40, 50, 60, 130)


def from_raw(raw: RawTable, active: Sequence[str],
             age_breaks: Optional[Sequence[float]] = None,
             missing_policy: str = "drop-row") -> CategoricalDataset:
    """Build a CategoricalDataset from the active columns of a RawTable.

    Integer columns are always binned through ``age_breaks`` (never used
    raw).  Missing cells either drop the row or become a "(missing)"
    category, per ``missing_policy``.  Category order follows the
    dictionary's allowed_values when declared, first appearance otherwise.
    """
    if missing_policy not in ("drop-row", "missing-level"):
        raise DatasetError(f"unknown missing policy {missing_policy!r}")
    if not active:
        raise DatasetError("no active variables")
    specs = []
    for name in active:
        try:
            specs.append(raw.dictionary.column(name))
        except KeyError:
            raise DatasetError(f"active column {name!r} not in dictionary") from None
    for spec in specs:
        if spec.kind == "integer" and age_breaks is None:
            raise DatasetError(
                f"integer column {spec.name!r} requires age_breaks for binning"
            )

    # Per-row string values after binning; None marks missing/unbinnable.
    values_by_row: list[Optional[list[str]]] = []
    for row in raw.rows:
        values: Optional[list[str]] = []
        for spec in specs:
            cell = row[spec.name]
            out: Optional[str]
            if is_missing(cell):
                out = None
            elif spec.kind == "integer":
                try:
                    out = bin_age(int(cell), age_breaks)
                except DatasetError:
                    out = None  # out-of-range maps to missing
            else:
                out = cell
            if out is None:
                if missing_policy == "drop-row":
                    values = None
                    break
                out = MISSING_LABEL
            values.append(out)
        values_by_row.append(values)

    kept = [v for v in values_by_row if v is not None]
    if not kept:
        raise EmptyDatasetError("no rows left after applying missing policy")

    variables = []
    codes = np.empty((len(kept), len(specs)), dtype=int)
    for q, spec in enumerate(specs):
        observed = [row[q] for row in kept]
        order: list[str] = []
        if spec.kind == "categorical" and spec.allowed_values is not None:
            order = [lab for lab in spec.allowed_values if lab in set(observed)]
        seen = set(order)
        for lab in observed:
            if lab not in seen:
                order.append(lab)
                seen.add(lab)
        index = {lab: i for i, lab in enumerate(order)}
        codes[:, q] = [index[lab] for lab in observed]
        if len(order) < 2:
            raise DatasetError(
                f"variable {spec.name!r} has {len(order)} observed category; "
                "MCA needs at least 2"
            )
        variables.append(Variable(name=spec.name, labels=tuple(order)))

    provenance = (
        f"from_raw(active={list(active)}, missing_policy={missing_policy}, "
        f"age_breaks={list(age_breaks) if age_breaks is not None else None}); "
        f"kept {len(kept)}/{raw.n_rows} rows",
    )
    return CategoricalDataset(variables=tuple(variables), codes=codes,
                              provenance=provenance)


def filter_rows(ds, variable: str, keep: set):
    """Keep only rows whose value for ``variable`` is in ``keep``.

    Works on both CategoricalDataset and RawTable; category lists are
    re-pruned and a provenance entry appended (datasets only).
    """
    keep = set(keep)
    if isinstance(ds, RawTable):
        if variable not in ds.dictionary.names:
            raise DatasetError(f"unknown variable {variable!r}")
        rows = tuple(r for r in ds.rows if r[variable] in keep)
        if not rows:
            raise EmptyDatasetError(f"filter on {variable!r} left no rows")
        return RawTable(dictionary=ds.dictionary, rows=rows)

    q = ds.variable_index(variable)
    var = ds.variables[q]
    keep_codes = {i for i, lab in enumerate(var.labels) if lab in keep}
    mask = np.isin(ds.codes[:, q], sorted(keep_codes))
    if not mask.any():
        raise EmptyDatasetError(f"filter on {variable!r} left no rows")
    codes = ds.codes[mask]

    # Re-prune: drop categories no longer observed, remap codes.
    variables = []
    new_codes = np.empty_like(codes)
    for qq, v in enumerate(ds.variables):
        observed = np.unique(codes[:, qq])
        remap = {old: new for new, old in enumerate(observed)}
        new_codes[:, qq] = [remap[c] for c in codes[:, qq]]
        variables.append(Variable(name=v.name,
                                  labels=tuple(v.labels[o] for o in observed)))
    provenance = ds.provenance + (
        f"filter_rows({variable}={sorted(keep)}); kept {int(mask.sum())}/{ds.n} rows",
    )
    return CategoricalDataset(variables=tuple(variables), codes=new_codes,
                              provenance=provenance)


def frequency_table(ds: CategoricalDataset, variable: str) -> FrequencyTable:
    q = ds.variable_index(variable)
    counts = ds.counts(variable)
    return FrequencyTable(
        variable=variable,
        labels=ds.variables[q].labels,
        counts=tuple(int(c) for c in counts),
        proportions=tuple(float(c) / ds.n for c in counts),
        n=ds.n,
    )


def round_half_away(value: float, decimals: int) -> float:
    """Round half away from zero (2.835 -> 2.84 at 2 dp), platform-stable."""
    scale = 10 ** decimals
    return math.copysign(math.floor(abs(value) * scale + 0.5), value) / scale


def rate_by_group(ds: CategoricalDataset, variable: str,
                  decimals: int = 2) -> RateTable:
    """Vaccination-rate style table: counts and rounded percentages."""
    q = ds.variable_index(variable)
    counts = ds.counts(variable)
    return RateTable(
        variable=variable,
        labels=ds.variables[q].labels,
        counts=tuple(int(c) for c in counts),
        percentages=tuple(round_half_away(100.0 * c / ds.n, decimals) for c in counts),
        n=ds.n,
    )


def proportion_ci(count: int, n: int, level: float = 0.95) -> ProportionEstimate:
    """Wilson score interval for a binomial proportion."""
    if not 0 < level < 1:
        raise DatasetError("confidence level must be in (0, 1)")
    if n < 1:
        raise DatasetError("n must be positive")
    if count < 0 or count > n:
        raise DatasetError(f"count {count} outside [0, {n}]")
    z = stats.norm.ppf(0.5 + level / 2)
    p = count / n
    denom = 1 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    # Analytic boundaries (the formula hits them exactly; avoid FP dust).
    lo = 0.0 if count == 0 else max(0.0, float(center - half))
    hi = 1.0 if count == n else min(1.0, float(center + half))
    return ProportionEstimate(count=count, n=n, estimate=p, level=level,
                              lo=lo, hi=hi)
