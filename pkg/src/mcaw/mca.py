"""Multiple correspondence analysis via SVD of the standardized residuals.

The decomposition runs on the n x J indicator (disjunctive) matrix:

    P = Z / (nQ)
    S = D_r^{-1/2} (P - r c^T) D_c^{-1/2},   r_i = 1/n,  c_j = n_j / (nQ)
    S = U Sigma V^T

Principal coordinates are F = D_r^{-1/2} U Sigma (individuals) and
G = D_c^{-1/2} V Sigma (categories); eigenvalues are the squared singular
values and sum to the total inertia (J - Q) / Q at full rank.

The Burt matrix Z^T Z is provided only as an independent cross-check:
the correspondence analysis of the Burt table has eigenvalues equal to
the squares of the indicator-route eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .dataset import CategoricalDataset
from .errors import DegenerateError

DEFAULT_RANK_TOL = 1e-12


@dataclass(frozen=True)
class IndicatorMatrix:
    """Disjunctive coding of a dataset: every row of Z sums to Q."""

    Z: np.ndarray  # (n, J) of 0/1
    category_counts: np.ndarray  # n_j per category, length J
    column_variable: tuple[int, ...]  # column j -> variable index
    column_labels: tuple[str, ...]  # "variable::label" per column
    n_variables: int

    @property
    def n(self) -> int:
        return self.Z.shape[0]

    @property
    def n_categories(self) -> int:
        return self.Z.shape[1]


def indicator_matrix(ds: CategoricalDataset) -> IndicatorMatrix:
    if ds.n < 2:
        raise DegenerateError("need at least 2 individuals")
    offsets = []
    offset = 0
    for var in ds.variables:
        if len(var.labels) < 2:
            raise DegenerateError(
                f"variable {var.name!r} has a single category (zero-variance block)"
            )
        offsets.append(offset)
        offset += len(var.labels)
    J = offset
    Z = np.zeros((ds.n, J))
    col_var = []
    col_labels = []
    for q, var in enumerate(ds.variables):
        Z[np.arange(ds.n), offsets[q] + ds.codes[:, q]] = 1.0
        col_var.extend([q] * len(var.labels))
        col_labels.extend(f"{var.name}::{lab}" for lab in var.labels)
    counts = Z.sum(axis=0)
    return IndicatorMatrix(
        Z=Z,
        category_counts=counts,
        column_variable=tuple(col_var),
        column_labels=tuple(col_labels),
        n_variables=ds.n_variables,
    )


def burt_matrix(ind: IndicatorMatrix) -> np.ndarray:
    """J x J Burt matrix Z^T Z (all pairwise contingency tables)."""
    return ind.Z.T @ ind.Z


@dataclass(frozen=True)
class McaModel:
    n: int
    n_variables: int  # Q
    n_categories: int  # J
    category_labels: tuple[str, ...]
    variable_names: tuple[str, ...]
    column_variable: tuple[int, ...]
    category_counts: np.ndarray  # n_j
    col_masses: np.ndarray  # c_j = n_j / (nQ)
    singular_values: np.ndarray  # sigma_k, descending, retained
    eigenvalues: np.ndarray  # lambda_k = sigma_k^2
    total_inertia: float  # (J - Q) / Q
    row_coords: np.ndarray  # F, (n, K)
    col_coords: np.ndarray  # G, (J, K)
    row_cos2: np.ndarray
    col_cos2: np.ndarray
    row_contributions: np.ndarray
    col_contributions: np.ndarray
    eta2: np.ndarray  # (Q, K) squared correlation ratios
    rank_tol: float

    @property
    def n_dims(self) -> int:
        return len(self.eigenvalues)

    @property
    def row_masses(self) -> np.ndarray:
        return np.full(self.n, 1.0 / self.n)


def fit_mca(ds: CategoricalDataset, n_dims: Optional[int] = None,
            rank_tol: float = DEFAULT_RANK_TOL) -> McaModel:
    """Fit MCA on a dataset; returns an immutable fitted model.

    ``n_dims`` caps the retained axes (default: all nontrivial ones);
    singular values below ``rank_tol`` relative to the largest are
    discarded as numerically trivial.  Each axis is oriented so that the
    category coordinate of largest absolute value is positive (ties break
    toward the lowest category index).
    """
    if n_dims is not None and n_dims < 1:
        raise DegenerateError("n_dims must be >= 1")
    ind = indicator_matrix(ds)
    n, J = ind.Z.shape
    Q = ind.n_variables

    P = ind.Z / (n * Q)
    r = np.full(n, 1.0 / n)
    c = ind.category_counts / (n * Q)
    S = (P - np.outer(r, c)) / np.sqrt(np.outer(r, c))

    U, sigma, Vt = np.linalg.svd(S, full_matrices=False)
    V = Vt.T

    keep = sigma >= rank_tol * sigma[0]
    # Structural cap: at most J - Q nontrivial axes exist.
    keep[J - Q:] = False
    U, sigma, V = U[:, keep], sigma[keep], V[:, keep]

    F = U * sigma / np.sqrt(r)[:, None]
    G = V * sigma / np.sqrt(c)[:, None]

    # Deterministic orientation per axis: largest |G| positive, ties
    # (within FP noise) broken toward the lowest category index.
    for k in range(G.shape[1]):
        mags = np.abs(G[:, k])
        top = mags.max()
        j = int(np.flatnonzero(mags >= top * (1 - 1e-9))[0])
        if G[j, k] < 0:
            G[:, k] = -G[:, k]
            F[:, k] = -F[:, k]

    lam = sigma ** 2

    # Exact chi-square distances to the centroid (full formula, so cos2
    # survives truncation of the retained axes).
    row_d2 = np.sum((ind.Z / Q - c) ** 2 / c, axis=1)
    col_profiles = P / c  # (n, J): p_ij / c_j
    col_d2 = np.sum((col_profiles - r[:, None]) ** 2 / r[:, None], axis=0)

    K = len(lam)
    if n_dims is not None and n_dims < K:
        K = n_dims
        sigma, lam, F, G = sigma[:K], lam[:K], F[:, :K], G[:, :K]

    with np.errstate(invalid="ignore", divide="ignore"):
        row_cos2 = F ** 2 / row_d2[:, None]
        col_cos2 = G ** 2 / col_d2[:, None]
    row_cos2 = np.nan_to_num(row_cos2)
    col_cos2 = np.nan_to_num(col_cos2)

    row_ctr = (1.0 / n) * F ** 2 / lam
    col_ctr = c[:, None] * G ** 2 / lam

    col_var = np.array(ind.column_variable)
    eta2 = np.empty((Q, K))
    for q in range(Q):
        cols = col_var == q
        # Between-category SS / total SS; category means come from the
        # transition formula mean_{i in j} F_ik = sigma_k G_jk.
        nj = ind.category_counts[cols]
        means = sigma * G[cols, :]
        eta2[q] = (nj[:, None] * means ** 2).sum(axis=0) / (n * lam)

    return McaModel(
        n=n,
        n_variables=Q,
        n_categories=J,
        category_labels=ind.column_labels,
        variable_names=tuple(v.name for v in ds.variables),
        column_variable=ind.column_variable,
        category_counts=ind.category_counts,
        col_masses=c,
        singular_values=sigma,
        eigenvalues=lam,
        total_inertia=(J - Q) / Q,
        row_coords=F,
        col_coords=G,
        row_cos2=row_cos2,
        col_cos2=col_cos2,
        row_contributions=row_ctr,
        col_contributions=col_ctr,
        eta2=eta2,
        rank_tol=rank_tol,
    )


def eigenvalue_table(model: McaModel) -> list[dict]:
    """Rows of (dim, eigenvalue, percent of variance, cumulative percent)."""
    total = model.eigenvalues.sum()
    rows = []
    cumulative = 0.0
    for k, lam in enumerate(model.eigenvalues, start=1):
        percent = 100.0 * lam / total
        cumulative += percent
        rows.append({"dim": k, "eigenvalue": float(lam),
                     "percent": float(percent), "cumulative": float(cumulative)})
    return rows


def _check_dims(model: McaModel, dims: Sequence[int]) -> list[int]:
    out = []
    for d in dims:
        if not 1 <= d <= model.n_dims:
            raise DegenerateError(f"axis {d} out of range (1..{model.n_dims})")
        out.append(d - 1)
    return out


def coordinates(model: McaModel, target: str,
                dims: Optional[Sequence[int]] = None):
    """(labels, values) for category or individual principal coordinates."""
    dims = _check_dims(model, dims or range(1, model.n_dims + 1))
    if target == "categories":
        return list(model.category_labels), model.col_coords[:, dims]
    if target == "individuals":
        return [str(i) for i in range(model.n)], model.row_coords[:, dims]
    raise DegenerateError(f"unknown target {target!r}")


def cos2(model: McaModel, target: str, dims: Optional[Sequence[int]] = None):
    """Per-axis squared cosines; callers sum across a dim subset."""
    dims = _check_dims(model, dims or range(1, model.n_dims + 1))
    if target == "categories":
        return list(model.category_labels), model.col_cos2[:, dims]
    if target == "individuals":
        return [str(i) for i in range(model.n)], model.row_cos2[:, dims]
    raise DegenerateError(f"unknown target {target!r}")


def contributions(model: McaModel, target: str):
    """Per-axis contributions; each axis column sums to 1."""
    if target == "categories":
        return list(model.category_labels), model.col_contributions
    if target == "individuals":
        return [str(i) for i in range(model.n)], model.row_contributions
    raise DegenerateError(f"unknown target {target!r}")


def variable_eta2(model: McaModel):
    """(variable names, Q x K squared correlation ratios)."""
    return list(model.variable_names), model.eta2


def adjust_eigenvalues(eigenvalues: Sequence[float], n_variables: int,
                       mode: str = "none") -> list[dict]:
    """Benzecri / Greenacre corrected inertia table.

    Both corrections keep only axes with eigenvalue above 1/Q and rescale
    them by (Q/(Q-1))^2 (lambda - 1/Q)^2; they differ in the denominator
    used for percents.  Greenacre expects the full nontrivial eigenvalue
    list (its adjusted total is computed from it).
    """
    lam = np.asarray(eigenvalues, dtype=float)
    if np.any(np.diff(lam) > 1e-12):
        raise DegenerateError("eigenvalues must be descending")
    Q = n_variables
    if mode == "none":
        total = lam.sum()
        adjusted = lam
    elif mode in ("benzecri", "greenacre"):
        if Q < 2:
            raise DegenerateError("corrections need at least 2 variables")
        keep = lam > 1.0 / Q
        adjusted = (Q / (Q - 1.0)) ** 2 * (lam[keep] - 1.0 / Q) ** 2
        if mode == "benzecri":
            total = adjusted.sum()
        else:
            # (J - Q) / Q^2 equals (sum lambda) / Q at full rank.
            total = (Q / (Q - 1.0)) * (np.sum(lam ** 2) - lam.sum() / Q)
    else:
        raise DegenerateError(f"unknown correction mode {mode!r}")

    rows = []
    cumulative = 0.0
    for k, val in enumerate(adjusted, start=1):
        percent = 100.0 * val / total if total > 0 else 0.0
        cumulative += percent
        rows.append({"dim": k, "eigenvalue": float(val),
                     "percent": float(percent), "cumulative": float(cumulative)})
    return rows


def project_supplementary(model: McaModel, membership: Sequence[int]) -> np.ndarray:
    """Project a 0/1 membership column onto the fitted axes.

    Coordinates are the barycenter of the member individuals in standard
    coordinates: g_k = (1/sigma_k) mean_{i in members} F_ik.  An active
    category's own indicator reproduces its G row.
    """
    member = np.asarray(membership)
    if member.shape != (model.n,):
        raise DegenerateError(f"membership must have length {model.n}")
    if not np.isin(member, (0, 1)).all():
        raise DegenerateError("membership must be a 0/1 vector")
    n_sup = member.sum()
    if n_sup == 0:
        raise DegenerateError("membership selects no individuals")
    mean_f = model.row_coords[member == 1].mean(axis=0)
    return mean_f / model.singular_values
