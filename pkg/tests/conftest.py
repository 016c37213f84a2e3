from pathlib import Path

import numpy as np
import pytest

from mcaw.dataset import CategoricalDataset, Variable

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def perfect_dataset() -> CategoricalDataset:
    """Two binary variables, perfectly associated (phi = 1)."""
    return CategoricalDataset(
        variables=(Variable("A", ("a1", "a2")), Variable("B", ("b1", "b2"))),
        codes=np.array([[0, 0], [0, 0], [1, 1], [1, 1]]),
    )


@pytest.fixture
def balanced_dataset() -> CategoricalDataset:
    """Two independent balanced binary variables (phi = 0)."""
    return CategoricalDataset(
        variables=(Variable("A", ("a1", "a2")), Variable("B", ("b1", "b2"))),
        codes=np.array([[0, 0], [0, 1], [1, 0], [1, 1]]),
    )


def assert_coords_match_up_to_ties(eigenvalues, coords_a, coords_b,
                                   tol=1e-9, gap=1e-8):
    """Compare coordinate matrices axis by axis, tolerating tied eigenvalues.

    Within a block of (numerically) equal eigenvalues the axis basis is
    only defined up to rotation, so blocks are compared through their
    rotation-invariant Gram matrices W W^T.
    """
    lam = np.asarray(eigenvalues)
    k = 0
    while k < len(lam):
        j = k + 1
        while j < len(lam) and abs(lam[j] - lam[k]) <= gap * max(lam[k], 1e-30):
            j += 1
        block_a = coords_a[:, k:j]
        block_b = coords_b[:, k:j]
        if j - k == 1:
            assert np.abs(block_a - block_b).max() < tol
        else:
            gram_a = block_a @ block_a.T
            gram_b = block_b @ block_b.T
            assert np.abs(gram_a - gram_b).max() < tol
        k = j


def make_random_dataset(rng: np.random.Generator, n: int, n_vars: int,
                        max_cats: int = 4) -> CategoricalDataset:
    """Random dataset where every variable has >= 2 observed categories."""
    variables = []
    codes = np.empty((n, n_vars), dtype=int)
    for q in range(n_vars):
        n_cats = int(rng.integers(2, max_cats + 1))
        col = rng.integers(0, n_cats, size=n)
        # Force every category to appear at least once.
        col[:n_cats] = np.arange(n_cats)
        rng.shuffle(col)
        codes[:, q] = col
        variables.append(
            Variable(f"v{q}", tuple(f"c{j}" for j in range(n_cats)))
        )
    return CategoricalDataset(variables=tuple(variables), codes=codes)
