"""Two-sided multiresolution factorization of arbitrary square matrices.

A ~ P_1 ... P_L H Q_L^T ... Q_1^T with independent left and right rotation
sequences. Each level runs a row phase (rotate two similar active rows,
retire the lighter one) and then a column phase (same on the column Gram).
H keeps a dense core on the surviving row/column sets plus off-core entries
chosen by the configured sparsifier.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cores import CoreSparse, Sparsifier, keep_all, sparsify
from .jacobi import two_basis_reconstruct, two_basis_sweep, unpermute
from .matrices import IndexSet, SquareMatrix


@dataclass(frozen=True)
class DirectFactorization:
    """Left rotations P, right rotations Q, truncated core H.

    With left == right elementwise and a symmetric core-diagonal H this
    reduces to the symmetric factorization form.
    """

    n: int
    left: tuple
    right: tuple
    core_rows: IndexSet
    core_cols: IndexSet
    H: CoreSparse
    row_retired: tuple
    col_retired: tuple

    @property
    def storage_scalars(self):
        idx = len(self.core_rows) + len(self.core_cols)
        return 3 * (len(self.left) + len(self.right)) + self.H.storage_scalars(idx)


def factor_direct(A, core_size, sparsifier, seed, truncate=True):
    """Greedy two-sided factorization down to a core_size x core_size core.

    sparsifier: a cores.Sparsifier; its entry budget m defaults to n - d.
    truncate=False keeps the full rotated matrix in H regardless of the
    sparsifier (lossless round trip).
    """
    n = A.n
    if not 1 <= core_size <= n:
        raise ValueError(f"core_size must be in [1, {n}]")
    if not isinstance(sparsifier, Sparsifier):
        raise TypeError("sparsifier must be a cores.Sparsifier")
    a = np.array(A.to_dense(), dtype=np.float64)
    rng = np.random.default_rng(seed)
    left, right, row_perm, col_perm, row_ret, col_ret = two_basis_sweep(a, core_size, rng)
    hbar = unpermute(a, row_perm, col_perm)
    rows = IndexSet(tuple(sorted(int(i) for i in row_perm[:core_size])), n)
    cols = IndexSet(tuple(sorted(int(i) for i in col_perm[:core_size])), n)
    if truncate:
        h = sparsify(hbar, rows, cols, sparsifier)
    else:
        h = keep_all(hbar, rows, cols)
    return DirectFactorization(
        n, tuple(left), tuple(right), rows, cols, h, tuple(row_ret), tuple(col_ret)
    )


def reconstruct_direct(F):
    """Dense reconstruction of the matrix implied by a DirectFactorization."""
    return SquareMatrix.from_dense(two_basis_reconstruct(F.H.to_dense(), F.left, F.right))
