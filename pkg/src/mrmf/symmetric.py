"""Multiresolution factorization of symmetric matrices.

A ~ G_1 ... G_L H G_L^T ... G_1^T with L = n - d sparse rotations and H in
core-diagonal form: dense on the d surviving indices, diagonal elsewhere.
Each level pairs a random active index with its most similar partner under
the active-row Gram, rotates to diagonalize the 2x2 Gram block, and retires
the index whose off-diagonal residual is smaller.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cores import CORE_DIAGONAL, CoreSparse, Sparsifier, keep_all, sparsify
from .jacobi import conjugate_reconstruct, conjugation_sweep, unpermute
from .matrices import GivensRotation, IndexSet, SquareMatrix, check_symmetric


@dataclass(frozen=True)
class SymFactorization:
    """Rotations (application order), surviving core set, truncated core H.

    retired holds the index removed at each level, so the active sets are
    recoverable for any level prefix.
    """

    n: int
    rotations: tuple
    core_set: IndexSet
    H: CoreSparse
    retired: tuple

    @property
    def storage_scalars(self):
        return 3 * len(self.rotations) + self.H.storage_scalars(len(self.core_set))


def factor_symmetric(A, core_size, seed, truncate=True, level_callback=None):
    """Greedy symmetric factorization down to a core of core_size indices.

    truncate=False keeps the full rotated matrix in H (lossless; useful for
    round-trip checks). level_callback, when given, sees the working matrix
    after every rotation (rows/columns compacted, i.e. permuted).
    """
    n = A.n
    if not 1 <= core_size <= n:
        raise ValueError(f"core_size must be in [1, {n}]")
    a = np.array(A.to_dense(), dtype=np.float64)
    check_symmetric(a)
    rng = np.random.default_rng(seed)
    rotations, perm, retired = conjugation_sweep(a, core_size, rng, level_callback)
    hbar = unpermute(a, perm, perm)
    core = IndexSet(tuple(sorted(int(i) for i in perm[:core_size])), n)
    if truncate:
        h = sparsify(hbar, core, core, Sparsifier(CORE_DIAGONAL))
    else:
        h = keep_all(hbar, core, core)
    return SymFactorization(n, tuple(rotations), core, h, tuple(retired))


def reconstruct_sym(F):
    """Dense reconstruction of the matrix implied by a SymFactorization."""
    return SquareMatrix.from_dense(conjugate_reconstruct(F.H.to_dense(), F.rotations))
