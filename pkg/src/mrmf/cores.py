"""Truncated core representations of a rotated matrix.

A CoreSparse keeps a dense block on (row_set x col_set) plus an explicit
list of off-core entries. The sparsifiers differ only in which off-core
entries survive: the off-core diagonal, the m largest by magnitude, or the
m largest under a row/column-disjointness constraint.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrices import IndexSet

CORE_DIAGONAL = "corediag"
TOP_N = "topn"
GREEDY_TOP_N = "greedytopn"
_KINDS = (CORE_DIAGONAL, TOP_N, GREEDY_TOP_N)


@dataclass(frozen=True)
class Sparsifier:
    """Off-core retention rule: kind plus entry budget m (ignored by corediag).

    m=None selects the default budget n - d at sparsification time.
    """

    kind: str
    m: int | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown sparsifier kind {self.kind!r}")
        if self.m is not None and self.m < 0:
            raise ValueError("entry budget m must be nonnegative")


@dataclass(frozen=True)
class CoreSparse:
    """Dense core block plus explicit off-core entries of an n x n matrix."""

    n: int
    row_set: IndexSet
    col_set: IndexSet
    core: np.ndarray
    offcore: tuple  # ((row, col, value), ...)

    def __post_init__(self):
        core = np.asarray(self.core, dtype=np.float64)
        if core.shape != (len(self.row_set), len(self.col_set)):
            raise ValueError("core block shape does not match index sets")
        core = core.copy()
        core.flags.writeable = False
        object.__setattr__(self, "core", core)
        object.__setattr__(
            self, "offcore", tuple((int(r), int(c), float(v)) for r, c, v in self.offcore)
        )

    @property
    def core_set(self):
        """The single core index set (valid when row_set == col_set)."""
        if self.row_set.indices != self.col_set.indices:
            raise ValueError("core has distinct row and column sets")
        return self.row_set

    def to_dense(self):
        h = np.zeros((self.n, self.n))
        if len(self.row_set) and len(self.col_set):
            h[np.ix_(self.row_set.to_array(), self.col_set.to_array())] = self.core
        for r, c, v in self.offcore:
            h[r, c] = v
        return h

    def storage_scalars(self, index_scalars):
        """Scalar count: dense block + 3 per off-core entry + index overhead."""
        return self.core.size + 3 * len(self.offcore) + index_scalars


def _offcore_candidates(h, row_set, col_set):
    """Nonzero off-core entries sorted by (-|value|, row, col)."""
    n = h.shape[0]
    row_in = np.zeros(n, dtype=bool)
    col_in = np.zeros(n, dtype=bool)
    row_in[list(row_set)] = True
    col_in[list(col_set)] = True
    mask = ~(row_in[:, None] & col_in[None, :]) & (h != 0.0)
    rr, cc = np.nonzero(mask)
    vv = h[rr, cc]
    order = np.lexsort((cc, rr, -np.abs(vv)))
    return rr[order], cc[order], vv[order]


def sparsify(h, row_set, col_set, rule):
    """Truncate the dense matrix h to a CoreSparse under the given Sparsifier.

    The (row_set x col_set) block is always kept dense. corediag keeps every
    nonzero off-core diagonal position; topn keeps the m largest off-core
    entries by |value|; greedytopn scans in descending |value| and accepts an
    entry only if neither its row nor its column was already used, stopping
    after m acceptances. Ties are broken by (row, col) order.
    """
    n = h.shape[0]
    core = h[np.ix_(row_set.to_array(), col_set.to_array())] if len(row_set) and len(col_set) \
        else np.zeros((len(row_set), len(col_set)))
    kept = []
    if rule.kind == CORE_DIAGONAL:
        for i in range(n):
            if (i not in row_set or i not in col_set) and h[i, i] != 0.0:
                kept.append((i, i, float(h[i, i])))
    else:
        m = rule.m if rule.m is not None else max(n - len(row_set), 0)
        rr, cc, vv = _offcore_candidates(h, row_set, col_set)
        if rule.kind == TOP_N:
            for r, c, v in zip(rr[:m], cc[:m], vv[:m]):
                kept.append((int(r), int(c), float(v)))
        else:
            rows_used = np.zeros(n, dtype=bool)
            cols_used = np.zeros(n, dtype=bool)
            for r, c, v in zip(rr, cc, vv):
                if len(kept) == m:
                    break
                if not rows_used[r] and not cols_used[c]:
                    rows_used[r] = True
                    cols_used[c] = True
                    kept.append((int(r), int(c), float(v)))
    return CoreSparse(n, row_set, col_set, core, tuple(kept))


def keep_all(h, row_set, col_set):
    """Untruncated CoreSparse: the whole matrix h (off-core kept verbatim)."""
    rr, cc, vv = _offcore_candidates(h, row_set, col_set)
    core = h[np.ix_(row_set.to_array(), col_set.to_array())] if len(row_set) and len(col_set) \
        else np.zeros((len(row_set), len(col_set)))
    kept = tuple((int(r), int(c), float(v)) for r, c, v in zip(rr, cc, vv))
    return CoreSparse(h.shape[0], row_set, col_set, core, kept)


def murnaghan_sparsify(h, core_set):
    """Pair non-core indices into disjoint antisymmetric 2x2 blocks.

    Candidate pairs (p, q), p < q, both outside core_set, are scanned in
    descending |h[p, q]|; a pair is accepted when neither index is already
    paired. Each accepted pair stores (p, q, v) and its exact mirror
    (q, p, -v), so the implied off-core structure is skew-symmetric by
    construction. An odd leftover index keeps nothing (its diagonal is zero
    in any skew matrix).
    """
    n = h.shape[0]
    in_core = np.zeros(n, dtype=bool)
    in_core[list(core_set)] = True
    non = ~in_core
    mask = np.triu(np.ones((n, n), dtype=bool), 1) & non[:, None] & non[None, :] & (h != 0.0)
    rr, cc = np.nonzero(mask)
    vv = h[rr, cc]
    order = np.lexsort((cc, rr, -np.abs(vv)))
    pairable = (int(non.sum()) // 2) * 2
    used = np.zeros(n, dtype=bool)
    paired = 0
    kept = []
    for k in order:
        if paired >= pairable:
            break
        p, q = int(rr[k]), int(cc[k])
        if used[p] or used[q]:
            continue
        used[p] = used[q] = True
        paired += 2
        v = float(vv[k])
        kept.append((p, q, v))
        kept.append((q, p, -v))
    core = h[np.ix_(core_set.to_array(), core_set.to_array())] if len(core_set) \
        else np.zeros((0, 0))
    return CoreSparse(n, core_set, core_set, core, tuple(kept))
