"""Multiresolution matrix factorization library and benchmark toolkit."""

from .additive import AdditiveFactorization, factor_additive, reconstruct_additive
from .bench import (
    BENCH_METHODS,
    CompressionReport,
    SweepConfig,
    SweepResult,
    compression_error,
    derive_seed,
    load_manifest,
    load_sweep_config,
    run_decay_sweep,
    run_rank_sweep,
    run_sweep,
    sweep_csv,
    sweep_json,
    win_table,
    write_sweep_outputs,
)
from .cores import (
    CORE_DIAGONAL,
    GREEDY_TOP_N,
    TOP_N,
    CoreSparse,
    Sparsifier,
    keep_all,
    murnaghan_sparsify,
    sparsify,
)
from .cur import (
    CurFactors,
    HybridResult,
    cur_decompose,
    cur_relative_error,
    cur_storage,
    hybrid_compress,
    reconstruct_cur,
)
from .data import (
    DecaySpec,
    FetchError,
    MatrixMetadata,
    MatrixNotFoundError,
    decay_values,
    fetch_suitesparse,
    gen_block_hierarchical,
    gen_decay_matrix,
    gen_low_rank,
    gen_mixed_matrix,
    gen_random_orthogonal,
    parse_matrix_market,
    write_matrix_market,
)
from .direct import DirectFactorization, factor_direct, reconstruct_direct
from .matrices import (
    GivensRotation,
    IndexSet,
    MatrixFormatError,
    SquareMatrix,
    apply_givens,
    frobenius_relative_error,
    givens_from_gram2,
    numerical_symmetry,
    row_gram,
    split_symmetric_skew,
)
from .skew import SkewFactorization, factor_skew, reconstruct_skew
from .storage import (
    BudgetError,
    StorageBudget,
    method_storage,
    minimum_storage,
    predicted_storage,
    solve_core_size,
)
from .symmetric import SymFactorization, factor_symmetric, reconstruct_sym

__version__ = "0.1.0"

__all__ = [
    "AdditiveFactorization",
    "BENCH_METHODS",
    "BudgetError",
    "CORE_DIAGONAL",
    "CompressionReport",
    "CoreSparse",
    "CurFactors",
    "DecaySpec",
    "DirectFactorization",
    "FetchError",
    "GREEDY_TOP_N",
    "GivensRotation",
    "HybridResult",
    "IndexSet",
    "MatrixFormatError",
    "MatrixMetadata",
    "MatrixNotFoundError",
    "SkewFactorization",
    "Sparsifier",
    "SquareMatrix",
    "StorageBudget",
    "SweepConfig",
    "SweepResult",
    "SymFactorization",
    "TOP_N",
    "apply_givens",
    "compression_error",
    "cur_decompose",
    "cur_relative_error",
    "cur_storage",
    "decay_values",
    "derive_seed",
    "factor_additive",
    "factor_direct",
    "factor_skew",
    "factor_symmetric",
    "fetch_suitesparse",
    "frobenius_relative_error",
    "gen_block_hierarchical",
    "gen_decay_matrix",
    "gen_low_rank",
    "gen_mixed_matrix",
    "gen_random_orthogonal",
    "givens_from_gram2",
    "hybrid_compress",
    "keep_all",
    "load_manifest",
    "load_sweep_config",
    "method_storage",
    "minimum_storage",
    "murnaghan_sparsify",
    "numerical_symmetry",
    "parse_matrix_market",
    "predicted_storage",
    "reconstruct_additive",
    "reconstruct_cur",
    "reconstruct_direct",
    "reconstruct_skew",
    "reconstruct_sym",
    "row_gram",
    "run_decay_sweep",
    "run_rank_sweep",
    "run_sweep",
    "solve_core_size",
    "sparsify",
    "split_symmetric_skew",
    "sweep_csv",
    "sweep_json",
    "win_table",
    "write_matrix_market",
    "write_sweep_outputs",
]
