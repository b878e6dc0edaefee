"""Block-sparse greedy recovery with exact block isometry certification."""

from ._core import (
    PursuitTrace,
    RipCertificate,
    __version__,
    block_omp,
    block_rip_constant_exact,
    coherence,
    gen_matrix,
    gen_signal,
    mixed_l2inf_norm,
    mixed_l20_norm,
    omp,
    omp_threshold,
    read_matrix_file,
    rip_constant_exact,
    solve_least_squares,
    theorem1_threshold,
    write_matrix_file,
)

__all__ = [
    "PursuitTrace",
    "RipCertificate",
    "__version__",
    "block_omp",
    "block_rip_constant_exact",
    "coherence",
    "gen_matrix",
    "gen_signal",
    "mixed_l2inf_norm",
    "mixed_l20_norm",
    "omp",
    "omp_threshold",
    "read_matrix_file",
    "rip_constant_exact",
    "solve_least_squares",
    "theorem1_threshold",
    "write_matrix_file",
]
