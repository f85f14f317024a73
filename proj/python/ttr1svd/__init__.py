"""Orthogonal rank-1 tensor expansion via a tree of SVDs.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from ttr1svd._core import (
    ArgumentError,
    ComplementBasis,
    CpDecomposition,
    Decomposition,
    NumericalError,
    Rank3Result,
    Term,
    TuckerDecomposition,
    complement_basis,
    construct_rank3,
    cp_als,
    cp_error,
    decompose,
    gaussian_tensor,
    permutation_scan,
    svd_count_bound,
    term_count_bound,
    to_tucker,
    to_tucker_terms,
)

__all__ = [
    "ArgumentError",
    "ComplementBasis",
    "CpDecomposition",
    "Decomposition",
    "NumericalError",
    "Rank3Result",
    "Term",
    "TuckerDecomposition",
    "complement_basis",
    "construct_rank3",
    "cp_als",
    "cp_error",
    "decompose",
    "gaussian_tensor",
    "permutation_scan",
    "svd_count_bound",
    "term_count_bound",
    "to_tucker",
    "to_tucker_terms",
]
