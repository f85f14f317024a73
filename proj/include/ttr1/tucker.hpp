#pragma once

#include <span>
#include <vector>

#include "ttr1/decompose.hpp"
#include "ttr1/tensor.hpp"

namespace ttr1 {

/// Tucker format: dense core of shape r_1 x ... x r_d and per-mode
/// orthonormal factors U_k of size n_k x r_k. The factors live in the
/// decomposition's working (permuted) axes.
struct TuckerDecomposition {
    DenseTensor core;
    std::vector<Eigen::MatrixXd> factors;
    Index nnz = 0; ///< core entries with magnitude above 1e-12 * max|core|
};

/// Convert the selected terms into Tucker format. Per mode, the selected
/// mode vectors are orthonormalized in term order; columns whose residual
/// falls below 1e-12 times the largest accepted one are dropped, which
/// removes the exact rank deficiency caused by repeated branch vectors.
TuckerDecomposition to_tucker(const Decomposition& dec, std::span<const Index> term_indices);

/// Convenience overload: the first R sorted terms.
TuckerDecomposition to_tucker(const Decomposition& dec, Index R);

Index core_sparsity(const TuckerDecomposition& td);

/// core x_1 U_1 x_2 U_2 ... x_d U_d.
DenseTensor tucker_reconstruct(const TuckerDecomposition& td);

} // namespace ttr1
