#pragma once

#include <cstdint>
#include <vector>

#include "ttr1/tensor.hpp"

namespace ttr1 {

/// Canonical polyadic model: sum of R outer products with unit-norm factor
/// columns and the norms absorbed into the weights.
struct CpDecomposition {
    std::vector<double> weights;
    std::vector<Eigen::MatrixXd> factors; ///< factor k is n_k x R
    std::vector<double> fit_history;      ///< relative error after each sweep
};

/// Alternating least squares from a seeded Gaussian start. Each sweep solves
/// the per-mode normal equations against the Khatri-Rao product of the other
/// factors and renormalizes the columns. Stops when the relative error
/// changes by less than tol between sweeps or after max_iters sweeps;
/// non-convergence is visible in fit_history, not an error.
CpDecomposition cp_als(const DenseTensor& t, Index rank, std::uint64_t seed,
                       Index max_iters = 500, double tol = 1e-10);

/// Frobenius error between t and the materialized model.
double cp_error(const DenseTensor& t, const CpDecomposition& cp);

DenseTensor cp_reconstruct(const Shape& shape, const CpDecomposition& cp);

} // namespace ttr1
