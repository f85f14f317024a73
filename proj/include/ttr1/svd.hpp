#pragma once

#include <Eigen/Dense>

#include "ttr1/errors.hpp"

namespace ttr1 {

using Index = Eigen::Index;

/// Singular value decomposition u * s.asDiagonal() * v^T with a canonical
/// sign convention: in every column of u the entry of largest magnitude is
/// positive (first such entry wins on ties), with the compensating flip
/// applied to the paired column of v. The convention makes repeated
/// factorizations of identical input bytes bit-identical.
struct MatrixSvd {
    Eigen::MatrixXd u;
    Eigen::VectorXd s;
    Eigen::MatrixXd v;
    bool full = false;
};

/// Economy SVD: u is m x r and v is n x r with r = min(m, n).
MatrixSvd svd_econ(const Eigen::MatrixXd& m);

/// Full SVD: u is m x m and v is n x n, s zero-padded to min(m, n).
/// The columns beyond the economy rank are completed by Gram-Schmidt
/// against standard basis vectors in index order, so they are deterministic.
MatrixSvd svd_full(const Eigen::MatrixXd& m);

/// Apply the sign convention; reconstruction is unchanged.
MatrixSvd canonicalize_signs(MatrixSvd svd);

} // namespace ttr1
