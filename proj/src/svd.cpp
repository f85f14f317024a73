#include "ttr1/svd.hpp"

#include <cmath>

#include <Eigen/SVD>

namespace ttr1 {

namespace {

void check_input(const Eigen::MatrixXd& m) {
    if (m.size() == 0) {
        throw ArgumentError("svd: empty matrix");
    }
    if (!m.allFinite()) {
        throw ArgumentError("svd: input has non-finite entries");
    }
}

/// Extend the orthonormal columns of q to a full basis of R^n by
/// Gram-Schmidt against e_1, e_2, ... in index order.
Eigen::MatrixXd complete_basis(const Eigen::MatrixXd& q) {
    const Index n = q.rows();
    Eigen::MatrixXd out(n, n);
    Index have = q.cols();
    out.leftCols(have) = q;
    for (Index j = 0; j < n && have < n; ++j) {
        Eigen::VectorXd w = Eigen::VectorXd::Unit(n, j);
        w -= out.leftCols(have) * (out.leftCols(have).transpose() * w);
        w -= out.leftCols(have) * (out.leftCols(have).transpose() * w);
        const double nw = w.norm();
        if (nw > 1e-6) {
            out.col(have++) = w / nw;
        }
    }
    if (have < n) {
        throw NumericalError("svd: basis completion failed");
    }
    return out;
}

void flip_largest_entry_positive(Eigen::MatrixXd& u, Eigen::MatrixXd* v, Index col) {
    Index best = 0;
    double mag = -1.0;
    for (Index i = 0; i < u.rows(); ++i) {
        const double a = std::abs(u(i, col));
        if (a > mag) {
            mag = a;
            best = i;
        }
    }
    if (u(best, col) < 0.0) {
        u.col(col) = -u.col(col);
        if (v != nullptr && col < v->cols()) {
            v->col(col) = -v->col(col);
        }
    }
}

} // namespace

MatrixSvd svd_econ(const Eigen::MatrixXd& m) {
    check_input(m);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) {
        throw NumericalError("svd: Jacobi iteration did not converge");
    }
    MatrixSvd out{svd.matrixU(), svd.singularValues(), svd.matrixV(), false};
    return canonicalize_signs(std::move(out));
}

MatrixSvd svd_full(const Eigen::MatrixXd& m) {
    MatrixSvd econ = svd_econ(m);
    MatrixSvd out;
    out.full = true;
    out.s = econ.s;
    out.u = complete_basis(econ.u);
    out.v = complete_basis(econ.v);
    // completed columns have no singular-value partner; canonicalize each alone
    for (Index j = econ.u.cols(); j < out.u.cols(); ++j) {
        flip_largest_entry_positive(out.u, nullptr, j);
    }
    for (Index j = econ.v.cols(); j < out.v.cols(); ++j) {
        flip_largest_entry_positive(out.v, nullptr, j);
    }
    return out;
}

MatrixSvd canonicalize_signs(MatrixSvd svd) {
    const Index paired = std::min(svd.u.cols(), svd.v.cols());
    for (Index j = 0; j < paired; ++j) {
        flip_largest_entry_positive(svd.u, &svd.v, j);
    }
    for (Index j = paired; j < svd.u.cols(); ++j) {
        flip_largest_entry_positive(svd.u, nullptr, j);
    }
    for (Index j = paired; j < svd.v.cols(); ++j) {
        flip_largest_entry_positive(svd.v, nullptr, j);
    }
    return svd;
}

} // namespace ttr1
