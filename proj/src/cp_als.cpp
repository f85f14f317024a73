#include "ttr1/cp_als.hpp"

#include <cmath>

#include <Eigen/Cholesky>

#include "ttr1/random.hpp"

namespace ttr1 {

namespace {

/// Mode-k unfolding: rows indexed by i_k, columns by the remaining indices
/// in ascending mode order, first-listed fastest.
Eigen::MatrixXd unfold(const DenseTensor& t, Index mode) {
    const Index d = t.order();
    std::vector<Index> axes;
    axes.push_back(mode);
    for (Index m = 0; m < d; ++m) {
        if (m != mode) axes.push_back(m);
    }
    const DenseTensor moved = permute_indices(t, IndexPermutation{axes});
    return reshape_to_matrix(moved, 1);
}

/// Khatri-Rao product of the factors of all modes except `mode`, highest
/// mode leftmost, matching the unfolding's column order.
Eigen::MatrixXd khatri_rao_others(const std::vector<Eigen::MatrixXd>& factors,
                                  Index mode) {
    const Index rank = factors.front().cols();
    Eigen::MatrixXd kr;
    bool first = true;
    for (Index m = static_cast<Index>(factors.size()) - 1; m >= 0; --m) {
        if (m == mode) continue;
        const Eigen::MatrixXd& f = factors[static_cast<std::size_t>(m)];
        if (first) {
            kr = f;
            first = false;
            continue;
        }
        Eigen::MatrixXd next(kr.rows() * f.rows(), rank);
        for (Index r = 0; r < rank; ++r) {
            for (Index i = 0; i < kr.rows(); ++i) {
                next.block(i * f.rows(), r, f.rows(), 1) = kr(i, r) * f.col(r);
            }
        }
        kr = std::move(next);
    }
    return kr;
}

} // namespace

DenseTensor cp_reconstruct(const Shape& shape, const CpDecomposition& cp) {
    DenseTensor sum = DenseTensor::zeros(shape);
    const Index rank = static_cast<Index>(cp.weights.size());
    for (Index r = 0; r < rank; ++r) {
        std::vector<Eigen::VectorXd> modes;
        for (const Eigen::MatrixXd& f : cp.factors) {
            modes.push_back(f.col(r));
        }
        sum = sum + outer_product(cp.weights[static_cast<std::size_t>(r)], modes);
    }
    return sum;
}

double cp_error(const DenseTensor& t, const CpDecomposition& cp) {
    return frobenius_norm(t - cp_reconstruct(t.shape(), cp));
}

CpDecomposition cp_als(const DenseTensor& t, Index rank, std::uint64_t seed,
                       Index max_iters, double tol) {
    if (rank < 1) {
        throw ArgumentError("cp_als: rank must be at least 1");
    }
    const Index d = t.order();
    const double tnorm = frobenius_norm(t);

    CpDecomposition cp;
    cp.weights.assign(static_cast<std::size_t>(rank), 1.0);
    SeededRng rng(seed);
    for (Index k = 0; k < d; ++k) {
        Eigen::MatrixXd f(t.shape().dim(k), rank);
        for (Index j = 0; j < f.cols(); ++j) {
            for (Index i = 0; i < f.rows(); ++i) {
                f(i, j) = rng.gaussian();
            }
            const double n = f.col(j).norm();
            if (n > 0.0) f.col(j) /= n;
        }
        cp.factors.push_back(std::move(f));
    }

    std::vector<Eigen::MatrixXd> unfoldings;
    for (Index k = 0; k < d; ++k) {
        unfoldings.push_back(unfold(t, k));
    }

    for (Index it = 0; it < max_iters; ++it) {
        for (Index k = 0; k < d; ++k) {
            Eigen::MatrixXd gram = Eigen::MatrixXd::Ones(rank, rank);
            for (Index m = 0; m < d; ++m) {
                if (m == k) continue;
                const Eigen::MatrixXd& f = cp.factors[static_cast<std::size_t>(m)];
                gram.array() *= (f.transpose() * f).array();
            }
            const Eigen::MatrixXd kr = khatri_rao_others(cp.factors, k);
            const Eigen::MatrixXd rhs =
                (unfoldings[static_cast<std::size_t>(k)] * kr).transpose();

            Eigen::LLT<Eigen::MatrixXd> llt(gram);
            Eigen::MatrixXd solved;
            if (llt.info() == Eigen::Success) {
                solved = llt.solve(rhs);
            } else {
                // singular normal equations: ridge and continue
                const Eigen::MatrixXd ridged =
                    gram + 1e-12 * Eigen::MatrixXd::Identity(rank, rank);
                solved = ridged.ldlt().solve(rhs);
            }
            Eigen::MatrixXd f = solved.transpose();
            for (Index j = 0; j < rank; ++j) {
                const double n = f.col(j).norm();
                cp.weights[static_cast<std::size_t>(j)] = n;
                if (n > 0.0) {
                    f.col(j) /= n;
                } else {
                    f.col(j) = Eigen::VectorXd::Unit(f.rows(), 0);
                }
            }
            cp.factors[static_cast<std::size_t>(k)] = std::move(f);
        }
        const double err = cp_error(t, cp);
        cp.fit_history.push_back(tnorm > 0.0 ? err / tnorm : err);
        const std::size_t n = cp.fit_history.size();
        if (n >= 2 && std::abs(cp.fit_history[n - 2] - cp.fit_history[n - 1]) < tol) {
            break;
        }
    }
    return cp;
}

} // namespace ttr1
