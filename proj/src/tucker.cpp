#include "ttr1/tucker.hpp"

#include <cmath>

namespace ttr1 {

namespace {

struct OrderedQr {
    Eigen::MatrixXd q;      ///< accepted orthonormal columns
    Eigen::MatrixXd coeffs; ///< rank x count, column j reproduces input j
};

/// Gram-Schmidt in the given column order with a rank decision per column.
/// Dependent columns contribute coefficients only; they never steal a basis
/// direction, so the coefficient "triangle" follows the term order exactly.
OrderedQr ordered_qr(const std::vector<Eigen::VectorXd>& cols, double rel_tol) {
    const Index n = cols.front().size();
    const Index count = static_cast<Index>(cols.size());
    Eigen::MatrixXd q(n, std::min(n, count));
    Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(std::min(n, count), count);
    Index rank = 0;
    double max_diag = 0.0;
    for (Index j = 0; j < count; ++j) {
        Eigen::VectorXd w = cols[static_cast<std::size_t>(j)];
        Eigen::VectorXd c = Eigen::VectorXd::Zero(std::min(n, count));
        for (int pass = 0; pass < 2; ++pass) {
            for (Index i = 0; i < rank; ++i) {
                const double p = q.col(i).dot(w);
                c[i] += p;
                w -= p * q.col(i);
            }
        }
        const double res = w.norm();
        const bool accept = (max_diag == 0.0) ? res > 0.0 : res > rel_tol * max_diag;
        if (rank < std::min(n, count) && accept) {
            q.col(rank) = w / res;
            c[rank] = res;
            ++rank;
            max_diag = std::max(max_diag, res);
        }
        coeffs.col(j) = c;
    }
    OrderedQr out;
    out.q = q.leftCols(rank);
    out.coeffs = coeffs.topRows(rank);
    return out;
}

} // namespace

TuckerDecomposition to_tucker(const Decomposition& dec, std::span<const Index> term_indices) {
    const Index n_terms = static_cast<Index>(dec.terms.size());
    if (term_indices.empty()) {
        throw ArgumentError("to_tucker: at least one term required");
    }
    for (Index i : term_indices) {
        if (i < 0 || i >= n_terms) {
            throw ArgumentError("to_tucker: term index out of range");
        }
    }
    const Index d = dec.permuted_shape().order();

    TuckerDecomposition td;
    std::vector<Eigen::MatrixXd> coeffs(static_cast<std::size_t>(d));
    std::vector<Index> core_dims(static_cast<std::size_t>(d));
    for (Index k = 0; k < d; ++k) {
        std::vector<Eigen::VectorXd> cols;
        cols.reserve(term_indices.size());
        for (Index i : term_indices) {
            cols.push_back(
                dec.terms[static_cast<std::size_t>(i)].mode_vectors[static_cast<std::size_t>(k)]);
        }
        OrderedQr qr = ordered_qr(cols, 1e-12);
        td.factors.push_back(std::move(qr.q));
        coeffs[static_cast<std::size_t>(k)] = std::move(qr.coeffs);
        core_dims[static_cast<std::size_t>(k)] = td.factors.back().cols();
    }

    const Shape core_shape{core_dims};
    DenseTensor core = DenseTensor::zeros(core_shape);
    for (std::size_t pos = 0; pos < term_indices.size(); ++pos) {
        const Term& term = dec.terms[static_cast<std::size_t>(term_indices[pos])];
        std::vector<Eigen::VectorXd> vecs;
        vecs.reserve(static_cast<std::size_t>(d));
        for (Index k = 0; k < d; ++k) {
            vecs.push_back(coeffs[static_cast<std::size_t>(k)].col(static_cast<Index>(pos)));
        }
        core = core + outer_product(term.weight, vecs);
    }
    td.core = std::move(core);
    td.nnz = core_sparsity(td);
    return td;
}

TuckerDecomposition to_tucker(const Decomposition& dec, Index R) {
    const Index n_terms = static_cast<Index>(dec.terms.size());
    if (R < 1 || R > n_terms) {
        throw ArgumentError("to_tucker: R out of range");
    }
    std::vector<Index> idx(static_cast<std::size_t>(R));
    for (Index i = 0; i < R; ++i) idx[static_cast<std::size_t>(i)] = i;
    return to_tucker(dec, idx);
}

Index core_sparsity(const TuckerDecomposition& td) {
    double maxabs = 0.0;
    for (double x : td.core.data()) maxabs = std::max(maxabs, std::abs(x));
    if (maxabs == 0.0) return 0;
    Index nnz = 0;
    for (double x : td.core.data()) {
        if (std::abs(x) > 1e-12 * maxabs) ++nnz;
    }
    return nnz;
}

DenseTensor tucker_reconstruct(const TuckerDecomposition& td) {
    DenseTensor out = td.core;
    for (Index k = 0; k < out.order(); ++k) {
        out = mode_product(out, td.factors[static_cast<std::size_t>(k)], k);
    }
    return out;
}

} // namespace ttr1
