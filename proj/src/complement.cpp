#include "ttr1/complement.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "ttr1/svd.hpp"

namespace ttr1 {

Index OuterProductTable::nonzero_count() const {
    Index n = 0;
    for (const TableColumn& c : columns) {
        if (c.diagonal) ++n;
    }
    return n;
}

Index OuterProductTable::active_count() const {
    Index n = 0;
    for (const TableColumn& c : columns) {
        if (c.active) ++n;
    }
    return n;
}

RankOneTerm OuterProductTable::column_term(const TableColumn& c) const {
    const BranchExpansion& b = branches[static_cast<std::size_t>(c.branch)];
    return {c.weight, {b.u, b.u_set.col(c.u_index), b.v_set.col(c.v_index)}};
}

OuterProductTable build_table(const DenseTensor& t) {
    if (t.order() != 3) {
        throw ArgumentError("build_table: only 3-way tensors are supported");
    }
    const Index n1 = t.shape().dim(0);
    const Index n2 = t.shape().dim(1);
    const Index n3 = t.shape().dim(2);
    if (n1 > n2 * n3) {
        throw ArgumentError(
            "build_table: requires n1 <= n2*n3; permute the axes first");
    }

    OuterProductTable table;
    table.shape = t.shape();

    const MatrixSvd root = svd_econ(reshape_to_matrix(t, 1));
    const Index nb = root.s.size(); // = n1
    const Index diag = std::min(n2, n3);

    double wmax = 0.0;
    for (Index i = 0; i < nb; ++i) {
        Eigen::MatrixXd vbar =
            Eigen::Map<const Eigen::MatrixXd>(root.v.col(i).data(), n2, n3);
        MatrixSvd full = svd_full(vbar);
        BranchExpansion br;
        br.sigma = root.s[i];
        br.u = root.u.col(i);
        br.u_set = full.u;
        br.v_set = full.v;
        br.sigmas = full.s;
        table.branches.push_back(std::move(br));
        for (Index j = 0; j < diag; ++j) {
            wmax = std::max(wmax, root.s[i] * full.s[j]);
        }
    }

    const Index maxdim = std::max({n1, n2 * n3, n2, n3});
    const double threshold = static_cast<double>(maxdim) * DBL_EPSILON * wmax;
    for (Index i = 0; i < nb; ++i) {
        const BranchExpansion& br = table.branches[static_cast<std::size_t>(i)];
        for (Index j = 0; j < n2; ++j) {
            for (Index k = 0; k < n3; ++k) {
                TableColumn col;
                col.branch = i;
                col.u_index = j;
                col.v_index = k;
                col.diagonal = (j == k && j < diag);
                col.weight = col.diagonal ? br.sigma * br.sigmas[j] : 0.0;
                col.active = col.weight > threshold;
                table.columns.push_back(col);
            }
        }
    }
    return table;
}

ComplementBasis complement_basis(const DenseTensor& t) {
    if (frobenius_norm(t) == 0.0) {
        throw ArgumentError("complement_basis: zero tensor has no distinguished complement");
    }
    const OuterProductTable table = build_table(t);

    ComplementBasis basis;
    std::vector<RankOneTerm> diagonal_terms; // tree order, weights included
    for (const TableColumn& c : table.columns) {
        if (c.diagonal) {
            diagonal_terms.push_back(table.column_term(c));
        } else {
            RankOneTerm unit = table.column_term(c);
            unit.weight = 1.0;
            basis.zero_weight_terms.push_back(std::move(unit));
        }
    }

    // mixing terms: null space of the weight row vector, taken from the full
    // SVD of the 1 x K matrix (sigma~_1 ... sigma~_K)
    const Index k = static_cast<Index>(diagonal_terms.size());
    Eigen::MatrixXd row(1, k);
    for (Index i = 0; i < k; ++i) {
        row(0, i) = diagonal_terms[static_cast<std::size_t>(i)].weight;
    }
    const MatrixSvd rowsvd = svd_full(row);
    for (Index j = 1; j < k; ++j) {
        DenseTensor mix = DenseTensor::zeros(t.shape());
        for (Index i = 0; i < k; ++i) {
            RankOneTerm unit = diagonal_terms[static_cast<std::size_t>(i)];
            unit.weight = rowsvd.v(i, j);
            mix = mix + unit.materialize();
        }
        basis.mixing_terms.push_back(std::move(mix));
    }
    return basis;
}

ComplementReport verify_complement(const DenseTensor& t, const ComplementBasis& basis,
                                   double tol) {
    ComplementReport rep;
    rep.count = basis.count();
    rep.expected_count = t.shape().element_count() - 1;

    std::vector<DenseTensor> elements;
    elements.reserve(static_cast<std::size_t>(rep.count));
    for (const RankOneTerm& term : basis.zero_weight_terms) {
        elements.push_back(term.materialize());
    }
    for (const DenseTensor& mix : basis.mixing_terms) {
        elements.push_back(mix);
    }

    const double tnorm = frobenius_norm(t);
    for (std::size_t i = 0; i < elements.size(); ++i) {
        const double rel = std::abs(inner_product(t, elements[i])) / tnorm;
        if (rel > rep.max_inner_rel) {
            rep.max_inner_rel = rel;
            rep.worst_element = static_cast<Index>(i);
        }
        rep.max_norm_dev =
            std::max(rep.max_norm_dev, std::abs(frobenius_norm(elements[i]) - 1.0));
        for (std::size_t j = i + 1; j < elements.size(); ++j) {
            rep.max_gram_offdiag = std::max(
                rep.max_gram_offdiag, std::abs(inner_product(elements[i], elements[j])));
        }
    }
    rep.ok = rep.count == rep.expected_count && rep.max_inner_rel <= tol &&
             rep.max_gram_offdiag <= tol && rep.max_norm_dev <= tol;
    return rep;
}

} // namespace ttr1
