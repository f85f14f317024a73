#pragma once

#include <vector>

#include "ttr1/decompose.hpp"
#include "ttr1/tensor.hpp"

namespace ttr1 {

/// One cross-pairing u_i o u_{ij} o v_{ik} of a branch's full SVD factors.
/// The weight is sigma_i * sigma_{ij} on the diagonal pairings (j == k up to
/// min(n2, n3)) and exactly zero elsewhere.
struct TableColumn {
    Index branch = 0;
    Index u_index = 0; ///< j, selecting a left factor of the branch SVD
    Index v_index = 0; ///< k, selecting a right factor
    double weight = 0.0;
    bool diagonal = false; ///< structurally weighted pairing
    bool active = false;   ///< weight above the numerical-rank threshold
};

/// Full SVD data of one level-1 branch of a 3-way tensor.
struct BranchExpansion {
    double sigma = 0.0;    ///< level-1 singular value
    Eigen::VectorXd u;     ///< level-1 left vector (length n1)
    Eigen::MatrixXd u_set; ///< n2 x n2 left factors of the reshaped v
    Eigen::MatrixXd v_set; ///< n3 x n3 right factors
    Eigen::VectorXd sigmas; ///< min(n2, n3) branch singular values
};

/// All r1 * n2 * n3 orthogonal rank-1 outer products spanning the ambient
/// space of a 3-way tensor, r1 = min(n1, n2*n3).
struct OuterProductTable {
    Shape shape;
    std::vector<BranchExpansion> branches;
    std::vector<TableColumn> columns;

    Index nonzero_count() const; ///< diagonal pairings
    Index active_count() const;  ///< pairings above the numerical threshold
    RankOneTerm column_term(const TableColumn& c) const;
};

/// Requires a 3-way tensor with n1 <= n2*n3 (permute the axes first
/// otherwise).
OuterProductTable build_table(const DenseTensor& t);

/// Orthonormal basis of the space of tensors orthogonal to t: the
/// zero-weight table columns plus the mixing combinations of the active
/// terms taken from the null space of the weight row vector.
struct ComplementBasis {
    std::vector<RankOneTerm> zero_weight_terms;
    std::vector<DenseTensor> mixing_terms;

    Index count() const {
        return static_cast<Index>(zero_weight_terms.size() + mixing_terms.size());
    }
};

ComplementBasis complement_basis(const DenseTensor& t);

struct ComplementReport {
    double max_inner_rel = 0.0;    ///< max |<t, B>| / |t|_F over the basis
    double max_gram_offdiag = 0.0; ///< worst pairwise inner product
    double max_norm_dev = 0.0;     ///< worst | |B|_F - 1 |
    Index count = 0;
    Index expected_count = 0;
    Index worst_element = -1; ///< basis index attaining max_inner_rel
    bool ok = false;
};

ComplementReport verify_complement(const DenseTensor& t, const ComplementBasis& basis,
                                   double tol = 1e-10);

} // namespace ttr1
