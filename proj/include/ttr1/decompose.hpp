#pragma once

#include <optional>
#include <vector>

#include "ttr1/tensor.hpp"

namespace ttr1 {

/// One SVD node of the expansion tree. Nodes live at levels 1..d-1; the
/// root reshape is level 0 and is not stored. sigma at levels >= 2 never
/// exceeds 1 because it is a singular value of a reshaped unit vector.
struct TreeNode {
    Index level = 0;
    Index parent = -1; ///< index into the node vector, -1 for level-1 nodes
    double sigma = 0.0;
    Eigen::VectorXd u;
    Eigen::VectorXd v; ///< kept at leaves; internal nodes keep it only on request
};

/// One rank-1 term of the expansion: composite weight (product of the
/// branch singular values), one unit vector per mode, and the branch path.
struct Term {
    double weight = 0.0;
    std::vector<Eigen::VectorXd> mode_vectors;
    std::vector<Index> path;         ///< 0-based child index per level
    std::vector<double> path_sigmas; ///< node sigma per level along the branch

    DenseTensor materialize() const { return outer_product(weight, mode_vectors); }
};

struct DecomposeOptions {
    std::optional<double> prune_eps;
    bool keep_tree = false;
    bool keep_internal_v = false;
};

/// Sorted orthogonal rank-1 expansion of a dense tensor.
struct Decomposition {
    Shape shape;            ///< shape of the tensor handed to decompose()
    IndexPermutation order; ///< axis permutation applied before expansion
    std::vector<Term> terms;
    Index svd_count = 0;
    std::optional<double> prune_tolerance;
    Index pruned_leaf_count = 0;
    std::vector<TreeNode> tree; ///< populated only with keep_tree

    Shape permuted_shape() const;
    std::vector<double> weights() const;
};

/// Expand t into mutually orthogonal rank-1 terms by recursive
/// reshape + SVD. Every branch of every economy SVD is expanded, including
/// exact-zero ones, so the term count is always prod_k r_k. Terms come back
/// sorted by descending weight, ties broken by branch path.
Decomposition decompose(const DenseTensor& t);
Decomposition decompose(const DenseTensor& t, const IndexPermutation& order,
                        const DecomposeOptions& options = {});

/// Expansion with subtree pruning: candidate nodes whose estimated
/// contribution keeps the accumulated budget within eps^2 are discarded
/// before their SVDs run. The result satisfies
/// |t - reconstruct(all kept terms)|_F <= eps.
Decomposition decompose_pruned(const DenseTensor& t, double eps);

/// Sum of the first R terms (all terms when R is absent), mapped back to
/// the axes of the original tensor.
DenseTensor reconstruct(const Decomposition& dec, std::optional<Index> R = {});

/// Exact truncation error sqrt(w_{R+1}^2 + ... + w_N^2).
double approximation_error(const Decomposition& dec, Index R);

/// Number of terms with weight above eps. Discarding the remaining terms
/// keeps every discarded weight at most eps; the tail root-sum-square can
/// still exceed eps when the weights decay slowly (check with
/// approximation_error).
Index truncate_to_tolerance(const Decomposition& dec, double eps);

/// w_R / w_{R+1} of the sorted weights (1-based R); +inf when w_{R+1} = 0.
double approxi_rank_gap(const Decomposition& dec, Index R);

/// Number of leaves N = prod_{k=0}^{d-2} min(n_{k+1}, prod_{i>=k+2} n_i),
/// an upper bound on the orthogonal rank.
Index term_count_bound(const Shape& shape);

/// Number of SVDs of the full expansion: 1 + sum_{i=0}^{d-3} prod_{k<=i} r_k.
Index svd_count_bound(const Shape& shape);

/// Count of weights above the threshold; the default threshold is
/// max reshape dimension * machine epsilon * largest weight.
Index numerical_rank(const Decomposition& dec, std::optional<double> threshold = {});

double default_rank_threshold(const Decomposition& dec);

} // namespace ttr1
