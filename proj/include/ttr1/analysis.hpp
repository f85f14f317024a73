#pragma once

#include <optional>
#include <vector>

#include "ttr1/decompose.hpp"
#include "ttr1/tensor.hpp"

namespace ttr1 {

struct PermutationScanRow {
    IndexPermutation perm;
    Index term_count = 0;
    Index rank_bound = 0; ///< leaf-count bound for this axis order
    Index numerical_rank = 0;
    std::vector<double> weights; ///< sorted descending
};

struct PermutationScan {
    std::vector<PermutationScanRow> rows;
    Index min_rank_bound = 0; ///< minimum leaf-count bound over all orders
};

/// Decompose under every axis permutation (d <= 6).
PermutationScan permutation_scan(const DenseTensor& t);

struct DeflationStep {
    std::vector<double> weights; ///< sorted curve at this iteration
    Index ttr1_rank = 0;         ///< count above the iteration-0 threshold
    std::optional<Index> cp_rank;
    double residual_norm = 0.0; ///< norm of the tensor at this iteration
};

/// Repeatedly subtract the largest rank-1 term. Records iterations
/// 0..iterations, each with its weight curve and the numerical rank under
/// the threshold fixed at iteration 0. The CP rank column (smallest ALS rank
/// reaching absolute error 1e-10) is computed only when requested.
std::vector<DeflationStep> deflation_experiment(const DenseTensor& t, Index iterations,
                                                bool with_cp_rank = false);

struct PerturbationReport {
    double e_frob = 0.0; ///< |E|_F
    double e_spec = 0.0; ///< largest singular value of the first unfolding of E
    std::vector<double> per_index_dev; ///< |w^_i - w_i| over sorted terms
    double rss_dev = 0.0;              ///< root-sum-square of per_index_dev
    std::vector<double> weyl_bound;    ///< per term: e_spec + sigma_1 * sum_k |dv_k|
    std::vector<std::vector<double>> delta_v_norms; ///< per term, levels 1..d-3
};

/// Decompose t and t + e and compare. Weight deviations are matched in
/// sorted order; the per-branch right-singular-vector deviations are matched
/// by branch path and sign-aligned before differencing.
PerturbationReport perturbation_report(const DenseTensor& t, const DenseTensor& e);

struct TraceRow {
    std::vector<Index> path;
    std::vector<double> partial_products; ///< running sigma product per level
};

/// Running singular-value products along every branch (sorted term order).
/// Beyond level 1 every factor is at most 1, so each trace is non-increasing
/// from its first entry.
std::vector<TraceRow> intermediate_product_trace(const DenseTensor& t);

/// Sorted weights of a decomposition, ready for CSV emission.
std::vector<double> sv_curve(const Decomposition& dec);

} // namespace ttr1
