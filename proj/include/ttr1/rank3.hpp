#pragma once

#include <optional>
#include <vector>

#include "ttr1/tensor.hpp"

namespace ttr1 {

enum class MergeOrder { second_then_third, third_then_second };

enum class MergeStatus {
    merged,    ///< four active columns merged into three terms
    reduced,   ///< fewer than four active columns, returned as-is
    degenerate ///< both alignment orders singular, four-term fallback
};

/// Scalars of the two 2x2 alignment systems used by the merge.
struct MergePlan {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double delta = 0.0;
    MergeOrder order = MergeOrder::second_then_third;
};

struct Rank3Result {
    std::vector<RankOneTerm> terms;
    MergeStatus status = MergeStatus::reduced;
    std::optional<MergePlan> plan;

    DenseTensor materialize(const Shape& shape) const;
};

/// Express a real 2x2x2 tensor as at most three real rank-1 terms by merging
/// the four active columns of its expansion table. Falls back to the four
/// unmerged terms when both alignment orders are singular.
Rank3Result construct_rank3(const DenseTensor& t);

struct Rank3Report {
    double construction_error = 0.0; ///< relative Frobenius error
    Index term_count = 0;
    MergeStatus status = MergeStatus::reduced;
    double cp_median_error = 0.0; ///< relative error of rank-3 ALS, median over seeds
};

Rank3Report rank3_report(const DenseTensor& t, Index cp_seeds = 10);

const char* to_string(MergeStatus status);

} // namespace ttr1
