#include "ttr1/rank3.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>

#include "ttr1/complement.hpp"
#include "ttr1/cp_als.hpp"

namespace ttr1 {

namespace {

struct BranchPair {
    double s1, s2; // composite weights sigma_i * sigma_ij of the two leaves
    Eigen::VectorXd u;        // level-1 vector
    Eigen::VectorXd u1, u2;   // second-mode vectors
    Eigen::VectorXd v1, v2;   // third-mode vectors
};

bool solve2(const Eigen::Vector2d& c0, const Eigen::Vector2d& c1,
            const Eigen::Vector2d& rhs, double& x0, double& x1) {
    const double det = c0[0] * c1[1] - c0[1] * c1[0];
    if (std::abs(det) < 1e-12) return false;
    x0 = (rhs[0] * c1[1] - rhs[1] * c1[0]) / det;
    x1 = (c0[0] * rhs[1] - c0[1] * rhs[0]) / det;
    return true;
}

RankOneTerm normalized_term(Eigen::VectorXd a, Eigen::VectorXd b, Eigen::VectorXd c) {
    double w = 1.0;
    for (Eigen::VectorXd* v : {&a, &b, &c}) {
        const double n = v->norm();
        w *= n;
        if (n > 0.0) *v /= n;
    }
    return {w, {std::move(a), std::move(b), std::move(c)}};
}

} // namespace

DenseTensor Rank3Result::materialize(const Shape& shape) const {
    DenseTensor sum = DenseTensor::zeros(shape);
    for (const RankOneTerm& term : terms) {
        sum = sum + term.materialize();
    }
    return sum;
}

Rank3Result construct_rank3(const DenseTensor& t) {
    if (t.shape() != Shape{2, 2, 2}) {
        throw ArgumentError("construct_rank3: tensor must be 2x2x2");
    }
    const OuterProductTable table = build_table(t);

    BranchPair b[2];
    for (Index i = 0; i < 2; ++i) {
        const BranchExpansion& br = table.branches[static_cast<std::size_t>(i)];
        b[i] = {br.sigma * br.sigmas[0], br.sigma * br.sigmas[1], br.u,
                br.u_set.col(0),          br.u_set.col(1),        br.v_set.col(0),
                br.v_set.col(1)};
    }

    // treat weights below the numerical threshold as exact zeros
    double wmax = 0.0;
    for (const TableColumn& c : table.columns) wmax = std::max(wmax, c.weight);
    const double threshold = 4.0 * DBL_EPSILON * wmax;
    const bool act[4] = {b[0].s1 > threshold, b[0].s2 > threshold,
                         b[1].s1 > threshold, b[1].s2 > threshold};
    const int n_active = act[0] + act[1] + act[2] + act[3];

    Rank3Result result;
    if (n_active < 4) {
        result.status = MergeStatus::reduced;
        const RankOneTerm tree_terms[4] = {
            {b[0].s1, {b[0].u, b[0].u1, b[0].v1}},
            {b[0].s2, {b[0].u, b[0].u2, b[0].v2}},
            {b[1].s1, {b[1].u, b[1].u1, b[1].v1}},
            {b[1].s2, {b[1].u, b[1].u2, b[1].v2}},
        };
        for (int i = 0; i < 4; ++i) {
            if (act[i]) result.terms.push_back(tree_terms[i]);
        }
        return result;
    }

    const double s1 = b[0].s1, s2 = b[0].s2, s3 = b[1].s1, s4 = b[1].s2;
    MergePlan plan;

    // align the second mode of the two dominant columns, then the third
    plan.order = MergeOrder::second_then_third;
    if (solve2(-b[0].u2, b[1].u1, s1 * b[0].u1, plan.alpha, plan.beta) &&
        solve2(-b[1].v2, b[0].v1, s3 * b[1].v1, plan.gamma, plan.delta)) {
        result.status = MergeStatus::merged;
        result.plan = plan;
        result.terms = {
            normalized_term(plan.beta * b[0].u + plan.delta * b[1].u, b[1].u1, b[0].v1),
            normalized_term(b[0].u, b[0].u2, s2 * b[0].v2 - plan.alpha * b[0].v1),
            normalized_term(b[1].u, s4 * b[1].u2 - plan.gamma * b[1].u1, b[1].v2),
        };
        return result;
    }

    // alternate order: align the third mode first
    plan = MergePlan{};
    plan.order = MergeOrder::third_then_second;
    if (solve2(-b[0].v2, b[1].v1, s1 * b[0].v1, plan.alpha, plan.beta) &&
        solve2(-b[1].u2, b[0].u1, s3 * b[1].u1, plan.gamma, plan.delta)) {
        result.status = MergeStatus::merged;
        result.plan = plan;
        result.terms = {
            normalized_term(plan.beta * b[0].u + plan.delta * b[1].u, b[0].u1, b[1].v1),
            normalized_term(b[0].u, s2 * b[0].u2 - plan.alpha * b[0].u1, b[0].v2),
            normalized_term(b[1].u, b[1].u2, s4 * b[1].v2 - plan.gamma * b[1].v1),
        };
        return result;
    }

    result.status = MergeStatus::degenerate;
    result.terms = {
        {s1, {b[0].u, b[0].u1, b[0].v1}},
        {s2, {b[0].u, b[0].u2, b[0].v2}},
        {s3, {b[1].u, b[1].u1, b[1].v1}},
        {s4, {b[1].u, b[1].u2, b[1].v2}},
    };
    return result;
}

Rank3Report rank3_report(const DenseTensor& t, Index cp_seeds) {
    Rank3Report report;
    const Rank3Result r3 = construct_rank3(t);
    report.term_count = static_cast<Index>(r3.terms.size());
    report.status = r3.status;

    const double tnorm = frobenius_norm(t);
    if (tnorm > 0.0) {
        report.construction_error =
            frobenius_norm(t - r3.materialize(t.shape())) / tnorm;

        std::vector<double> errs;
        for (Index seed = 1; seed <= cp_seeds; ++seed) {
            const CpDecomposition cp =
                cp_als(t, 3, static_cast<std::uint64_t>(seed), 100, 1e-6);
            errs.push_back(cp_error(t, cp) / tnorm);
        }
        std::sort(errs.begin(), errs.end());
        report.cp_median_error = errs[errs.size() / 2];
    }
    return report;
}

const char* to_string(MergeStatus status) {
    switch (status) {
    case MergeStatus::merged: return "merged";
    case MergeStatus::reduced: return "reduced";
    case MergeStatus::degenerate: return "merge-degenerate";
    }
    return "unknown";
}

} // namespace ttr1
