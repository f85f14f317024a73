#include <doctest.h>

#include "oracles.hpp"
#include "ttr1/complement.hpp"
#include "ttr1/random.hpp"
#include "ttr1/rank3.hpp"

using namespace ttr1;

TEST_CASE("one hundred random tensors merge to three terms exactly") {
    std::uint64_t seed = 500;
    int degenerate = 0;
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const DenseTensor t = gaussian_tensor(Shape{2, 2, 2}, seed++);
        const Rank3Result r = construct_rank3(t);
        CHECK(r.terms.size() <= 3);
        if (r.status == MergeStatus::degenerate) {
            ++degenerate;
            continue;
        }
        const double err = frobenius_norm(t - r.materialize(t.shape())) / frobenius_norm(t);
        worst = std::max(worst, err);
    }
    CHECK(degenerate == 0);
    CHECK(worst < 1e-12);
}

TEST_CASE("rank-1 input returns a single term") {
    SeededRng rng(510);
    std::vector<Eigen::VectorXd> vs;
    for (int k = 0; k < 3; ++k) {
        Eigen::VectorXd v(2);
        v << rng.gaussian(), rng.gaussian();
        v.normalize();
        vs.push_back(v);
    }
    const DenseTensor t = outer_product(3.0, vs);
    const Rank3Result r = construct_rank3(t);
    CHECK(r.status == MergeStatus::reduced);
    REQUIRE(r.terms.size() == 1);
    CHECK(r.terms[0].weight == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(frobenius_norm(t - r.materialize(t.shape())) <= 1e-12 * frobenius_norm(t));
}

TEST_CASE("orthogonal rank-2 input stays within three terms and exact") {
    // factor pairs chosen orthogonal per mode
    std::vector<Eigen::VectorXd> a = {Eigen::VectorXd::Unit(2, 0), Eigen::VectorXd::Unit(2, 0),
                                      Eigen::VectorXd::Unit(2, 0)};
    std::vector<Eigen::VectorXd> b = {Eigen::VectorXd::Unit(2, 1), Eigen::VectorXd::Unit(2, 1),
                                      Eigen::VectorXd::Unit(2, 1)};
    const DenseTensor t = outer_product(2.0, a) + outer_product(1.0, b);
    const Rank3Result r = construct_rank3(t);
    CHECK(r.terms.size() <= 3);
    CHECK(frobenius_norm(t - r.materialize(t.shape())) <= 1e-12 * frobenius_norm(t));
}

TEST_CASE("zero tensor gives zero terms") {
    const Rank3Result r = construct_rank3(DenseTensor::zeros(Shape{2, 2, 2}));
    CHECK(r.terms.empty());
    CHECK(r.status == MergeStatus::reduced);
}

TEST_CASE("wrong shape is rejected") {
    CHECK_THROWS_AS(construct_rank3(gaussian_tensor(Shape{2, 2, 3}, 511)), ArgumentError);
}

TEST_CASE("offsetting keeps the table sum unchanged") {
    const DenseTensor t = gaussian_tensor(Shape{2, 2, 2}, 512);
    const Rank3Result r = construct_rank3(t);
    REQUIRE(r.status == MergeStatus::merged);
    REQUIRE(r.plan.has_value());
    REQUIRE(r.plan->order == MergeOrder::second_then_third);

    const OuterProductTable table = build_table(t);
    const BranchExpansion& b0 = table.branches[0];
    const BranchExpansion& b1 = table.branches[1];
    const double s1 = b0.sigma * b0.sigmas[0];
    const double s2 = b0.sigma * b0.sigmas[1];

    // move alpha times the zero column (u1, u12, v11) into the first active
    // column and out of the second; the branch sum must not move
    const DenseTensor before =
        outer_product(s1, {b0.u, b0.u_set.col(0), b0.v_set.col(0)}) +
        outer_product(s2, {b0.u, b0.u_set.col(1), b0.v_set.col(1)});
    const double alpha = r.plan->alpha;
    const DenseTensor col1 =
        outer_product(1.0, {b0.u, Eigen::VectorXd(s1 * b0.u_set.col(0) + alpha * b0.u_set.col(1)),
                            b0.v_set.col(0)});
    const DenseTensor col4 =
        outer_product(1.0, {b0.u, b0.u_set.col(1),
                            Eigen::VectorXd(s2 * b0.v_set.col(1) - alpha * b0.v_set.col(0))});
    CHECK(frobenius_norm(before - (col1 + col4)) <= 1e-13 * frobenius_norm(before));

    // the aligned column is parallel to the other branch's second-mode vector
    const Eigen::VectorXd aligned = s1 * b0.u_set.col(0) + alpha * b0.u_set.col(1);
    const Eigen::VectorXd target = r.plan->beta * b1.u_set.col(0);
    CHECK((aligned - target).norm() <= 1e-12 * std::max(1.0, aligned.norm()));
}

TEST_CASE("report compares against the rank-3 als baseline") {
    const DenseTensor t = gaussian_tensor(Shape{2, 2, 2}, 513);
    const Rank3Report rep = rank3_report(t, 5);
    CHECK(rep.term_count <= 3);
    CHECK(rep.construction_error < 1e-12);
    CHECK(rep.construction_error <= rep.cp_median_error);

    const Rank3Report zero = rank3_report(DenseTensor::zeros(Shape{2, 2, 2}), 3);
    CHECK(zero.term_count == 0);
    CHECK(zero.construction_error == 0.0);
}

TEST_CASE("report is deterministic") {
    const DenseTensor t = gaussian_tensor(Shape{2, 2, 2}, 514);
    const Rank3Report a = rank3_report(t, 4);
    const Rank3Report b = rank3_report(t, 4);
    CHECK(a.construction_error == b.construction_error);
    CHECK(a.cp_median_error == b.cp_median_error);
    CHECK(a.term_count == b.term_count);
}
