#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "ttr1/decompose.hpp"
#include "ttr1/random.hpp"
#include "ttr1/svd.hpp"

using namespace ttr1;

namespace {

/// Pairwise term inner products via the per-mode dot identity.
double max_pairwise_inner(const Decomposition& dec) {
    double worst = 0.0;
    for (std::size_t i = 0; i < dec.terms.size(); ++i) {
        for (std::size_t j = i + 1; j < dec.terms.size(); ++j) {
            double p = 1.0;
            for (std::size_t k = 0; k < dec.terms[i].mode_vectors.size(); ++k) {
                p *= dec.terms[i].mode_vectors[k].dot(dec.terms[j].mode_vectors[k]);
            }
            worst = std::max(worst, std::abs(p));
        }
    }
    return worst;
}

double parseval_gap(const DenseTensor& t, const Decomposition& dec) {
    double sum = 0.0;
    for (const Term& term : dec.terms) sum += term.weight * term.weight;
    const double n2 = frobenius_norm(t) * frobenius_norm(t);
    return std::abs(sum - n2) / n2;
}

} // namespace

TEST_CASE("worked example: weights, counts, reconstruction") {
    const DenseTensor a = oracle::running_example();
    const Decomposition dec = decompose(a);

    REQUIRE(dec.terms.size() == 6);
    CHECK(dec.svd_count == 4);
    CHECK(dec.terms[0].weight == doctest::Approx(69.6306).epsilon(2e-5));
    CHECK(dec.terms[1].weight == doctest::Approx(6.9190).epsilon(2e-4));
    CHECK(dec.terms[2].weight == doctest::Approx(1.8036).epsilon(2e-4));
    CHECK(dec.terms[3].weight == doctest::Approx(0.6729).epsilon(2e-3));
    CHECK(dec.terms[4].weight < 1e-12);
    CHECK(dec.terms[5].weight < 1e-12);

    CHECK(frobenius_norm(a - reconstruct(dec)) <= 1e-12 * frobenius_norm(a));
    CHECK(frobenius_norm(reconstruct(dec, 0)) == 0.0);
    CHECK(oracle::truncation_error_direct(a, dec, 4) < 1e-13);
}

TEST_CASE("worked example under permuted axis orders") {
    const DenseTensor a = oracle::running_example();

    SUBCASE("(i2,i3,i1) has 8 terms") {
        const Decomposition dec = decompose(a, IndexPermutation{{1, 2, 0}});
        REQUIRE(dec.terms.size() == 8);
        CHECK(dec.terms[0].weight == doctest::Approx(69.6306).epsilon(2e-5));
        CHECK(dec.terms[1].weight == doctest::Approx(6.9551).epsilon(2e-4));
        CHECK(dec.terms[2].weight == doctest::Approx(1.6108).epsilon(2e-4));
        CHECK(dec.terms[3].weight == doctest::Approx(0.7781).epsilon(2e-3));
        // reconstruct maps back to the original axes
        CHECK(frobenius_norm(a - reconstruct(dec)) <= 1e-12 * frobenius_norm(a));
    }

    SUBCASE("(i3,i1,i2) has 6 terms") {
        const Decomposition dec = decompose(a, IndexPermutation{{2, 0, 1}});
        REQUIRE(dec.terms.size() == 6);
        CHECK(dec.terms[0].weight == doctest::Approx(69.6306).epsilon(2e-5));
        CHECK(dec.terms[1].weight == doctest::Approx(6.9567).epsilon(2e-4));
        CHECK(dec.terms[2].weight == doctest::Approx(1.6010).epsilon(2e-4));
        CHECK(dec.terms[3].weight == doctest::Approx(0.7840).epsilon(2e-3));
    }
}

TEST_CASE("rank-1 input gives exactly one significant term") {
    SeededRng rng(7);
    std::vector<Eigen::VectorXd> vs;
    for (Index n : {3, 4, 2}) {
        Eigen::VectorXd v(n);
        for (Index i = 0; i < n; ++i) v[i] = rng.gaussian();
        v.normalize();
        vs.push_back(v);
    }
    const Decomposition dec = decompose(outer_product(5.0, vs));
    CHECK(dec.terms[0].weight == doctest::Approx(5.0).epsilon(1e-12));
    for (std::size_t i = 1; i < dec.terms.size(); ++i) {
        CHECK(dec.terms[i].weight < 1e-12);
    }
}

TEST_CASE("a 2x2x2x2x2 tensor always has 16 terms") {
    const DenseTensor t = gaussian_tensor(Shape{2, 2, 2, 2, 2}, 71);
    const Decomposition dec = decompose(t);
    CHECK(dec.terms.size() == 16);
    CHECK(dec.svd_count == 15);
    CHECK(frobenius_norm(t - reconstruct(dec)) <= 1e-12 * frobenius_norm(t));
}

TEST_CASE("order below 2 is rejected") {
    const DenseTensor v(Shape{4}, {1, 2, 3, 4});
    CHECK_THROWS_AS(decompose(v), ArgumentError);
}

TEST_CASE("matrix input reproduces its singular values") {
    const DenseTensor t = gaussian_tensor(Shape{5, 3}, 72);
    const Decomposition dec = decompose(t);
    const MatrixSvd ref = svd_econ(reshape_to_matrix(t, 1));
    REQUIRE(dec.terms.size() == 3);
    for (Index i = 0; i < 3; ++i) {
        CHECK(dec.terms[static_cast<std::size_t>(i)].weight ==
              doctest::Approx(ref.s[i]).epsilon(1e-12));
    }
}

TEST_CASE("truncation: errors, tolerance rule, rank gap") {
    const DenseTensor a = oracle::running_example();
    const Decomposition dec = decompose(a);

    SUBCASE("tail errors match the worked example table") {
        CHECK(approximation_error(dec, 1) == doctest::Approx(7.2).epsilon(0.01));
        CHECK(approximation_error(dec, 2) == doctest::Approx(1.9).epsilon(0.02));
        CHECK(approximation_error(dec, 3) == doctest::Approx(0.7).epsilon(0.05));
        CHECK(approximation_error(dec, 4) < 1e-12);
        CHECK(approximation_error(dec, static_cast<Index>(dec.terms.size())) == 0.0);
    }

    SUBCASE("tail error equals the direct subtraction oracle for every R") {
        const DenseTensor t = gaussian_tensor(Shape{4, 3, 3}, 73);
        const Decomposition d = decompose(t);
        for (Index r = 0; r <= static_cast<Index>(d.terms.size()); ++r) {
            CHECK(std::abs(approximation_error(d, r) -
                           oracle::truncation_error_direct(t, d, r)) <=
                  1e-10 * frobenius_norm(t));
        }
    }

    SUBCASE("tolerance rule keeps exactly the terms above eps") {
        const DenseTensor t = gaussian_tensor(Shape{4, 3, 3}, 74);
        const Decomposition d = decompose(t);
        for (double eps : {1e-3, 0.5, 2.0, 100.0}) {
            const Index r = truncate_to_tolerance(d, eps);
            if (r > 0) CHECK(d.terms[static_cast<std::size_t>(r - 1)].weight > eps);
            if (r < static_cast<Index>(d.terms.size())) {
                CHECK(d.terms[static_cast<std::size_t>(r)].weight <= eps);
            }
        }
        CHECK(truncate_to_tolerance(d, frobenius_norm(t)) == 0);
        CHECK_THROWS_AS(truncate_to_tolerance(d, 0.0), ArgumentError);
    }

    SUBCASE("rank gap") {
        CHECK(approxi_rank_gap(dec, 4) >= 1e13);
        CHECK_THROWS_AS(approxi_rank_gap(dec, 0), ArgumentError);
        CHECK_THROWS_AS(approxi_rank_gap(dec, 6), ArgumentError);
    }

    SUBCASE("reconstruct rejects out-of-range R") {
        CHECK_THROWS_AS(reconstruct(dec, 7), ArgumentError);
    }
}

TEST_CASE("smoothly decaying example: 17 terms at 1e-6 and gap 1.31") {
    const DenseTensor t = oracle::inverse_sum_tensor();
    const Decomposition dec = decompose(t);
    REQUIRE(dec.terms.size() == 25);
    CHECK(truncate_to_tolerance(dec, 1e-6) == 17);
    CHECK(approxi_rank_gap(dec, 17) == doctest::Approx(1.31).epsilon(0.04));
    CHECK(dec.terms[15].weight == doctest::Approx(3.18e-6).epsilon(0.01));
    CHECK(dec.terms[16].weight == doctest::Approx(1.18e-6).epsilon(0.01));
    CHECK(dec.terms[17].weight == doctest::Approx(9.00e-7).epsilon(0.01));
}

TEST_CASE("counting formulas") {
    CHECK(term_count_bound(Shape{3, 4, 2}) == 6);
    CHECK(term_count_bound(Shape{4, 2, 3}) == 8);
    CHECK(term_count_bound(Shape{3, 3, 3, 3}) == 27);
    CHECK(svd_count_bound(Shape{3, 4, 2}) == 4);
    CHECK(svd_count_bound(Shape{5, 7}) == 1);
    CHECK(svd_count_bound(Shape{2, 2, 2, 2, 2}) == 15);
    CHECK_THROWS_AS(term_count_bound(Shape{4}), ArgumentError);
}

TEST_CASE("numerical rank") {
    const DenseTensor a = oracle::running_example();
    const Decomposition dec = decompose(a);
    CHECK(numerical_rank(dec) == 4);

    const Decomposition zero = decompose(DenseTensor::zeros(Shape{3, 3, 2}));
    CHECK(numerical_rank(zero) == 0);

    // one deflation step, rank judged by the original threshold
    const DenseTensor deflated = a - dec.terms[0].materialize();
    const Decomposition dec1 = decompose(deflated);
    CHECK(numerical_rank(dec1, default_rank_threshold(dec)) == 4);
}

TEST_CASE("properties over a small random ensemble") {
    const std::vector<Shape> shapes = {Shape{3, 4, 2}, Shape{5, 4, 3, 2}, Shape{2, 2, 2},
                                       Shape{4, 4, 4}, Shape{3, 4, 2, 2}};
    std::uint64_t seed = 1000;
    for (const Shape& shape : shapes) {
        for (int rep = 0; rep < 4; ++rep) {
            const DenseTensor t = gaussian_tensor(shape, seed++);
            const Decomposition dec = decompose(t);

            CHECK(static_cast<Index>(dec.terms.size()) == term_count_bound(shape));
            CHECK(dec.svd_count == svd_count_bound(shape));
            CHECK(max_pairwise_inner(dec) <= 1e-12);
            CHECK(parseval_gap(t, dec) <= 1e-10);
            CHECK(frobenius_norm(t - reconstruct(dec)) <= 1e-12 * frobenius_norm(t));

            // every node sigma beyond level 1 is a singular value of a
            // reshaped unit vector
            for (const Term& term : dec.terms) {
                for (std::size_t lvl = 1; lvl < term.path_sigmas.size(); ++lvl) {
                    CHECK(term.path_sigmas[lvl] <= 1.0 + 1e-12);
                }
                double prod = 1.0;
                for (double s : term.path_sigmas) prod *= s;
                CHECK(term.weight == doctest::Approx(prod).epsilon(1e-12));
                // unit frobenius norm of the outer factor
                double unit = 1.0;
                for (const auto& v : term.mode_vectors) unit *= v.norm();
                CHECK(unit == doctest::Approx(1.0).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("orthogonality via brute-force materialization") {
    const DenseTensor t = gaussian_tensor(Shape{3, 4, 2, 2}, 2000);
    const Decomposition dec = decompose(t);
    for (std::size_t i = 0; i < dec.terms.size(); ++i) {
        RankOneTerm unit_i{1.0, dec.terms[i].mode_vectors};
        const DenseTensor ti = unit_i.materialize();
        for (std::size_t j = i + 1; j < dec.terms.size(); ++j) {
            RankOneTerm unit_j{1.0, dec.terms[j].mode_vectors};
            CHECK(std::abs(inner_product(ti, unit_j.materialize())) <= 1e-12);
        }
    }
}

TEST_CASE("determinism of repeated decomposition") {
    const DenseTensor t = gaussian_tensor(Shape{4, 3, 3}, 3000);
    const Decomposition a = decompose(t);
    const Decomposition b = decompose(t);
    REQUIRE(a.terms.size() == b.terms.size());
    for (std::size_t i = 0; i < a.terms.size(); ++i) {
        CHECK(a.terms[i].weight == b.terms[i].weight);
        CHECK(a.terms[i].path == b.terms[i].path);
        for (std::size_t k = 0; k < a.terms[i].mode_vectors.size(); ++k) {
            CHECK((a.terms[i].mode_vectors[k] - b.terms[i].mode_vectors[k]).norm() == 0.0);
        }
    }
}

TEST_CASE("pruned decomposition") {
    SUBCASE("the smooth 5x5x5 example cannot drop any first-level branch at 1e-6") {
        const DenseTensor t = oracle::inverse_sum_tensor();
        const Decomposition dec = decompose_pruned(t, 1e-6);
        CHECK(dec.svd_count == 6);
        CHECK(dec.pruned_leaf_count == 0);
        CHECK(dec.terms.size() == 25);
    }

    SUBCASE("a huge tolerance prunes almost everything and still meets the bound") {
        const DenseTensor t = gaussian_tensor(Shape{3, 4, 2}, 4000);
        const double eps = 2.0 * frobenius_norm(t);
        const Decomposition dec = decompose_pruned(t, eps);
        CHECK(frobenius_norm(t - reconstruct(dec)) <= eps);
        CHECK(dec.svd_count <= svd_count_bound(t.shape()));
    }

    SUBCASE("error stays within eps and svds shrink on random 4-way input") {
        std::uint64_t seed = 4100;
        for (int rep = 0; rep < 100; ++rep) {
            const DenseTensor t = gaussian_tensor(Shape{3, 3, 3, 3}, seed++);
            const double eps = 0.3 * frobenius_norm(t);
            const Decomposition dec = decompose_pruned(t, eps);
            CHECK(frobenius_norm(t - reconstruct(dec)) <= eps);
            CHECK(dec.svd_count <= svd_count_bound(t.shape()));
            CHECK(dec.prune_tolerance == eps);
        }
    }

    SUBCASE("non-positive tolerance is rejected") {
        const DenseTensor t = gaussian_tensor(Shape{2, 2, 2}, 4200);
        CHECK_THROWS_AS(decompose_pruned(t, 0.0), ArgumentError);
        CHECK_THROWS_AS(decompose_pruned(t, -1.0), ArgumentError);
    }
}
