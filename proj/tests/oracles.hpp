#pragma once

// Test-only reference implementations, kept independent of the library's
// computation paths on purpose: straight loops over multi-indices.

#include <vector>

#include "ttr1/decompose.hpp"
#include "ttr1/tensor.hpp"

namespace oracle {

using ttr1::DenseTensor;
using ttr1::Index;
using ttr1::Shape;

/// The 3x4x2 worked example: entry (i1,i2,i3) = i1 + 3(i2-1) + 12(i3-1),
/// 1-based, i.e. the values 1..24 in column-major order.
inline DenseTensor running_example() {
    std::vector<double> data(24);
    for (std::size_t i = 0; i < 24; ++i) data[i] = static_cast<double>(i + 1);
    return {Shape{3, 4, 2}, std::move(data)};
}

/// The 5x5x5 tensor with entries 1/(i1+i2+i3), 1-based indices.
inline DenseTensor inverse_sum_tensor(Index n = 5) {
    return DenseTensor::from_function(Shape{n, n, n}, [](std::span<const Index> idx) {
        return 1.0 / static_cast<double>(idx[0] + idx[1] + idx[2] + 3);
    });
}

/// Direct elementwise sum, no vector kernels.
inline double inner_product_loop(const DenseTensor& a, const DenseTensor& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) {
        acc += a.data()[i] * b.data()[i];
    }
    return acc;
}

/// Walk every output multi-index and contract mode `mode` explicitly.
inline DenseTensor mode_product_loop(const DenseTensor& t, const Eigen::MatrixXd& m,
                                     Index mode) {
    std::vector<Index> out_dims = t.shape().dims();
    out_dims[static_cast<std::size_t>(mode)] = m.rows();
    const Shape out_shape{out_dims};
    return DenseTensor::from_function(out_shape, [&](std::span<const Index> idx) {
        std::vector<Index> src(idx.begin(), idx.end());
        double acc = 0.0;
        for (Index i = 0; i < t.shape().dim(mode); ++i) {
            src[static_cast<std::size_t>(mode)] = i;
            acc += m(idx[static_cast<std::size_t>(mode)], i) * t(src);
        }
        return acc;
    });
}

/// Entry-by-entry outer product.
inline DenseTensor outer_product_loop(double w, const std::vector<Eigen::VectorXd>& vs) {
    std::vector<Index> dims;
    for (const auto& v : vs) dims.push_back(v.size());
    return DenseTensor::from_function(Shape{dims}, [&](std::span<const Index> idx) {
        double acc = w;
        for (std::size_t k = 0; k < vs.size(); ++k) {
            acc *= vs[k][idx[k]];
        }
        return acc;
    });
}

/// Materialize the first R terms and subtract.
inline double truncation_error_direct(const DenseTensor& t, const ttr1::Decomposition& dec,
                                      Index R) {
    return ttr1::frobenius_norm(t - ttr1::reconstruct(dec, R));
}

} // namespace oracle
