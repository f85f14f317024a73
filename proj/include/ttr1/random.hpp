#pragma once

#include <cstdint>
#include <random>

#include "ttr1/tensor.hpp"

namespace ttr1 {

/// Deterministic random stream; the Gaussian variates are produced by
/// Box-Muller on top of mt19937_64 so identical seeds give identical
/// sequences on every platform.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal.
    double gaussian();

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Tensor with i.i.d. N(0, scale^2) entries.
DenseTensor gaussian_tensor(const Shape& shape, std::uint64_t seed, double scale = 1.0);

} // namespace ttr1
