#include "ttr1/random.hpp"

#include <cmath>
#include <numbers>

namespace ttr1 {

double SeededRng::gaussian() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return mag * std::cos(2.0 * std::numbers::pi * u2);
}

DenseTensor gaussian_tensor(const Shape& shape, std::uint64_t seed, double scale) {
    SeededRng rng(seed);
    std::vector<double> data(static_cast<std::size_t>(shape.element_count()));
    for (double& x : data) x = scale * rng.gaussian();
    return {shape, std::move(data)};
}

} // namespace ttr1
