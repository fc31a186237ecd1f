#include "gges/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace gges {

std::uint64_t Rng::below(std::uint64_t bound) {
    // Largest multiple of bound that fits; draws at or above it are rejected.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    for (;;) {
        std::uint64_t x = next();
        if (x < limit) return x % bound;
    }
}

double Rng::normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace gges
