#ifndef GGES_RANDOM_HPP
#define GGES_RANDOM_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace gges {

/// Seeded generator with a fixed, implementation-independent output stream.
///
/// The engine is std::mt19937_64, whose sequence the standard pins down. The
/// library's own distributions are used on top of it because the standard
/// distributions differ between standard-library vendors:
///   uniform()    = (next() >> 11) * 2^-53, in [0, 1)
///   below(k)     = rejection sampling on next() to avoid modulo bias
///   normal()     = Box-Muller, cosine branch only, one normal per call
///   shuffle(v)   = Fisher-Yates from the back, swapping i with below(i + 1)
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double low, double high) { return low + (high - low) * uniform(); }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    double normal();

    bool bernoulli(double p) { return uniform() < p; }

    template <typename T>
    void shuffle(std::vector<T> &values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            auto j = static_cast<std::size_t>(below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace gges

#endif  // GGES_RANDOM_HPP
