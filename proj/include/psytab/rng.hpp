#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "psytab/errors.hpp"

namespace psytab {

// Deterministic randomness helpers. std::mt19937_64 output is pinned by the
// standard, and all derivations below avoid std::*_distribution (whose
// algorithms are implementation-defined), so streams are reproducible across
// standard libraries, not just across runs.

/// RNG stream keyed by (seed, salt words). Same key, same stream, anywhere.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(a),    static_cast<std::uint32_t>(a >> 32),
        static_cast<std::uint32_t>(b),    static_cast<std::uint32_t>(b >> 32)};
    return std::mt19937_64(seq);
}

/// Uniform double in [0, 1) with 53 random bits.
inline double canonical(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform index in [0, n).
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    if (n == 0) throw Error(errc::invalid_argument, "uniform_index: n must be positive");
    auto idx = static_cast<std::size_t>(canonical(rng) * static_cast<double>(n));
    return idx < n ? idx : n - 1;
}

/// Index drawn from (possibly unnormalized) nonnegative weights; empty = uniform over n.
inline std::size_t weighted_index(std::mt19937_64& rng, std::span<const double> weights,
                                  std::size_t n) {
    if (weights.empty()) return uniform_index(rng, n);
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw Error(errc::invalid_argument, "weighted_index: negative weight");
        total += w;
    }
    if (total <= 0.0) throw Error(errc::invalid_argument, "weighted_index: weights sum to zero");
    double u = canonical(rng) * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return weights.size() - 1;
}

/// In-place Fisher-Yates shuffle driven by canonical().
template <typename T>
void shuffle(std::vector<T>& values, std::mt19937_64& rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        std::size_t j = uniform_index(rng, i);
        std::swap(values[i - 1], values[j]);
    }
}

/// n indices drawn with replacement from [0, n_source).
inline std::vector<std::size_t> sample_indices_with_replacement(std::mt19937_64& rng,
                                                                std::size_t n_source,
                                                                std::size_t n_draws) {
    std::vector<std::size_t> idx(n_draws);
    for (auto& i : idx) i = uniform_index(rng, n_source);
    return idx;
}

}  // namespace psytab
