#pragma once

// Random streams and discrete sampling.
//
// Streams are std::mt19937_64 engines whose seeds are derived from a root seed and a
// tuple of counters with SplitMix64 mixing, so any (year, replicate) task always sees
// the same stream no matter which worker runs it.

#include "streakline/core.hpp"

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

namespace streakline {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> counters) noexcept {
    std::uint64_t h = splitmix64(root);
    for (std::uint64_t c : counters) h = splitmix64(h ^ splitmix64(c + 0x632BE59BD9B4E019ULL));
    return h;
}

inline Rng make_stream(std::uint64_t root, std::initializer_list<std::uint64_t> counters) {
    return Rng(derive_seed(root, counters));
}

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, n) by rejection; independent of the standard library's
/// distribution implementations so results are stable across toolchains.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
}

template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        std::swap(items[i - 1], items[uniform_index(rng, i)]);
    }
}

/// Finite distribution over 0..size-1 sampled by inverse CDF.
class DiscreteDistribution {
public:
    DiscreteDistribution() = default;

    explicit DiscreteDistribution(std::span<const double> weights) : probs_(weights.begin(), weights.end()) {
        double total = 0.0;
        for (double w : probs_) {
            if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorKind::InvalidParams, "negative or non-finite weight");
            total += w;
        }
        if (!(total > 0.0)) throw Error(ErrorKind::InvalidParams, "distribution has no mass");
        cumulative_.resize(probs_.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < probs_.size(); ++i) {
            probs_[i] /= total;
            acc += probs_[i];
            cumulative_[i] = acc;
        }
        // Close the table at the last cell with mass so rounding never selects an empty tail cell.
        std::size_t last = probs_.size() - 1;
        while (probs_[last] == 0.0) --last;
        std::fill(cumulative_.begin() + static_cast<std::ptrdiff_t>(last), cumulative_.end(), 1.0);
    }

    [[nodiscard]] std::size_t sample(Rng& rng) const {
        const double u = uniform01(rng);
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        auto idx = static_cast<std::size_t>(it - cumulative_.begin());
        return std::min(idx, probs_.size() - 1);
    }

    [[nodiscard]] double prob(std::size_t i) const noexcept { return i < probs_.size() ? probs_[i] : 0.0; }
    [[nodiscard]] std::size_t size() const noexcept { return probs_.size(); }
    [[nodiscard]] const std::vector<double>& probs() const noexcept { return probs_; }

private:
    std::vector<double> probs_;
    std::vector<double> cumulative_;
};

}  // namespace streakline
