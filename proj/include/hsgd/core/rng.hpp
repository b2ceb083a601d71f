#pragma once

// Reproducible random streams.
//
// Every random draw in the library goes through Rng so that datasets and
// traces are bit-identical across platforms and can be re-derived from a
// seed in any language:
//
//   * generator   xoshiro256** (Blackman & Vigna reference algorithm)
//   * seeding     the four state words are successive outputs of splitmix64
//                 started at the 64-bit seed
//   * uniform     next_double() = (next_u64() >> 11) * 2^-53, in [0, 1)
//   * integers    uniform_index(n) uses Lemire's multiply-and-reject method
//   * gaussian    Marsaglia polar method; both variates of an accepted pair
//                 are used, the second one cached for the next call
//   * streams     repeat r of a run with master seed s uses seed (s XOR r);
//                 named sub-streams use derive_seed(seed, tag)

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace hsgd {

inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for a named sub-stream: one splitmix64 step over (seed XOR tag).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
    std::uint64_t s = seed ^ tag;
    return splitmix64(s);
}

/// Seed of the PRNG stream used by repeat `repeat_index` of a run.
inline std::uint64_t repeat_stream_seed(std::uint64_t master_seed, std::uint64_t repeat_index) noexcept {
    return master_seed ^ repeat_index;
}

// Sub-stream tags. Values are arbitrary but frozen.
namespace stream_tag {
inline constexpr std::uint64_t source_noise = 0x736f757263650001ULL;  // sine source labels
inline constexpr std::uint64_t model_init = 0x696e697400000002ULL;    // MLP weights
inline constexpr std::uint64_t estimator = 0x6573740000000003ULL;     // diagnostics run inside `run`
}  // namespace stream_tag

class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) { reseed(seed); }

    void reseed(std::uint64_t seed) noexcept {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
        has_spare_ = false;
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
    result_type operator()() noexcept { return next_u64(); }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    double next_double() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * next_double(); }

    /// Unbiased integer in [0, n). n must be positive.
    std::uint64_t uniform_index(std::uint64_t n) noexcept {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    double gaussian() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * next_double() - 1.0;
            v = 2.0 * next_double() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double scale = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * scale;
        has_spare_ = true;
        return u * scale;
    }

    double gaussian(double mean, double stddev) noexcept { return mean + stddev * gaussian(); }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::array<std::uint64_t, 4> s_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Draws minibatches of distinct sample indices.
///
/// Each draw is a partial Fisher-Yates shuffle of a persistent index table:
/// for j = 0..M-1 swap slot j with slot j + uniform_index(N - j) and emit
/// slot j. Any arrangement of the table yields a uniformly random ordered
/// M-subset, so the table is never reset between draws.
class MinibatchSampler {
public:
    explicit MinibatchSampler(std::size_t sample_count) : table_(sample_count) {
        std::iota(table_.begin(), table_.end(), std::size_t{0});
    }

    std::size_t sample_count() const noexcept { return table_.size(); }

    std::span<const std::size_t> draw(Rng& rng, std::size_t batch_size) {
        const std::size_t n = table_.size();
        for (std::size_t j = 0; j < batch_size; ++j) {
            const std::size_t pick = j + static_cast<std::size_t>(rng.uniform_index(n - j));
            std::swap(table_[j], table_[pick]);
        }
        return std::span<const std::size_t>(table_.data(), batch_size);
    }

private:
    std::vector<std::size_t> table_;
};

}  // namespace hsgd
