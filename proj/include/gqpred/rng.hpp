#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

namespace gqpred {
namespace sim {

namespace detail {

/// splitmix64 output function (Steele, Lea, Flood 2014 / Vigna).
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    return splitmix64_mix(state);
}

}  // namespace detail

/// Counter-derived random stream: the pair (seed, stream) deterministically
/// fixes the whole sequence, and distinct streams are statistically
/// independent for practical purposes. Per-replicate streams keyed by the
/// replicate index make Monte Carlo results independent of worker count and
/// scheduling: replicate r always consumes exactly the draws of stream r.
class StreamRng {
public:
    StreamRng(std::uint64_t seed, std::uint64_t stream) {
        // Two mixing rounds interleaving seed and stream; either argument
        // flipping one bit changes the state avalanche-style.
        std::uint64_t s = detail::splitmix64_mix(seed + 0x9E3779B97F4A7C15ULL);
        s ^= detail::splitmix64_mix(stream + 0xD1B54A32D192ED03ULL);
        state_ = detail::splitmix64_mix(s + 0x2545F4914F6CDD1DULL);
    }

    std::uint64_t next_u64() { return detail::splitmix64_next(state_); }

    /// Uniform in [0, 1).
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; draws are produced in pairs and the
    /// spare is cached so one replicate's draw count stays deterministic.
    double next_normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        // u1 in (0, 1] so the log is finite.
        const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
        const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * M_PI * u2;
        spare_ = r * std::sin(ang);
        has_spare_ = true;
        return r * std::cos(ang);
    }

    /// Circularly symmetric complex normal: mean + independent real and
    /// imaginary parts each of the given per-component variance.
    std::complex<double> next_complex_normal(std::complex<double> mean, double component_variance) {
        if (!(component_variance >= 0.0)) {
            throw std::invalid_argument("next_complex_normal: variance must be nonnegative");
        }
        const double s = std::sqrt(component_variance);
        const double re = next_normal();
        const double im = next_normal();
        return mean + std::complex<double>(s * re, s * im);
    }

private:
    std::uint64_t state_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace sim
}  // namespace gqpred
