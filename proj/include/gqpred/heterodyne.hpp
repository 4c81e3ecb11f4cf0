#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gqpred/rng.hpp"

namespace gqpred {

using cplx = std::complex<double>;

namespace measure {

/// Outcome density of an ideal heterodyne measurement on a displaced thermal
/// state with mean theta and photon number N:
/// p(alpha | theta) = (1 / (pi (N+1))) exp(-|alpha - theta|^2 / (N+1)).
/// Equivalently: alpha is complex normal around theta with per-component
/// variance (N+1)/2.
inline double heterodyne_likelihood(cplx alpha, cplx theta, double photon_number) {
    if (!(photon_number >= 0.0)) {
        throw std::invalid_argument("heterodyne_likelihood: photon number must be >= 0");
    }
    const double s = photon_number + 1.0;
    return std::exp(-std::norm(alpha - theta) / s) / (M_PI * s);
}

/// A recorded i.i.d. heterodyne sample with enough metadata to reproduce it.
struct HeterodyneSample {
    cplx theta{0.0, 0.0};
    double photon_number = 0.0;
    std::uint64_t seed = 0;
    std::vector<cplx> outcomes;

    int n() const { return static_cast<int>(outcomes.size()); }
};

/// One heterodyne outcome from an existing stream.
inline cplx draw_heterodyne(sim::StreamRng& rng, cplx theta, double photon_number) {
    return rng.next_complex_normal(theta, 0.5 * (photon_number + 1.0));
}

/// n i.i.d. heterodyne outcomes; stream 0 of the given seed.
inline HeterodyneSample sample_heterodyne(cplx theta, double photon_number, int n,
                                          std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_heterodyne: n must be >= 1");
    if (!(photon_number >= 0.0)) {
        throw std::invalid_argument("sample_heterodyne: photon number must be >= 0");
    }
    HeterodyneSample s;
    s.theta = theta;
    s.photon_number = photon_number;
    s.seed = seed;
    s.outcomes.reserve(n);
    sim::StreamRng rng(seed, 0);
    for (int i = 0; i < n; ++i) s.outcomes.push_back(draw_heterodyne(rng, theta, photon_number));
    return s;
}

/// Maximum-likelihood estimate of the mean: the sample average.
inline cplx mle_mean(const std::vector<cplx>& outcomes) {
    if (outcomes.empty()) throw std::invalid_argument("mle_mean: empty sample");
    cplx s(0.0, 0.0);
    for (cplx a : outcomes) s += a;
    return s / static_cast<double>(outcomes.size());
}

}  // namespace measure
}  // namespace gqpred
