#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace gqpred {

using cplx = std::complex<double>;

namespace predict {

/// Conjugate complex-normal prior on the state mean:
/// pi(theta) = (1/(2 pi tau2)) exp(-|theta - mean|^2 / (2 tau2)),
/// i.e. per-component variance tau2. The noninformative flag selects the
/// flat (Lebesgue) limit tau2 -> infinity; mean and tau2 are then ignored.
struct PriorParams {
    cplx mean{0.0, 0.0};
    double tau2 = 1.0;
    bool noninformative = false;
};

/// Gaussian posterior of the mean after n heterodyne outcomes:
/// theta | x ~ complex normal(theta_bar, per-component variance delta2).
/// photon_number and n are carried along because every predictive quantity
/// needs them.
struct PosteriorParams {
    cplx theta_bar{0.0, 0.0};
    double delta2 = 0.0;
    double photon_number = 0.0;
    int n = 0;
};

/// Conjugate update. Each outcome contributes precision 2/(N+1) (heterodyne
/// outcomes have per-component variance (N+1)/2), the prior contributes
/// 1/tau2:
///   1/delta2 = n 2/(N+1) + 1/tau2,
///   theta_bar = delta2 (2/(N+1) sum x_i + mean/tau2).
/// Noninformative: the prior terms drop; the posterior variance is written
/// as (N+1)/(2n) directly so the identity 2 delta2 = (N+1)/n holds exactly
/// in floating point, and theta_bar is exactly the sample average.
inline PosteriorParams posterior_update(const PriorParams& prior, const std::vector<cplx>& outcomes,
                                        double photon_number) {
    if (!(photon_number >= 0.0)) {
        throw std::invalid_argument("posterior_update: photon number must be >= 0");
    }
    const int n = static_cast<int>(outcomes.size());
    if (n < 1) throw std::invalid_argument("posterior_update: at least one outcome required");

    PosteriorParams post;
    post.photon_number = photon_number;
    post.n = n;

    cplx sum(0.0, 0.0);
    for (cplx a : outcomes) sum += a;

    if (prior.noninformative) {
        post.delta2 = (photon_number + 1.0) / (2.0 * n);
        post.theta_bar = sum / static_cast<double>(n);
        return post;
    }
    if (!(prior.tau2 > 0.0)) {
        throw std::invalid_argument("posterior_update: prior tau2 must be positive");
    }
    const double lam = 2.0 / (photon_number + 1.0);
    const double prec = n * lam + 1.0 / prior.tau2;
    post.delta2 = 1.0 / prec;
    post.theta_bar = (lam * sum + prior.mean / prior.tau2) * post.delta2;
    return post;
}

/// Posterior density of the mean parameter at theta.
inline double posterior_density(cplx theta, const PosteriorParams& post) {
    if (!(post.delta2 > 0.0)) throw std::invalid_argument("posterior_density: delta2 must be positive");
    return std::exp(-std::norm(theta - post.theta_bar) / (2.0 * post.delta2)) /
           (2.0 * M_PI * post.delta2);
}

/// Prior density of the mean parameter at theta (informative priors only).
inline double prior_density(cplx theta, const PriorParams& prior) {
    if (prior.noninformative) {
        throw std::invalid_argument("prior_density: noninformative prior has no density");
    }
    if (!(prior.tau2 > 0.0)) throw std::invalid_argument("prior_density: tau2 must be positive");
    return std::exp(-std::norm(theta - prior.mean) / (2.0 * prior.tau2)) / (2.0 * M_PI * prior.tau2);
}

}  // namespace predict
}  // namespace gqpred
