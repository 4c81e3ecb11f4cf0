#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "gqpred/bayes.hpp"
#include "gqpred/complex_matrix.hpp"
#include "gqpred/gauss_hermite.hpp"
#include "gqpred/rel_entropy.hpp"
#include "gqpred/states.hpp"

namespace gqpred {
namespace predict {

/// Coefficients of the m-mode Bayesian predictive outcome density.
/// With posterior precision 1/delta2 and per-mode precision 2/N:
///   1/delta2_tilde = 1/delta2 + m 2/N,
///   p = (2/N) delta2_tilde,   q = (1/delta2) delta2_tilde.
/// Invariant: m p + q = 1 (the weights (p, ..., p, q) are convex).
struct PredictiveCoefficients {
    int m = 1;
    cplx theta_bar{0.0, 0.0};
    double delta2 = 0.0;
    double delta2_tilde = 0.0;
    double p = 0.0;
    double q = 0.0;
};

inline PredictiveCoefficients predictive_coefficients(const PosteriorParams& post, int m) {
    if (m < 1) throw std::invalid_argument("predictive_coefficients: m must be >= 1");
    if (!(post.delta2 > 0.0)) {
        throw std::invalid_argument("predictive_coefficients: posterior delta2 must be positive");
    }
    if (!(post.photon_number > 0.0)) {
        throw std::invalid_argument("predictive_coefficients: photon number must be positive");
    }
    PredictiveCoefficients co;
    co.m = m;
    co.theta_bar = post.theta_bar;
    co.delta2 = post.delta2;
    const double lam_mode = 2.0 / post.photon_number;
    const double prec_post = 1.0 / post.delta2;
    const double denom = prec_post + m * lam_mode;
    co.delta2_tilde = 1.0 / denom;
    co.p = lam_mode / denom;
    co.q = prec_post / denom;
    const double convex = m * co.p + co.q;
    if (std::abs(convex - 1.0) > 1e-12) {
        throw std::logic_error("predictive_coefficients: convexity invariant violated, m*p+q = " +
                               std::to_string(convex));
    }
    return co;
}

/// Plug-in predictive: m independent copies of the estimated state.
inline std::vector<qstate::GaussianParams> plugin_predictive(cplx theta_hat, double photon_number,
                                                             int m) {
    if (m < 1) throw std::invalid_argument("plugin_predictive: m must be >= 1");
    if (!(photon_number >= 0.0)) {
        throw std::invalid_argument("plugin_predictive: photon number must be >= 0");
    }
    return std::vector<qstate::GaussianParams>(
        static_cast<std::size_t>(m), qstate::GaussianParams{theta_hat, photon_number});
}

/// Gaussian parameters of the Bayes predictive state reduced to the averaged
/// (centre-of-mass) mode: mean sqrt(m) theta_bar, photon number
/// N + 2 m delta2. The m-mode predictive is unitarily equivalent to this
/// state tensored with m-1 untouched thermal modes, which is what makes
/// m-mode risks computable on a single mode.
inline qstate::GaussianParams predictive_single_mode(const PosteriorParams& post, int m) {
    if (m < 1) throw std::invalid_argument("predictive_single_mode: m must be >= 1");
    return {std::sqrt(static_cast<double>(m)) * post.theta_bar,
            post.photon_number + 2.0 * m * post.delta2};
}

/// Joint heterodyne outcome density of the m-mode Bayes predictive state at
/// beta = (beta_1, ..., beta_m):
///   p(beta | data) = q / (pi N)^m  exp(-B / (2 delta2_tilde)),
///   B = p sum|beta_j|^2 + q |theta_bar|^2 - |p sum beta_j + q theta_bar|^2.
/// B >= 0 because (p,...,p,q) is a convex weight vector. At m = 1 this
/// collapses exactly to the single-mode Gaussian density with per-component
/// variance (N + 2 delta2)/2 around theta_bar.
inline double predictive_joint_pdensity(const PredictiveCoefficients& co,
                                        const std::vector<cplx>& beta, double photon_number) {
    if (static_cast<int>(beta.size()) != co.m) {
        throw std::invalid_argument("predictive_joint_pdensity: beta must have m entries");
    }
    if (!(photon_number > 0.0)) {
        throw std::invalid_argument("predictive_joint_pdensity: photon number must be positive");
    }
    double sum_sq = 0.0;
    cplx sum(0.0, 0.0);
    for (cplx b : beta) {
        sum_sq += std::norm(b);
        sum += b;
    }
    const double b_form =
        co.p * sum_sq + co.q * std::norm(co.theta_bar) - std::norm(co.p * sum + co.q * co.theta_bar);
    if (b_form < -1e-12) {
        throw std::logic_error("predictive_joint_pdensity: quadratic form went negative");
    }
    const double b_clamped = b_form < 0.0 ? 0.0 : b_form;
    return co.q * std::pow(M_PI * photon_number, -co.m) *
           std::exp(-b_clamped / (2.0 * co.delta2_tilde));
}

namespace detail {

/// Mixture over a complex-normal parameter distribution (mean centre,
/// per-component variance var) of m-fold products of displaced thermal
/// states, via a tensorised Gauss-Hermite rule on the two real axes.
/// Node states are built in relaxed-guard mode: far nodes carry negligible
/// weight, and the deliberate truncation shows up in the returned trace
/// deficit rather than as an error.
inline qstate::TruncatedDensityMatrix gaussian_mixture_fock(cplx centre, double var,
                                                            double photon_number, int m,
                                                            int dim_per_mode, int quad_order,
                                                            int max_total_dim) {
    if (m < 1 || m > 3) {
        throw std::invalid_argument("gaussian_mixture_fock: mode count must be in [1, 3]");
    }
    if (dim_per_mode < 2) {
        throw std::invalid_argument("gaussian_mixture_fock: dim_per_mode must be >= 2");
    }
    long long total = 1;
    for (int k = 0; k < m; ++k) total *= dim_per_mode;
    if (total > max_total_dim) {
        throw std::length_error("gaussian_mixture_fock: total dimension " + std::to_string(total) +
                                " (dim_per_mode^" + std::to_string(m) + ") exceeds cap " +
                                std::to_string(max_total_dim));
    }
    if (quad_order < 2) {
        throw std::invalid_argument("gaussian_mixture_fock: quadrature order must be >= 2");
    }

    const linalg::GaussHermiteRule rule = linalg::gauss_hermite(quad_order);
    const double scale = std::sqrt(2.0 * var);

    qstate::TruncatedDensityMatrix out;
    out.dim = static_cast<int>(total);
    out.matrix = linalg::ComplexMatrix(out.dim);
    out.has_factor = false;

    for (int i = 0; i < quad_order; ++i) {
        for (int j = 0; j < quad_order; ++j) {
            const double w = rule.weights[i] * rule.weights[j] / M_PI;
            const cplx theta = centre + scale * cplx(rule.nodes[i], rule.nodes[j]);
            const qstate::TruncatedDensityMatrix single = qstate::gaussian_state_fock(
                {theta, photon_number}, dim_per_mode, Guard::relaxed);
            if (m == 1) {
                out.matrix.add_scaled(w, single.matrix);
            } else {
                qstate::TruncatedDensityMatrix joint = single;
                for (int k = 1; k < m; ++k) {
                    joint = qstate::tensor_product(joint, single, max_total_dim);
                }
                out.matrix.add_scaled(w, joint.matrix);
            }
        }
    }
    out.trace_deficit = 1.0 - linalg::trace(out.matrix).real();
    return out;
}

}  // namespace detail

/// m-mode Bayes predictive density operator on the truncated number basis:
/// the posterior mixture of product states, integral of
/// posterior(theta) rho_theta^{tensor m}. The parameter integral runs over
/// the two real posterior axes by Gauss-Hermite quadrature with exact
/// displaced thermal states at the nodes (the coherent-level inner integral
/// is already folded in analytically), so quadrature error is independent
/// of m. Total dimension dim_per_mode^m is capped; m <= 3.
inline qstate::TruncatedDensityMatrix predictive_joint_fock(const PosteriorParams& post, int m,
                                                            int dim_per_mode, int quad_order = 24,
                                                            int max_total_dim = 4096) {
    if (!(post.delta2 > 0.0)) {
        throw std::invalid_argument("predictive_joint_fock: posterior delta2 must be positive");
    }
    return detail::gaussian_mixture_fock(post.theta_bar, post.delta2, post.photon_number, m,
                                         dim_per_mode, quad_order, max_total_dim);
}

/// Exchangeable prior-mixture state integral prior(theta) rho_theta^{tensor n}
/// for n modes (n in {1, 2}). Requires an informative prior: the flat limit
/// is not normalisable, so there is no such state to build.
inline qstate::TruncatedDensityMatrix exchangeable_state(const PriorParams& prior,
                                                         double photon_number, int n_modes,
                                                         int dim_per_mode, int quad_order = 24,
                                                         int max_total_dim = 4096) {
    if (prior.noninformative) {
        throw std::invalid_argument(
            "exchangeable_state: noninformative prior has no normalisable mixture");
    }
    if (n_modes < 1 || n_modes > 2) {
        throw std::invalid_argument("exchangeable_state: n_modes must be 1 or 2");
    }
    if (!(prior.tau2 > 0.0)) throw std::invalid_argument("exchangeable_state: tau2 must be positive");
    return detail::gaussian_mixture_fock(prior.mean, prior.tau2, photon_number, n_modes,
                                         dim_per_mode, quad_order, max_total_dim);
}

/// Exact per-sample relative entropy from the true m-mode product state to
/// the m-mode Bayes predictive, evaluated through the averaged-mode
/// reduction: all m modes collapse onto one displaced pair
///   D(rho_{sqrt(m) theta, N} || rho_{sqrt(m) theta_bar, N + 2 m delta2}).
inline double reduce_predictive_risk(cplx theta, const PosteriorParams& post, int m) {
    if (m < 1) throw std::invalid_argument("reduce_predictive_risk: m must be >= 1");
    const double root_m = std::sqrt(static_cast<double>(m));
    const qstate::GaussianParams truth{root_m * theta, post.photon_number};
    const qstate::GaussianParams pred = predictive_single_mode(post, m);
    return qstate::rel_entropy_closed(truth, pred);
}

}  // namespace predict
}  // namespace gqpred
