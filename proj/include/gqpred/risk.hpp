#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "gqpred/bayes.hpp"

namespace gqpred {
namespace risk {

using predict::PriorParams;

namespace detail {

/// Posterior per-component variance after n outcomes at photon number N
/// (closed form; does not depend on the data).
inline double posterior_delta2(double photon_number, int n, const PriorParams& prior) {
    if (n < 1) throw std::invalid_argument("risk: n must be >= 1");
    if (!(photon_number > 0.0)) throw std::invalid_argument("risk: photon number must be positive");
    if (prior.noninformative) {
        return (photon_number + 1.0) / (2.0 * n);
    }
    if (!(prior.tau2 > 0.0)) throw std::invalid_argument("risk: prior tau2 must be positive");
    return 1.0 / (n * 2.0 / (photon_number + 1.0) + 1.0 / prior.tau2);
}

}  // namespace detail

/// Average relative-entropy risk of the plug-in strategy (estimate the mean
/// by the sample average, predict the corresponding product state):
///   R_plugin = (m/n) (N+1) log((N+1)/N).
/// Constant in the prior and in theta.
inline double risk_plugin_closed(double photon_number, int n, int m) {
    if (n < 1 || m < 1) throw std::invalid_argument("risk_plugin_closed: n, m must be >= 1");
    if (!(photon_number > 0.0)) {
        throw std::invalid_argument("risk_plugin_closed: photon number must be positive");
    }
    return (static_cast<double>(m) / n) * (photon_number + 1.0) *
           std::log((photon_number + 1.0) / photon_number);
}

/// Average relative-entropy risk of the Bayes predictive strategy under the
/// conjugate complex-normal prior. With M = N + 2 m delta2_n:
///   R_bayes = log((M+1)/(N+1)) + N log(N/(N+1)) - M log(M/(M+1)).
/// For the noninformative (flat) prior this is the average with respect to
/// the sampling distribution alone, with delta2_n = (N+1)/(2n).
inline double risk_bayes_closed(double photon_number, int n, int m, const PriorParams& prior) {
    if (m < 1) throw std::invalid_argument("risk_bayes_closed: m must be >= 1");
    const double d2 = detail::posterior_delta2(photon_number, n, prior);
    const double big_n = photon_number;
    const double big_m = big_n + 2.0 * m * d2;
    return std::log((big_m + 1.0) / (big_n + 1.0)) + big_n * std::log(big_n / (big_n + 1.0)) -
           big_m * std::log(big_m / (big_m + 1.0));
}

/// Minimax-relevant constant risk at n = m = 1 under the flat prior:
/// with M = 2N + 1,
///   R_* = log((M+1)/(N+1)) + N log(N/(N+1)) - M log(M/(M+1)).
/// Equals risk_bayes_closed(N, 1, 1, noninformative) and is the tau2 ->
/// infinity limit of the informative-prior Bayes risk.
inline double risk_star(double photon_number) {
    if (!(photon_number > 0.0)) throw std::invalid_argument("risk_star: photon number must be positive");
    const double n = photon_number;
    const double m = 2.0 * n + 1.0;
    return std::log((m + 1.0) / (n + 1.0)) + n * std::log(n / (n + 1.0)) -
           m * std::log(m / (m + 1.0));
}

/// One row of a prior-width sweep.
struct RiskCurveRow {
    double tau2 = 0.0;
    double risk_plugin = 0.0;
    double risk_bayes = 0.0;
    double gap = 0.0;  // risk_plugin - risk_bayes
};

inline std::vector<RiskCurveRow> risk_curve(double photon_number, int n, int m,
                                            const std::vector<double>& tau2_grid) {
    std::vector<RiskCurveRow> rows;
    rows.reserve(tau2_grid.size());
    const double rp = risk_plugin_closed(photon_number, n, m);
    for (double t2 : tau2_grid) {
        PriorParams prior;
        prior.tau2 = t2;
        const double rb = risk_bayes_closed(photon_number, n, m, prior);
        rows.push_back({t2, rp, rb, rp - rb});
    }
    return rows;
}

/// Outcome of the closed-form ordering checks across a parameter grid.
struct InequalityCheckResult {
    bool all_pass = false;
    /// Smallest margin of R_plugin - R_bayes over the grid (> 0 required).
    double min_gap_plugin_bayes = 0.0;
    /// Smallest margin of R_star - R_bayes at n = m = 1 (>= 0 required).
    double min_gap_star_bayes = 0.0;
    /// Smallest margin of R_plugin - R_star at n = m = 1 (> 0 required).
    double min_gap_plugin_star = 0.0;
    /// True if R_bayes is strictly increasing along every ascending tau2 grid.
    bool monotone_in_tau2 = false;
    /// Largest |R_bayes(tau2 -> large) - R_star| probe at n = m = 1.
    double flat_limit_error = 0.0;
    std::string detail;
};

/// Verifies the closed-form risk orderings on a grid:
///   R_plugin > R_bayes everywhere;
///   at n = m = 1: R_plugin > R_star >= R_bayes, R_bayes increasing in tau2,
///   and R_bayes -> R_star in the flat limit (probed at tau2 = 1e8).
inline InequalityCheckResult inequality_check(const std::vector<double>& photon_grid,
                                              const std::vector<double>& tau2_grid, int n, int m) {
    if (photon_grid.empty() || tau2_grid.empty()) {
        throw std::invalid_argument("inequality_check: grids must be nonempty");
    }
    InequalityCheckResult res;
    res.min_gap_plugin_bayes = 1e300;
    res.min_gap_star_bayes = 1e300;
    res.min_gap_plugin_star = 1e300;
    res.monotone_in_tau2 = true;
    bool ok = true;

    for (double nn : photon_grid) {
        const double rp = risk_plugin_closed(nn, n, m);
        const double rs = risk_star(nn);
        double prev_rb = -1e300;
        for (double t2 : tau2_grid) {
            PriorParams prior;
            prior.tau2 = t2;
            const double rb = risk_bayes_closed(nn, n, m, prior);
            res.min_gap_plugin_bayes = std::min(res.min_gap_plugin_bayes, rp - rb);
            if (!(rp > rb)) ok = false;
            if (n == 1 && m == 1) {
                res.min_gap_star_bayes = std::min(res.min_gap_star_bayes, rs - rb);
                if (rs - rb < -1e-12) ok = false;
            }
            if (rb <= prev_rb) res.monotone_in_tau2 = false;
            prev_rb = rb;
        }
        if (n == 1 && m == 1) {
            res.min_gap_plugin_star = std::min(res.min_gap_plugin_star, rp - rs);
            if (!(rp > rs)) ok = false;
            PriorParams wide;
            wide.tau2 = 1e8;
            res.flat_limit_error =
                std::max(res.flat_limit_error, std::abs(risk_bayes_closed(nn, 1, 1, wide) - rs));
        }
    }
    if (!res.monotone_in_tau2) ok = false;
    if (n == 1 && m == 1 && res.flat_limit_error > 1e-6) ok = false;
    res.all_pass = ok;
    res.detail = ok ? "all orderings hold" : "ordering violation on grid";
    return res;
}

}  // namespace risk
}  // namespace gqpred
