#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gqpred/bayes.hpp"
#include "gqpred/complex_matrix.hpp"
#include "gqpred/gauss_hermite.hpp"
#include "gqpred/heterodyne.hpp"
#include "gqpred/monte_carlo.hpp"
#include "gqpred/operators.hpp"
#include "gqpred/predictive.hpp"
#include "gqpred/psd_log.hpp"
#include "gqpred/rel_entropy.hpp"
#include "gqpred/risk.hpp"
#include "gqpred/rng.hpp"
#include "gqpred/states.hpp"
#include "gqpred/verification.hpp"

namespace gqpred {
namespace selftest {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SelftestOptions {
    bool fast = false;
    std::uint64_t seed = 20260816ULL;
    int workers = 1;
};

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(6);
    ss << v;
    return ss.str();
}

template <typename Fn>
void run_check(std::vector<CheckResult>& out, const std::string& name, Fn&& fn) {
    CheckResult r;
    r.name = name;
    try {
        fn(r);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    out.push_back(std::move(r));
}

}  // namespace detail

/// Full consistency battery. Every check is self-contained: expected values
/// come from closed forms or independent numeric routes, never from the code
/// path under test. Returns one result per named check.
inline std::vector<CheckResult> run_selftest(const SelftestOptions& opt) {
    using detail::fmt;
    using detail::run_check;
    namespace la = linalg;
    namespace qs = qstate;
    namespace pr = predict;

    std::vector<CheckResult> results;

    run_check(results, "ladder operator algebra", [&](CheckResult& r) {
        const int dim = 30;
        const la::ComplexMatrix a = la::annihilation_op(dim);
        const la::ComplexMatrix comm = a * a.conj_transpose() - a.conj_transpose() * a;
        double worst = 0.0;
        for (int i = 0; i < dim - 1; ++i)
            for (int j = 0; j < dim - 1; ++j) {
                const double want = (i == j) ? 1.0 : 0.0;
                worst = std::max(worst, std::abs(comm(i, j) - want));
            }
        r.pass = worst < 1e-12;
        r.detail = "commutator deviation " + fmt(worst) + " on sub-block";
    });

    run_check(results, "displacement subspace unitarity", [&](CheckResult& r) {
        const int dim = 40;
        double worst = 0.0;
        for (cplx th : {cplx(1.0, 0.0), cplx(0.8, -0.6), cplx(0.0, 1.5)}) {
            const la::ComplexMatrix d = la::displacement_op(th, dim);
            const la::ComplexMatrix dm = la::displacement_op(-th, dim);
            const la::ComplexMatrix prod = d * dm;
            const int k = 20;
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) {
                    const double want = (i == j) ? 1.0 : 0.0;
                    worst = std::max(worst, std::abs(prod(i, j) - want));
                }
        }
        r.pass = worst < 1e-8;
        r.detail = "max |D(t)D(-t) - I| = " + fmt(worst) + " on low sub-block";
    });

    run_check(results, "quadrature rule sanity", [&](CheckResult& r) {
        const la::GaussHermiteRule rule = la::gauss_hermite(24);
        double sum_w = 0.0, sum_x2 = 0.0, antisym = 0.0;
        for (int i = 0; i < 24; ++i) {
            sum_w += rule.weights[i];
            sum_x2 += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
            antisym = std::max(antisym, std::abs(rule.nodes[i] + rule.nodes[23 - i]));
        }
        const double sqrt_pi = std::sqrt(M_PI);
        const double e1 = std::abs(sum_w - sqrt_pi);
        const double e2 = std::abs(sum_x2 - 0.5 * sqrt_pi);
        r.pass = e1 < 1e-12 && e2 < 1e-12 && antisym < 1e-12;
        r.detail = "weight sum err " + fmt(e1) + ", second moment err " + fmt(e2);
    });

    run_check(results, "thermal spectrum entropy identity", [&](CheckResult& r) {
        double worst = 0.0;
        for (double nn : {0.5, 1.0, 2.0}) {
            const double entropy = (nn + 1.0) * std::log(nn + 1.0) - nn * std::log(nn);
            worst = std::max(worst, std::abs(qs::cross_trace(nn, cplx(0.0, 0.0), nn) + entropy));
        }
        r.pass = worst < 1e-12;
        r.detail = "max |cross trace + entropy| = " + fmt(worst);
    });

    run_check(results, "matrix log of thermal spectrum", [&](CheckResult& r) {
        const int dim = 40;
        const double nn = 1.0;
        const qs::TruncatedDensityMatrix th = qs::thermal_fock(nn, dim);
        const la::PsdLogResult lg = la::matrix_log_psd(th.matrix);
        const std::vector<double> w = qs::thermal_weights(nn, dim);
        double worst = 0.0;
        for (int k = 0; k < dim; ++k) {
            if (w[k] < 1e-13) break;  // below the floor the log is clamped by design
            worst = std::max(worst, std::abs(lg.log(k, k).real() - std::log(w[k])));
        }
        r.pass = worst < 1e-10;
        r.detail = "diagonal log deviation " + fmt(worst);
    });

    run_check(results, "coherent expectation of thermal log spectrum", [&](CheckResult& r) {
        const int dim = 60;
        double worst = 0.0;
        for (double mm : {0.8, 1.5}) {
            for (cplx al : {cplx(0.9, 0.0), cplx(0.5, -0.7)}) {
                const std::vector<cplx> c = qs::coherent_fock(al, dim);
                const std::vector<double> w = qs::thermal_weights(mm, dim);
                double num = 0.0;
                for (int k = 0; k < dim; ++k) num += std::norm(c[k]) * std::log(w[k]);
                worst = std::max(worst, std::abs(num - qs::log_thermal_expectation(al, mm)));
            }
        }
        r.pass = worst < 1e-6;
        r.detail = "max closed-vs-sum deviation " + fmt(worst);
    });

    run_check(results, "mixed displaced trace identity", [&](CheckResult& r) {
        const int dim = 60;
        const double nn = 0.7, mm = 1.3;
        const cplx eta(0.6, -0.4);
        const qs::TruncatedDensityMatrix rho = qs::gaussian_state_fock({-eta, nn}, dim);
        const la::PsdLogResult lg = la::matrix_log_psd(qs::thermal_fock(mm, dim).matrix);
        const double numeric = la::trace_product(rho.matrix, lg.log).real();
        const double closed = qs::cross_trace(nn, eta, mm);
        const double err = std::abs(numeric - closed);
        r.pass = err < 1e-6;
        r.detail = "deviation " + fmt(err);
    });

    run_check(results, "relative entropy closed vs numeric grid", [&](CheckResult& r) {
        const int dim = opt.fast ? 50 : 60;
        const auto states = verify::default_grid_states(opt.fast);
        const auto grid = verify::rel_entropy_grid(states, dim);
        double worst = 0.0;
        for (const auto& p : grid) worst = std::max(worst, p.abs_diff);
        r.pass = worst < 1e-6;
        r.detail = std::to_string(grid.size()) + " pairs at dim " + std::to_string(dim) +
                   ", worst |closed - numeric| = " + fmt(worst);
    });

    run_check(results, "posterior conjugacy", [&](CheckResult& r) {
        // Noninformative identity must hold exactly in floating point.
        const std::vector<cplx> xs{{0.3, -0.2}, {1.1, 0.4}, {-0.5, 0.9}};
        pr::PriorParams flat;
        flat.noninformative = true;
        bool exact = true;
        for (double nn : {0.5, 1.0, 2.0}) {
            const pr::PosteriorParams post = pr::posterior_update(flat, xs, nn);
            if (2.0 * post.delta2 != (nn + 1.0) / 3.0) exact = false;
        }
        // Informative posterior density must integrate to 1.
        pr::PriorParams prior;
        prior.mean = cplx(0.4, -0.1);
        prior.tau2 = 0.8;
        const pr::PosteriorParams post = pr::posterior_update(prior, xs, 1.0);
        const la::GaussHermiteRule rule = la::gauss_hermite(20);
        double integral = 0.0;
        const double scale = std::sqrt(2.0 * post.delta2);
        for (int i = 0; i < 20; ++i)
            for (int j = 0; j < 20; ++j) {
                const cplx th = post.theta_bar + scale * cplx(rule.nodes[i], rule.nodes[j]);
                const double g = std::exp(rule.nodes[i] * rule.nodes[i] + rule.nodes[j] * rule.nodes[j]);
                integral += rule.weights[i] * rule.weights[j] * g *
                            pr::posterior_density(th, post) * 2.0 * post.delta2;
            }
        const double norm_err = std::abs(integral - 1.0);
        r.pass = exact && norm_err < 1e-10;
        r.detail = std::string(exact ? "flat-prior variance identity exact" : "variance identity broken") +
                   ", density normalisation err " + fmt(norm_err);
    });

    run_check(results, "predictive convexity coefficients", [&](CheckResult& r) {
        double worst_m1 = 0.0;
        bool ok = true;
        for (double nn : {0.5, 1.0, 2.0}) {
            for (double d2 : {0.2, 0.5, 1.0}) {
                pr::PosteriorParams post;
                post.theta_bar = cplx(0.3, 0.1);
                post.delta2 = d2;
                post.photon_number = nn;
                post.n = 1;
                for (int m = 1; m <= 3; ++m) {
                    const pr::PredictiveCoefficients co = pr::predictive_coefficients(post, m);
                    if (std::abs(m * co.p + co.q - 1.0) > 1e-12) ok = false;
                    if (m == 1) worst_m1 = std::max(worst_m1, std::abs(co.p + co.q - 1.0));
                }
            }
        }
        r.pass = ok && worst_m1 < 1e-14;
        r.detail = "m p + q = 1 held; single-mode p + q deviation " + fmt(worst_m1);
    });

    run_check(results, "single-mode outcome density collapse", [&](CheckResult& r) {
        pr::PosteriorParams post;
        post.theta_bar = cplx(0.7, -0.3);
        post.delta2 = 0.4;
        post.photon_number = 1.2;
        post.n = 2;
        const pr::PredictiveCoefficients co = pr::predictive_coefficients(post, 1);
        const double var = post.photon_number + 2.0 * post.delta2;
        double worst = 0.0;
        sim::StreamRng rng(opt.seed, 77);
        for (int k = 0; k < 100; ++k) {
            const cplx beta = post.theta_bar + rng.next_complex_normal(cplx(0, 0), 0.5 * var) * 1.5;
            const double joint = pr::predictive_joint_pdensity(co, {beta}, post.photon_number);
            const double direct =
                std::exp(-std::norm(beta - post.theta_bar) / var) / (M_PI * var);
            worst = std::max(worst, std::abs(joint - direct));
        }
        r.pass = worst < 1e-12;
        r.detail = "max pointwise deviation " + fmt(worst);
    });

    run_check(results, "multi-mode outcome density normalisation", [&](CheckResult& r) {
        pr::PosteriorParams post;
        post.theta_bar = cplx(0.5, 0.2);
        post.delta2 = 0.5;
        post.photon_number = 1.0;
        post.n = 1;
        const pr::PredictiveCoefficients co = pr::predictive_coefficients(post, 2);
        // Substitute each mode's marginal: complex normal around theta_bar
        // with per-component variance (N + 2 delta2)/2; the residual
        // correlation is handled by the quadrature itself.
        const int order = opt.fast ? 20 : 24;
        const la::GaussHermiteRule rule = la::gauss_hermite(order);
        const double mvar = 0.5 * (post.photon_number + 2.0 * post.delta2);
        const double scale = std::sqrt(2.0 * mvar);
        double integral = 0.0;
        for (int i1 = 0; i1 < order; ++i1)
            for (int j1 = 0; j1 < order; ++j1)
                for (int i2 = 0; i2 < order; ++i2)
                    for (int j2 = 0; j2 < order; ++j2) {
                        const cplx b1 = post.theta_bar + scale * cplx(rule.nodes[i1], rule.nodes[j1]);
                        const cplx b2 = post.theta_bar + scale * cplx(rule.nodes[i2], rule.nodes[j2]);
                        const double gauss_back =
                            std::exp(rule.nodes[i1] * rule.nodes[i1] + rule.nodes[j1] * rule.nodes[j1] +
                                     rule.nodes[i2] * rule.nodes[i2] + rule.nodes[j2] * rule.nodes[j2]);
                        const double w =
                            rule.weights[i1] * rule.weights[j1] * rule.weights[i2] * rule.weights[j2];
                        integral += w * gauss_back * (2.0 * mvar) * (2.0 * mvar) *
                                    pr::predictive_joint_pdensity(co, {b1, b2}, post.photon_number);
                    }
        const double err = std::abs(integral - 1.0);
        r.pass = err < 1e-6;
        r.detail = "two-mode normalisation error " + fmt(err) + " at order " + std::to_string(order);
    });

    run_check(results, "predictive state agreement (single mode)", [&](CheckResult& r) {
        // Posterior from one outcome under an informative prior, chosen so
        // the adequacy guard holds at the comparison dimension.
        pr::PriorParams prior;
        prior.tau2 = 0.25;
        const std::vector<cplx> xs{cplx(1.0, 0.0)};
        const pr::PosteriorParams post = pr::posterior_update(prior, xs, 1.0);
        const int dim = 40;
        const qs::TruncatedDensityMatrix mix = pr::predictive_joint_fock(post, 1, dim, 24);
        const qs::TruncatedDensityMatrix direct =
            qs::gaussian_state_fock(pr::predictive_single_mode(post, 1), dim);
        const double err = la::frobenius_diff(mix.matrix, direct.matrix);
        r.pass = err < 1e-7;
        r.detail = "Frobenius deviation " + fmt(err) + " at dim " + std::to_string(dim);
    });

    run_check(results, "exchangeable mixture reduces to thermal", [&](CheckResult& r) {
        pr::PriorParams prior;
        prior.mean = cplx(0.0, 0.0);
        prior.tau2 = 0.5;
        const int dim = 40;
        const qs::TruncatedDensityMatrix mix = pr::exchangeable_state(prior, 1.0, 1, dim, 24);
        const qs::TruncatedDensityMatrix th = qs::thermal_fock(1.0 + 2.0 * prior.tau2, dim);
        const double err = la::frobenius_diff(mix.matrix, th.matrix);
        r.pass = err < 1e-6;
        r.detail = "Frobenius deviation " + fmt(err);
    });

    run_check(results, "multi-mode reduction vs numeric", [&](CheckResult& r) {
        const int dim_per_mode = opt.fast ? 14 : 20;
        const double tol = opt.fast ? 5e-3 : 1e-3;
        pr::PosteriorParams post;
        post.theta_bar = cplx(0.2, 0.0);
        post.delta2 = 1.0 / 3.0;
        post.photon_number = 1.0;
        post.n = 1;
        const cplx theta(0.4, 0.0);
        const qs::TruncatedDensityMatrix sigma = pr::predictive_joint_fock(post, 2, dim_per_mode, 24);
        const qs::TruncatedDensityMatrix single =
            qs::gaussian_state_fock({theta, post.photon_number}, dim_per_mode, Guard::relaxed);
        const qs::TruncatedDensityMatrix rho = qs::tensor_product(single, single);
        const double numeric = qs::rel_entropy_numeric(rho, sigma).value;
        const double closed = pr::reduce_predictive_risk(theta, post, 2);
        const double err = std::abs(numeric - closed);
        r.pass = err < tol;
        r.detail = "|numeric - reduction| = " + fmt(err) + " at dim/mode " +
                   std::to_string(dim_per_mode);
    });

    run_check(results, "risk ordering and flat limit", [&](CheckResult& r) {
        const risk::InequalityCheckResult res =
            risk::inequality_check({0.5, 1.0, 2.0}, {0.25, 1.0, 4.0, 16.0}, 1, 1);
        const risk::InequalityCheckResult res2 =
            risk::inequality_check({0.5, 1.0, 2.0}, {0.25, 1.0, 4.0}, 2, 2);
        r.pass = res.all_pass && res2.all_pass;
        r.detail = "min plugin-bayes gap " + fmt(std::min(res.min_gap_plugin_bayes, res2.min_gap_plugin_bayes)) +
                   ", flat-limit error " + fmt(res.flat_limit_error);
    });

    run_check(results, "risk constant consistency", [&](CheckResult& r) {
        double worst = 0.0;
        for (double nn : {0.5, 1.0, 2.0, 5.0}) {
            predict::PriorParams flat;
            flat.noninformative = true;
            worst = std::max(worst, std::abs(risk::risk_star(nn) - risk::risk_bayes_closed(nn, 1, 1, flat)));
        }
        const double frozen = std::abs(risk::risk_star(1.0) - 3.0 * std::log(4.0 / 3.0));
        r.pass = worst < 1e-15 && frozen < 1e-12;
        r.detail = "flat-prior agreement " + fmt(worst) + ", unit-photon value deviation " + fmt(frozen);
    });

    const long long mc_n = opt.fast ? 5000 : 20000;

    run_check(results, "bayes risk closed vs monte carlo", [&](CheckResult& r) {
        risk::McConfig cfg;
        cfg.photon_number = 1.0;
        cfg.n = 1;
        cfg.m = 1;
        cfg.prior.tau2 = 1.0;
        cfg.mc_samples = mc_n;
        cfg.seed = opt.seed;
        const risk::McEstimate est = risk::mc_risk_bayes(cfg, opt.workers);
        const double closed = risk::risk_bayes_closed(cfg.photon_number, cfg.n, cfg.m, cfg.prior);
        const double z = std::abs(est.estimate - closed) / est.std_error;
        r.pass = z < 3.0;
        r.detail = "closed " + fmt(closed) + ", mc " + fmt(est.estimate) + " +- " +
                   fmt(est.std_error) + " (z = " + fmt(z) + ")";
    });

    run_check(results, "plugin risk closed vs monte carlo", [&](CheckResult& r) {
        risk::McConfig cfg;
        cfg.photon_number = 1.0;
        cfg.n = 1;
        cfg.m = 1;
        cfg.prior.tau2 = 1.0;
        cfg.mc_samples = mc_n;
        cfg.seed = opt.seed + 17;
        const risk::McEstimate est = risk::mc_risk_plugin(cfg, opt.workers);
        const double closed = risk::risk_plugin_closed(cfg.photon_number, cfg.n, cfg.m);
        const double z = std::abs(est.estimate - closed) / est.std_error;
        r.pass = z < 3.0;
        r.detail = "closed " + fmt(closed) + ", mc " + fmt(est.estimate) + " +- " +
                   fmt(est.std_error) + " (z = " + fmt(z) + ")";
    });

    run_check(results, "estimator moment identities", [&](CheckResult& r) {
        risk::McConfig cfg;
        cfg.photon_number = 0.5;
        cfg.n = 2;
        cfg.m = 1;
        cfg.prior.mean = cplx(0.3, -0.2);
        cfg.prior.tau2 = 10.0;
        cfg.mc_samples = mc_n;
        cfg.seed = opt.seed + 33;
        const risk::MomentIdentityEstimates est = risk::mc_moment_identities(cfg, opt.workers);
        const double z1 =
            std::abs(est.mle_sq_error.estimate - est.expected_mle) / est.mle_sq_error.std_error;
        const double z2 = std::abs(est.posterior_sq_error.estimate - est.expected_posterior) /
                          est.posterior_sq_error.std_error;
        r.pass = z1 < 3.0 && z2 < 3.0;
        r.detail = "average-error z = " + fmt(z1) + ", posterior-error z = " + fmt(z2);
    });

    run_check(results, "heterodyne sampler distribution", [&](CheckResult& r) {
        const int n = 4000;
        const cplx theta(0.7, 0.2);
        const double nn = 1.5;
        const measure::HeterodyneSample s = measure::sample_heterodyne(theta, nn, n, 123);
        std::vector<double> u(n);
        for (int i = 0; i < n; ++i) {
            u[i] = 1.0 - std::exp(-std::norm(s.outcomes[i] - theta) / (nn + 1.0));
        }
        std::sort(u.begin(), u.end());
        double d = 0.0;
        for (int i = 0; i < n; ++i) {
            d = std::max(d, std::abs(static_cast<double>(i + 1) / n - u[i]));
            d = std::max(d, std::abs(u[i] - static_cast<double>(i) / n));
        }
        const double crit = 1.62762 / std::sqrt(static_cast<double>(n));  // 1% level
        r.pass = d < crit;
        r.detail = "KS statistic " + fmt(d) + " vs critical " + fmt(crit);
    });

    run_check(results, "stream and worker reproducibility", [&](CheckResult& r) {
        sim::StreamRng a(5, 7), b(5, 7), c(5, 8);
        bool same = true, distinct = false;
        for (int i = 0; i < 16; ++i) {
            const std::uint64_t va = a.next_u64();
            if (va != b.next_u64()) same = false;
            if (va != c.next_u64()) distinct = true;
        }
        risk::McConfig cfg;
        cfg.photon_number = 1.0;
        cfg.n = 1;
        cfg.m = 2;
        cfg.prior.tau2 = 0.7;
        cfg.mc_samples = 2048;
        cfg.seed = opt.seed + 5;
        const risk::McEstimate e1 = risk::mc_risk_bayes(cfg, 1);
        const risk::McEstimate e3 = risk::mc_risk_bayes(cfg, 3);
        const bool worker_invariant = e1.estimate == e3.estimate && e1.std_error == e3.std_error;
        r.pass = same && distinct && worker_invariant;
        r.detail = std::string("streams ") + (same && distinct ? "ok" : "broken") +
                   ", worker invariance " + (worker_invariant ? "exact" : "BROKEN");
    });

    return results;
}

}  // namespace selftest
}  // namespace gqpred
