#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "gqpred/bayes.hpp"
#include "gqpred/heterodyne.hpp"
#include "gqpred/predictive.hpp"
#include "gqpred/risk.hpp"
#include "gqpred/rng.hpp"

namespace gqpred {
namespace risk {

using predict::PosteriorParams;
using predict::PriorParams;

/// Monte Carlo experiment description shared by all estimators here.
struct McConfig {
    double photon_number = 1.0;
    int n = 1;
    int m = 1;
    PriorParams prior;
    long long mc_samples = 100000;
    std::uint64_t seed = 0;
};

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    long long samples = 0;
};

namespace detail {

/// Fixed block length for worker scheduling. Replicate r always uses
/// StreamRng(seed, r) and blocks are merged in index order, so estimates are
/// bit-identical for any worker count.
constexpr long long kMcBlock = 1024;

struct BlockStat {
    long long count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }
};

/// Chan et al. pairwise combine of (count, mean, M2) summaries.
inline BlockStat merge(const BlockStat& a, const BlockStat& b) {
    if (a.count == 0) return b;
    if (b.count == 0) return a;
    BlockStat r;
    r.count = a.count + b.count;
    const double d = b.mean - a.mean;
    const double na = static_cast<double>(a.count);
    const double nb = static_cast<double>(b.count);
    const double nr = na + nb;
    r.mean = a.mean + d * (nb / nr);
    r.m2 = a.m2 + b.m2 + d * d * (na * nb / nr);
    return r;
}

/// Runs `replicate(rng, r)` for r = 0..samples-1 across workers in fixed
/// 1024-replicate blocks, merging block summaries in block order.
template <typename Replicate>
McEstimate run_replicates(long long samples, std::uint64_t seed, int workers,
                          const Replicate& replicate) {
    if (samples < 100) {
        throw std::invalid_argument(
            "monte carlo: fewer than 100 replicates cannot give a usable standard error");
    }
    if (workers < 1) workers = 1;
    const long long n_blocks = (samples + kMcBlock - 1) / kMcBlock;
    std::vector<BlockStat> blocks(static_cast<std::size_t>(n_blocks));
    std::atomic<long long> next_block{0};

    auto work = [&]() {
        for (;;) {
            const long long b = next_block.fetch_add(1);
            if (b >= n_blocks) return;
            BlockStat stat;
            const long long lo = b * kMcBlock;
            const long long hi = std::min(samples, lo + kMcBlock);
            for (long long r = lo; r < hi; ++r) {
                sim::StreamRng rng(seed, static_cast<std::uint64_t>(r));
                stat.add(replicate(rng, r));
            }
            blocks[static_cast<std::size_t>(b)] = stat;
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    BlockStat total;
    for (const BlockStat& b : blocks) total = merge(total, b);
    McEstimate est;
    est.samples = total.count;
    est.estimate = total.mean;
    const double var = total.m2 / static_cast<double>(total.count - 1);
    est.std_error = std::sqrt(var / static_cast<double>(total.count));
    return est;
}

}  // namespace detail

/// Monte Carlo estimate of the plug-in risk: draw theta from the prior, n
/// heterodyne outcomes, estimate by the sample average, and evaluate the
/// per-replicate m-mode relative entropy in closed form; for equal photon
/// numbers it reduces to m |theta - estimate|^2 log((N+1)/N).
inline McEstimate mc_risk_plugin(const McConfig& cfg, int workers = 1) {
    if (cfg.prior.noninformative) {
        throw std::invalid_argument(
            "mc_risk_plugin: average risk under a flat prior is not a prior expectation; "
            "use an informative prior");
    }
    if (cfg.n < 1 || cfg.m < 1) throw std::invalid_argument("mc_risk_plugin: n, m must be >= 1");
    if (!(cfg.photon_number > 0.0)) {
        throw std::invalid_argument("mc_risk_plugin: photon number must be positive");
    }
    const double log_ratio =
        std::log((cfg.photon_number + 1.0) / cfg.photon_number) * static_cast<double>(cfg.m);
    const double comp_var = 0.5 * (cfg.photon_number + 1.0);
    return detail::run_replicates(
        cfg.mc_samples, cfg.seed, workers, [&](sim::StreamRng& rng, long long) {
            const cplx theta = rng.next_complex_normal(cfg.prior.mean, cfg.prior.tau2);
            cplx sum(0.0, 0.0);
            for (int i = 0; i < cfg.n; ++i) sum += rng.next_complex_normal(theta, comp_var);
            const cplx est = sum / static_cast<double>(cfg.n);
            return std::norm(theta - est) * log_ratio;
        });
}

/// Monte Carlo estimate of the Bayes predictive risk: draw theta from the
/// prior, n outcomes, update the posterior, and evaluate the per-replicate
/// m-mode relative entropy to the Bayes predictive state through the
/// averaged-mode reduction.
inline McEstimate mc_risk_bayes(const McConfig& cfg, int workers = 1) {
    if (cfg.prior.noninformative) {
        throw std::invalid_argument(
            "mc_risk_bayes: average risk under a flat prior is not a prior expectation; "
            "use an informative prior");
    }
    if (cfg.n < 1 || cfg.m < 1) throw std::invalid_argument("mc_risk_bayes: n, m must be >= 1");
    if (!(cfg.photon_number > 0.0)) {
        throw std::invalid_argument("mc_risk_bayes: photon number must be positive");
    }
    const double comp_var = 0.5 * (cfg.photon_number + 1.0);
    return detail::run_replicates(
        cfg.mc_samples, cfg.seed, workers, [&](sim::StreamRng& rng, long long) {
            const cplx theta = rng.next_complex_normal(cfg.prior.mean, cfg.prior.tau2);
            std::vector<cplx> xs(static_cast<std::size_t>(cfg.n));
            for (int i = 0; i < cfg.n; ++i) xs[i] = rng.next_complex_normal(theta, comp_var);
            const PosteriorParams post = predict::posterior_update(cfg.prior, xs, cfg.photon_number);
            return predict::reduce_predictive_risk(theta, post, cfg.m);
        });
}

/// Monte Carlo check of the two moment identities behind the closed-form
/// risks: E|sample average - theta|^2 = (N+1)/n and
/// E|posterior mean - theta|^2 = 2 delta2_n (theta drawn from the prior).
struct MomentIdentityEstimates {
    McEstimate mle_sq_error;        // expect (N+1)/n
    McEstimate posterior_sq_error;  // expect 2 delta2_n
    double expected_mle = 0.0;
    double expected_posterior = 0.0;
};

inline MomentIdentityEstimates mc_moment_identities(const McConfig& cfg, int workers = 1) {
    if (cfg.prior.noninformative) {
        throw std::invalid_argument("mc_moment_identities: requires an informative prior");
    }
    const double comp_var = 0.5 * (cfg.photon_number + 1.0);
    MomentIdentityEstimates out;
    out.expected_mle = (cfg.photon_number + 1.0) / cfg.n;
    out.expected_posterior = 2.0 * detail::posterior_delta2(cfg.photon_number, cfg.n, cfg.prior);
    out.mle_sq_error = detail::run_replicates(
        cfg.mc_samples, cfg.seed, workers, [&](sim::StreamRng& rng, long long) {
            const cplx theta = rng.next_complex_normal(cfg.prior.mean, cfg.prior.tau2);
            cplx sum(0.0, 0.0);
            for (int i = 0; i < cfg.n; ++i) sum += rng.next_complex_normal(theta, comp_var);
            return std::norm(sum / static_cast<double>(cfg.n) - theta);
        });
    out.posterior_sq_error = detail::run_replicates(
        cfg.mc_samples, cfg.seed + 1, workers, [&](sim::StreamRng& rng, long long) {
            const cplx theta = rng.next_complex_normal(cfg.prior.mean, cfg.prior.tau2);
            std::vector<cplx> xs(static_cast<std::size_t>(cfg.n));
            for (int i = 0; i < cfg.n; ++i) xs[i] = rng.next_complex_normal(theta, comp_var);
            const PosteriorParams post = predict::posterior_update(cfg.prior, xs, cfg.photon_number);
            return std::norm(post.theta_bar - theta);
        });
    return out;
}

}  // namespace risk
}  // namespace gqpred
