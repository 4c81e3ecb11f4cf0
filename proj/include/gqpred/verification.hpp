#pragma once

#include <vector>

#include "gqpred/rel_entropy.hpp"
#include "gqpred/states.hpp"

namespace gqpred {
namespace verify {

/// One closed-form-vs-numeric relative entropy comparison.
struct RelaPairResult {
    qstate::GaussianParams rho_par;
    qstate::GaussianParams sigma_par;
    double closed = 0.0;
    double numeric = 0.0;
    double abs_diff = 0.0;
    bool support_mismatch = false;
};

/// Default comparison grid: all ordered pairs of displaced thermal states
/// with means {0, (1+i)/2, 1} and photon numbers {1/2, 1, 2} -- 9 states,
/// 81 pairs. Worst-case adequacy guard over the grid is 4(1+2)+30 = 42.
inline std::vector<qstate::GaussianParams> default_grid_states(bool fast = false) {
    const std::vector<cplx> means =
        fast ? std::vector<cplx>{{0.0, 0.0}, {0.5, 0.5}}
             : std::vector<cplx>{{0.0, 0.0}, {0.5, 0.5}, {1.0, 0.0}};
    const std::vector<double> photons{0.5, 1.0, 2.0};
    std::vector<qstate::GaussianParams> states;
    for (cplx mu : means)
        for (double nn : photons) states.push_back({mu, nn});
    return states;
}

/// Evaluates closed vs numeric relative entropy on every ordered pair of the
/// given states at the given truncation dimension. Numeric values come from
/// the truncated-basis eigensolver pipeline, closed values from the Gaussian
/// formula; the two share no intermediate quantities.
inline std::vector<RelaPairResult> rel_entropy_grid(const std::vector<qstate::GaussianParams>& states,
                                                    int dim) {
    std::vector<qstate::TruncatedDensityMatrix> built;
    built.reserve(states.size());
    for (const auto& par : states) {
        built.push_back(qstate::gaussian_state_fock(par, dim));
    }
    std::vector<RelaPairResult> out;
    out.reserve(states.size() * states.size());
    for (std::size_t i = 0; i < states.size(); ++i) {
        for (std::size_t j = 0; j < states.size(); ++j) {
            RelaPairResult r;
            r.rho_par = states[i];
            r.sigma_par = states[j];
            r.closed = qstate::rel_entropy_closed(states[i], states[j]);
            const qstate::NumericRelEntropy num = qstate::rel_entropy_numeric(built[i], built[j]);
            r.numeric = num.value;
            r.abs_diff = std::abs(r.closed - r.numeric);
            r.support_mismatch = num.support_mismatch;
            out.push_back(r);
        }
    }
    return out;
}

}  // namespace verify
}  // namespace gqpred
