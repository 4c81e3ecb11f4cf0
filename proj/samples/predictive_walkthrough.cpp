// End-to-end usage walkthrough: observe heterodyne data from a displaced
// thermal state, form the Bayes predictive, and compare both prediction
// strategies by their exact per-sample relative entropy and their average
// risks.

#include <iostream>

#include "gqpred/gqpred.hpp"

int main() {
    using namespace gqpred;

    // True state: mean 0.8 - 0.3i, thermal photon number 1.
    const cplx theta(0.8, -0.3);
    const double photon = 1.0;

    // Observe n = 4 heterodyne outcomes.
    const measure::HeterodyneSample data = measure::sample_heterodyne(theta, photon, 4, 2026);
    std::cout << "observed " << data.n() << " heterodyne outcomes\n";

    // Conjugate prior centred at zero, per-component variance 1.
    predict::PriorParams prior;
    prior.mean = cplx(0.0, 0.0);
    prior.tau2 = 1.0;

    const predict::PosteriorParams post =
        predict::posterior_update(prior, data.outcomes, photon);
    std::cout << "posterior mean " << post.theta_bar << ", variance " << post.delta2 << "\n";

    // Predict m = 2 future modes. The Bayes predictive reduced to the
    // averaged mode is again a displaced thermal state:
    const qstate::GaussianParams reduced = predict::predictive_single_mode(post, 2);
    std::cout << "reduced predictive: mean " << reduced.mean << ", photon number "
              << reduced.photon_number << "\n";

    // Exact per-sample relative entropies from the truth.
    const cplx mle = measure::mle_mean(data.outcomes);
    const double loss_plugin = 2.0 * qstate::rel_entropy_closed({theta, photon}, {mle, photon});
    const double loss_bayes = predict::reduce_predictive_risk(theta, post, 2);
    std::cout << "per-sample loss: plug-in " << loss_plugin << ", Bayes " << loss_bayes << "\n";

    // Average risks, closed form.
    const double rp = risk::risk_plugin_closed(photon, 4, 2);
    const double rb = risk::risk_bayes_closed(photon, 4, 2, prior);
    std::cout << "average risk: plug-in " << rp << ", Bayes " << rb << " (gap " << rp - rb
              << ")\n";

    // And a Monte Carlo confirmation of the Bayes risk.
    risk::McConfig mc;
    mc.photon_number = photon;
    mc.n = 4;
    mc.m = 2;
    mc.prior = prior;
    mc.mc_samples = 20000;
    mc.seed = 7;
    const risk::McEstimate est = risk::mc_risk_bayes(mc);
    std::cout << "Monte Carlo Bayes risk: " << est.estimate << " +- " << est.std_error << "\n";
    return 0;
}
