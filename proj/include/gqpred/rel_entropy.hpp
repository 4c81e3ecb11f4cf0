#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gqpred/complex_matrix.hpp"
#include "gqpred/hermitian_eig.hpp"
#include "gqpred/psd_log.hpp"
#include "gqpred/states.hpp"

namespace gqpred {
namespace qstate {

/// Quantum relative entropy between displaced thermal states, closed form:
/// D(rho_{z,N} || rho_{z',M}) = log((M+1)/(N+1)) + N log(N(M+1)/((N+1)M))
///                            + |z - z'|^2 log((M+1)/M).
/// The first argument may be pure (N = 0, with 0 log 0 = 0); the second must
/// have M > 0 or the entropy diverges.
inline double rel_entropy_closed(const GaussianParams& a, const GaussianParams& b) {
    const double n = a.photon_number;
    const double m = b.photon_number;
    if (n < 0.0) throw std::invalid_argument("rel_entropy_closed: first photon number must be >= 0");
    if (!(m > 0.0)) {
        throw std::invalid_argument(
            "rel_entropy_closed: second photon number must be positive (support condition)");
    }
    const double log_ratio_m = std::log((m + 1.0) / m);
    double val = std::log((m + 1.0) / (n + 1.0)) + std::norm(a.mean - b.mean) * log_ratio_m;
    if (n > 0.0) val += n * std::log(n * (m + 1.0) / ((n + 1.0) * m));
    return val;
}

/// Expected log-spectrum of a centred thermal state under a coherent state:
/// <alpha| log rho_{M,0} |alpha> = log(1/(M+1)) + |alpha|^2 log(M/(M+1)).
inline double log_thermal_expectation(cplx alpha, double m) {
    if (!(m > 0.0)) throw std::invalid_argument("log_thermal_expectation: photon number must be positive");
    return std::log(1.0 / (m + 1.0)) + std::norm(alpha) * std::log(m / (m + 1.0));
}

/// Mixed trace tr[rho_{N,-eta} log rho_{M,0}]
///   = log(1/(M+1)) + (|eta|^2 + N) log(M/(M+1)).
/// Displacement direction does not matter (only |eta| enters).
inline double cross_trace(double n, cplx eta, double m) {
    if (n < 0.0) throw std::invalid_argument("cross_trace: first photon number must be >= 0");
    if (!(m > 0.0)) throw std::invalid_argument("cross_trace: second photon number must be positive");
    return std::log(1.0 / (m + 1.0)) + (std::norm(eta) + n) * std::log(m / (m + 1.0));
}

/// Diagnostics-bearing result of the numeric relative entropy.
struct NumericRelEntropy {
    double value = 0.0;
    /// Sum of sigma eigenvalues that sat below the floor (plain path only).
    double sigma_floored_mass = 0.0;
    int sigma_floored_count = 0;
    /// rho-mass sitting on sigma directions whose eigenvalues were floored
    /// or clamped; when this exceeds 1e-8 the supports genuinely mismatch
    /// at the working truncation and the result is flagged.
    double rho_mass_on_floored = 0.0;
    bool support_mismatch = false;
};

namespace detail {

inline double xlogx_floored(double x, double floor) {
    return (x > floor) ? x * std::log(x) : 0.0;
}

}  // namespace detail

/// Numeric relative entropy tr[rho log rho] - tr[rho log sigma] on the
/// truncated basis, fully independent of the closed form (spectra come from
/// the Jacobi eigensolvers, nothing is taken from Gaussian-state formulas).
///
/// sigma's log spectrum is the delicate part: its truncated tail decays
/// geometrically, and flooring those eigenvalues at 1e-14 would bias pairs
/// whose rho still has ~1e-6 of mass out there. When sigma carries its
/// coherent factor the spectrum is computed from the factor (relative
/// accuracy down to the underflow threshold, clamp at 1e-280 is never
/// active in practice); assembled mixtures fall back to the plain
/// eigendecomposition with the given floor and report what was floored.
inline NumericRelEntropy rel_entropy_numeric(const TruncatedDensityMatrix& rho,
                                             const TruncatedDensityMatrix& sigma,
                                             double floor = 1e-14) {
    const int n = rho.dim;
    if (sigma.dim != n) throw std::invalid_argument("rel_entropy_numeric: dimension mismatch");
    if (!(floor > 0.0)) throw std::invalid_argument("rel_entropy_numeric: floor must be positive");

    // tr[rho log rho]: eigenvalues only. x log x flattens out at tiny x, so
    // the assembled spectrum is fine even without a factor.
    std::vector<double> rho_vals;
    if (rho.has_factor) {
        rho_vals = linalg::psd_eig_from_factor(rho.coherent_factor).eigenvalues;
    } else {
        rho_vals = linalg::hermitian_eig(rho.matrix).eigenvalues;
    }
    double s_rho = 0.0;
    for (double lam : rho_vals) s_rho += detail::xlogx_floored(lam, 1e-14);

    // tr[rho log sigma] = sum_k log(lambda_k) <v_k| rho |v_k>.
    NumericRelEntropy out;
    linalg::HermitianEigen se;
    double clamp;
    if (sigma.has_factor) {
        se = linalg::psd_eig_from_factor(sigma.coherent_factor);
        clamp = 1e-280;  // guard against exact zeros / underflow only
    } else {
        se = linalg::hermitian_eig(sigma.matrix);
        clamp = floor;
    }

    // R = rho * V once, then q_k = Re <v_k, R_k>.
    const linalg::ComplexMatrix r = rho.matrix * se.eigenvectors;
    double cross = 0.0;
    for (int k = 0; k < n; ++k) {
        cplx qk(0.0, 0.0);
        for (int i = 0; i < n; ++i) qk += std::conj(se.eigenvectors(i, k)) * r(i, k);
        const double q = qk.real();
        double lam = se.eigenvalues[k];
        if (lam < clamp) {
            if (!sigma.has_factor) {
                out.sigma_floored_mass += lam;
                out.sigma_floored_count += 1;
            }
            out.rho_mass_on_floored += std::max(q, 0.0);
            lam = clamp;
        }
        cross += std::log(lam) * q;
    }

    out.value = s_rho - cross;
    out.support_mismatch = out.rho_mass_on_floored > 1e-8;
    return out;
}

}  // namespace qstate
}  // namespace gqpred
