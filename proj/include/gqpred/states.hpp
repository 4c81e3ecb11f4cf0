#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gqpred/complex_matrix.hpp"
#include "gqpred/operators.hpp"

namespace gqpred {
namespace qstate {

using linalg::ComplexMatrix;

/// Parameters of a displaced thermal (Gaussian) state: complex mean and
/// mean photon number of the thermal part. photon_number = 0 degenerates to
/// a pure coherent state.
struct GaussianParams {
    cplx mean{0.0, 0.0};
    double photon_number = 0.0;
};

/// Smallest Fock-space dimension considered adequate for representing a
/// displaced thermal state with the given parameters: mass beyond
/// 4(|mean|^2 + N) + 30 levels is far below every tolerance used here.
inline int truncation_guard_dim(cplx mean, double photon_number) {
    return static_cast<int>(std::ceil(4.0 * (std::norm(mean) + photon_number))) + 30;
}

/// Truncated density operator together with bookkeeping: how much trace the
/// truncation lost, and (when the state was built as G G^dagger) the factor
/// G itself. The factor is what makes tiny eigenvalues recoverable with
/// relative accuracy downstream; mixtures assembled by quadrature have no
/// factor and carry has_factor = false.
struct TruncatedDensityMatrix {
    int dim = 0;
    ComplexMatrix matrix;
    double trace_deficit = 0.0;
    bool has_factor = false;
    ComplexMatrix coherent_factor;  // valid iff has_factor
};

/// Geometric number distribution of a thermal state:
/// weight(k) = N^k / (N+1)^{k+1}, k = 0..dim-1.
inline std::vector<double> thermal_weights(double photon_number, int dim) {
    if (photon_number < 0.0) throw std::invalid_argument("thermal_weights: photon number must be >= 0");
    if (dim < 1) throw std::invalid_argument("thermal_weights: dimension must be >= 1");
    std::vector<double> w(dim);
    const double ratio = photon_number / (photon_number + 1.0);
    double cur = 1.0 / (photon_number + 1.0);
    for (int k = 0; k < dim; ++k) {
        w[k] = cur;
        cur *= ratio;
    }
    return w;
}

/// Thermal state diag(thermal_weights). Guard: dim >= guard dim of
/// (mean 0, N) in strict mode.
inline TruncatedDensityMatrix thermal_fock(double photon_number, int dim, Guard guard = Guard::strict) {
    if (guard == Guard::strict) {
        const int need = truncation_guard_dim(cplx(0.0, 0.0), photon_number);
        if (dim < need) {
            throw std::invalid_argument("thermal_fock: dimension " + std::to_string(dim) +
                                        " below adequacy guard; required dim >= " + std::to_string(need));
        }
    }
    const std::vector<double> w = thermal_weights(photon_number, dim);
    TruncatedDensityMatrix out;
    out.dim = dim;
    out.matrix = ComplexMatrix(dim);
    out.coherent_factor = ComplexMatrix(dim);
    double tr = 0.0;
    for (int k = 0; k < dim; ++k) {
        out.matrix(k, k) = w[k];
        out.coherent_factor(k, k) = std::sqrt(w[k]);
        tr += w[k];
    }
    out.trace_deficit = 1.0 - tr;
    out.has_factor = true;
    return out;
}

/// Number-basis amplitudes of a coherent state |alpha>:
/// c_k = e^{-|alpha|^2/2} alpha^k / sqrt(k!).
inline std::vector<cplx> coherent_fock(cplx alpha, int dim, Guard guard = Guard::strict) {
    if (dim < 1) throw std::invalid_argument("coherent_fock: dimension must be >= 1");
    if (guard == Guard::strict) {
        const int need = truncation_guard_dim(alpha, 0.0);
        if (dim < need) {
            throw std::invalid_argument("coherent_fock: dimension " + std::to_string(dim) +
                                        " below adequacy guard; required dim >= " + std::to_string(need));
        }
    }
    std::vector<cplx> c(dim);
    c[0] = std::exp(-0.5 * std::norm(alpha));
    for (int k = 1; k < dim; ++k) {
        c[k] = c[k - 1] * alpha / std::sqrt(static_cast<double>(k));
    }
    return c;
}

/// Displaced thermal state on the truncated basis, built as G G^dagger with
/// G = D(mean) diag(sqrt(thermal weights)). The assembled matrix and the
/// factor agree exactly by construction.
inline TruncatedDensityMatrix gaussian_state_fock(const GaussianParams& par, int dim,
                                                  Guard guard = Guard::strict) {
    if (par.photon_number < 0.0) {
        throw std::invalid_argument("gaussian_state_fock: photon number must be >= 0");
    }
    if (dim < 2) throw std::invalid_argument("gaussian_state_fock: dimension must be >= 2");
    if (guard == Guard::strict) {
        const int need = truncation_guard_dim(par.mean, par.photon_number);
        if (dim < need) {
            throw std::invalid_argument("gaussian_state_fock: dimension " + std::to_string(dim) +
                                        " below adequacy guard for |mean|^2 = " +
                                        std::to_string(std::norm(par.mean)) + ", N = " +
                                        std::to_string(par.photon_number) +
                                        "; required dim >= " + std::to_string(need));
        }
    }

    TruncatedDensityMatrix out;
    out.dim = dim;
    if (par.mean == cplx(0.0, 0.0)) {
        // Pure thermal; skip the displacement eigensolve.
        out = thermal_fock(par.photon_number, dim, Guard::relaxed);
        return out;
    }

    const ComplexMatrix d = linalg::displacement_op(par.mean, dim, Guard::relaxed);
    const std::vector<double> w = thermal_weights(par.photon_number, dim);
    ComplexMatrix g(dim);
    for (int j = 0; j < dim; ++j) {
        const double sq = std::sqrt(w[j]);
        for (int i = 0; i < dim; ++i) g(i, j) = d(i, j) * sq;
    }
    // rho = G G^dagger.
    ComplexMatrix rho(dim);
    double tr = 0.0;
    for (int i = 0; i < dim; ++i) {
        for (int j = i; j < dim; ++j) {
            cplx s(0.0, 0.0);
            const cplx* gi = g.row(i);
            const cplx* gj = g.row(j);
            for (int k = 0; k < dim; ++k) s += gi[k] * std::conj(gj[k]);
            rho(i, j) = s;
            rho(j, i) = std::conj(s);
        }
        rho(i, i) = cplx(rho(i, i).real(), 0.0);
        tr += rho(i, i).real();
    }
    out.matrix = std::move(rho);
    out.coherent_factor = std::move(g);
    out.has_factor = true;
    out.trace_deficit = 1.0 - tr;
    return out;
}

/// Tensor product of two truncated states. Factors multiply along, so the
/// product keeps relative-accuracy eigendecompositions available whenever
/// both inputs have factors.
inline TruncatedDensityMatrix tensor_product(const TruncatedDensityMatrix& a,
                                             const TruncatedDensityMatrix& b,
                                             int max_dim = 4096) {
    TruncatedDensityMatrix out;
    out.dim = a.dim * b.dim;
    out.matrix = linalg::kron(a.matrix, b.matrix, max_dim);
    out.has_factor = a.has_factor && b.has_factor;
    if (out.has_factor) {
        out.coherent_factor = linalg::kron(a.coherent_factor, b.coherent_factor, max_dim);
    }
    const double ta = 1.0 - a.trace_deficit;
    const double tb = 1.0 - b.trace_deficit;
    out.trace_deficit = 1.0 - ta * tb;
    return out;
}

}  // namespace qstate
}  // namespace gqpred
