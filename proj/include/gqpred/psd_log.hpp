#pragma once

#include <cmath>
#include <stdexcept>

#include "gqpred/complex_matrix.hpp"
#include "gqpred/hermitian_eig.hpp"

namespace gqpred {
namespace linalg {

/// Result of a principal matrix logarithm of a positive semidefinite matrix.
/// Eigenvalues below the floor are clamped to it before taking logs;
/// floored_mass and floored_count report how much spectrum was affected so
/// callers can judge whether the clamp touched anything that matters.
struct PsdLogResult {
    ComplexMatrix log;
    double floored_mass = 0.0;  // sum of eigenvalues that sat below the floor
    int floored_count = 0;
    double min_eigenvalue = 0.0;
};

/// log(A) for Hermitian PSD A via full eigendecomposition,
/// log(A) = V diag(log max(lambda, floor)) V^dagger.
///
/// The floor keeps the result finite when truncation pushes tail
/// eigenvalues to roundoff or slightly negative values. Callers that need
/// the log spectrum of severely rank-deficient matrices with *relative*
/// accuracy should work from a factor via psd_eig_from_factor instead.
inline PsdLogResult matrix_log_psd(const ComplexMatrix& a, double floor = 1e-14) {
    if (!(floor > 0.0)) throw std::invalid_argument("matrix_log_psd: floor must be positive");
    HermitianEigen eig = hermitian_eig(a);
    const int n = a.dim();
    PsdLogResult out;
    out.min_eigenvalue = n > 0 ? eig.eigenvalues.front() : 0.0;
    std::vector<double> logs(n);
    for (int i = 0; i < n; ++i) {
        double lam = eig.eigenvalues[i];
        if (lam < floor) {
            out.floored_mass += lam;
            out.floored_count += 1;
            lam = floor;
        }
        logs[i] = std::log(lam);
    }
    // V diag(logs) V^dagger, assembled column-by-column.
    ComplexMatrix r(n);
    const ComplexMatrix& v = eig.eigenvectors;
    for (int k = 0; k < n; ++k) {
        const double lk = logs[k];
        for (int i = 0; i < n; ++i) {
            const cplx vik = v(i, k) * lk;
            if (vik == cplx(0.0, 0.0)) continue;
            cplx* ri = r.row(i);
            for (int j = 0; j < n; ++j) ri[j] += vik * std::conj(v(j, k));
        }
    }
    out.log = std::move(r);
    return out;
}

}  // namespace linalg
}  // namespace gqpred
