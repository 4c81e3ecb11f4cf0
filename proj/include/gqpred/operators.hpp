#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "gqpred/complex_matrix.hpp"
#include "gqpred/hermitian_eig.hpp"

namespace gqpred {

/// Dimension-guard policy for truncated constructions. `strict` enforces the
/// documented adequacy bound and throws with the required dimension when it
/// is violated; `relaxed` builds anyway (used internally at quadrature nodes
/// whose weights make their truncation error negligible, and by oracle code
/// that pins a dimension on purpose). Relaxed results still carry trace
/// deficits so callers can inspect truncation quality.
enum class Guard { strict, relaxed };

namespace linalg {

/// Annihilation operator on the truncated number basis:
/// a |k> = sqrt(k) |k-1>, dimension >= 2.
inline ComplexMatrix annihilation_op(int dim) {
    if (dim < 2) throw std::invalid_argument("annihilation_op: dimension must be >= 2");
    ComplexMatrix a(dim);
    for (int k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return a;
}

/// Number operator diag(0, 1, ..., dim-1).
inline ComplexMatrix number_op(int dim) {
    if (dim < 1) throw std::invalid_argument("number_op: dimension must be >= 1");
    ComplexMatrix n(dim);
    for (int k = 0; k < dim; ++k) n(k, k) = static_cast<double>(k);
    return n;
}

/// Smallest dimension on which displacement_op(theta, dim) is accepted in
/// strict mode. Chosen so a displaced vacuum keeps essentially all its mass
/// (Poisson tail of mean |theta|^2 beyond 4|theta|^2 + 14 is negligible).
inline int displacement_guard_dim(cplx theta) {
    return static_cast<int>(std::ceil(4.0 * std::norm(theta))) + 14;
}

/// Displacement unitary D(theta) = exp(theta a^dagger - conj(theta) a) on the
/// truncated basis, computed as exp(iH) from the eigendecomposition of the
/// Hermitian H = -i(theta a^dagger - conj(theta) a).
///
/// Truncation makes D exactly unitary only in the limit; on a subspace of
/// indices k <= dim - guard margin it is unitary to high accuracy. In strict
/// mode dimensions below displacement_guard_dim(theta) are rejected with the
/// required dimension in the message.
inline ComplexMatrix displacement_op(cplx theta, int dim, Guard guard = Guard::strict) {
    if (dim < 2) throw std::invalid_argument("displacement_op: dimension must be >= 2");
    if (guard == Guard::strict) {
        const int need = displacement_guard_dim(theta);
        if (dim < need) {
            throw std::invalid_argument(
                "displacement_op: dimension " + std::to_string(dim) +
                " too small for |theta|^2 = " + std::to_string(std::norm(theta)) +
                "; required dim >= " + std::to_string(need));
        }
    }
    // H = -i (theta a^dagger - conj(theta) a):
    // H(k+1, k) = -i theta sqrt(k+1), H(k, k+1) = conj of that.
    ComplexMatrix h(dim);
    const cplx mi(0.0, -1.0);
    for (int k = 0; k + 1 < dim; ++k) {
        const cplx v = mi * theta * std::sqrt(static_cast<double>(k + 1));
        h(k + 1, k) = v;
        h(k, k + 1) = std::conj(v);
    }
    HermitianEigen eig = hermitian_eig(h);
    // D = V diag(exp(i lambda)) V^dagger.
    ComplexMatrix d(dim);
    const ComplexMatrix& v = eig.eigenvectors;
    for (int k = 0; k < dim; ++k) {
        const cplx ph = std::polar(1.0, eig.eigenvalues[k]);
        for (int i = 0; i < dim; ++i) {
            const cplx vik = v(i, k) * ph;
            cplx* di = d.row(i);
            for (int j = 0; j < dim; ++j) di[j] += vik * std::conj(v(j, k));
        }
    }
    return d;
}

}  // namespace linalg
}  // namespace gqpred
