#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "gqpred/complex_matrix.hpp"

namespace gqpred {
namespace linalg {

/// Eigendecomposition A = V diag(eigenvalues) V^dagger, eigenvalues ascending,
/// columns of V the corresponding orthonormal eigenvectors.
struct HermitianEigen {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
};

namespace detail {

/// One complex Jacobi rotation parameterisation for the 2x2 Hermitian block
/// [[app, g], [conj(g), aqq]]: returns (c, s, phi) with unit |phi| such that
/// the unitary J = [[c, s*phi], [-s*conj(phi), c]] diagonalises the block.
struct JacobiRotation {
    double c;
    double s;
    cplx phi;
};

inline JacobiRotation make_rotation(double app, double aqq, cplx g) {
    const double ag = std::abs(g);
    const cplx phi = g / ag;
    const double tau = (aqq - app) / (2.0 * ag);
    const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                  : -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    return {c, t * c, phi};
}

inline void sort_ascending(std::vector<double>& vals, ComplexMatrix& vecs) {
    const int n = static_cast<int>(vals.size());
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return vals[a] < vals[b]; });
    std::vector<double> sv(n);
    ComplexMatrix sm(n);
    for (int k = 0; k < n; ++k) {
        sv[k] = vals[order[k]];
        for (int i = 0; i < n; ++i) sm(i, k) = vecs(i, order[k]);
    }
    vals = std::move(sv);
    vecs = std::move(sm);
}

}  // namespace detail

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Chosen over library LAPACK bindings so results are bit-stable across
/// platforms and the whole numeric stack stays self-contained. Sweeps run
/// with a per-sweep rotation threshold (classical threshold strategy) and
/// terminate when the off-diagonal Frobenius norm falls below
/// 1e-13 * ||A||_F.
///
/// Throws std::invalid_argument if the input deviates from Hermitian by
/// more than 1e-12 (max element deviation), std::runtime_error if the
/// sweep cap is hit (does not occur for well-formed input).
inline HermitianEigen hermitian_eig(const ComplexMatrix& input) {
    const int n = input.dim();
    if (n == 0) return {{}, ComplexMatrix(0)};
    const double herm_dev = input.hermiticity_deviation();
    if (herm_dev > 1e-12) {
        throw std::invalid_argument("hermitian_eig: input is not Hermitian (max deviation " +
                                    std::to_string(herm_dev) + ")");
    }

    ComplexMatrix a = input;
    // Symmetrise exactly so rounding in the input cannot leak into the
    // rotations: keep the upper triangle, mirror it, make the diagonal real.
    for (int i = 0; i < n; ++i) {
        a(i, i) = cplx(a(i, i).real(), 0.0);
        for (int j = i + 1; j < n; ++j) {
            const cplx m = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = m;
            a(j, i) = std::conj(m);
        }
    }

    ComplexMatrix v = ComplexMatrix::identity(n);
    const double norm_f = a.frobenius_norm();
    if (norm_f == 0.0) {
        return {std::vector<double>(n, 0.0), std::move(v)};
    }
    const double target = 1e-13 * norm_f;

    auto off_fro = [&]() {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) s += 2.0 * std::norm(a(i, j));
        return std::sqrt(s);
    };

    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        const double off = off_fro();
        if (off <= target) {
            std::vector<double> vals(n);
            for (int i = 0; i < n; ++i) vals[i] = a(i, i).real();
            detail::sort_ascending(vals, v);
            return {std::move(vals), std::move(v)};
        }
        // Rotating pivots far below the mean off-diagonal magnitude cannot
        // reduce `off` meaningfully; skipping them keeps late sweeps cheap.
        const double thresh = std::min(0.1 * off / n, off);
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx g = a(p, q);
                const double ag = std::abs(g);
                if (ag <= thresh || ag == 0.0) continue;
                const auto r = detail::make_rotation(a(p, p).real(), a(q, q).real(), g);
                const cplx s_phi = r.s * r.phi;          // J(p,q)
                const cplx s_phi_c = std::conj(s_phi);   // -J(q,p)

                // Columns p and q of A (A <- A J), all rows.
                for (int k = 0; k < n; ++k) {
                    const cplx akp = a(k, p), akq = a(k, q);
                    a(k, p) = r.c * akp - s_phi_c * akq;
                    a(k, q) = s_phi * akp + r.c * akq;
                }
                // Rows p and q of A (A <- J^dagger A), all columns.
                for (int k = 0; k < n; ++k) {
                    const cplx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = r.c * apk - s_phi * aqk;
                    a(q, k) = s_phi_c * apk + r.c * aqk;
                }
                a(p, q) = cplx(0.0, 0.0);
                a(q, p) = cplx(0.0, 0.0);
                a(p, p) = cplx(a(p, p).real(), 0.0);
                a(q, q) = cplx(a(q, q).real(), 0.0);
                // Accumulate V <- V J.
                for (int k = 0; k < n; ++k) {
                    const cplx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = r.c * vkp - s_phi_c * vkq;
                    v(k, q) = s_phi * vkp + r.c * vkq;
                }
            }
        }
    }
    throw std::runtime_error("hermitian_eig: no convergence within sweep limit");
}

/// Eigendecomposition of the positive semidefinite product G G^dagger given
/// its factor G, via one-sided Jacobi on the columns of G.
///
/// Column rotations preserve G G^dagger exactly, and each eigenvalue is
/// obtained as a squared column norm, so small eigenvalues come out with
/// high *relative* accuracy -- unlike two-sided diagonalisation of the
/// assembled product, where they are limited to absolute accuracy
/// ~eps*||A||. That property is what makes log-spectrum functionals of
/// near-singular density operators computable.
inline HermitianEigen psd_eig_from_factor(const ComplexMatrix& g_in) {
    const int n = g_in.dim();
    if (n == 0) return {{}, ComplexMatrix(0)};
    ComplexMatrix g = g_in;

    const int max_sweeps = 60;
    const double rel_tol = 1e-15;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                // Gram entries of columns p, q.
                double npp = 0.0, nqq = 0.0;
                cplx d(0.0, 0.0);
                for (int k = 0; k < n; ++k) {
                    const cplx gp = g(k, p), gq = g(k, q);
                    npp += std::norm(gp);
                    nqq += std::norm(gq);
                    d += std::conj(gp) * gq;
                }
                const double ad = std::abs(d);
                if (ad <= rel_tol * std::sqrt(npp * nqq) || ad == 0.0) continue;
                rotated = true;
                const auto r = detail::make_rotation(npp, nqq, d);
                const cplx s_phi = r.s * r.phi;
                const cplx s_phi_c = std::conj(s_phi);
                for (int k = 0; k < n; ++k) {
                    const cplx gkp = g(k, p), gkq = g(k, q);
                    g(k, p) = r.c * gkp - s_phi_c * gkq;
                    g(k, q) = s_phi * gkp + r.c * gkq;
                }
            }
        }
        if (!rotated) break;
        if (sweep == max_sweeps - 1) {
            throw std::runtime_error("psd_eig_from_factor: no convergence within sweep limit");
        }
    }

    std::vector<double> vals(n);
    ComplexMatrix v(n);
    std::vector<int> null_cols;
    for (int j = 0; j < n; ++j) {
        double nj = 0.0;
        for (int k = 0; k < n; ++k) nj += std::norm(g(k, j));
        vals[j] = nj;
        const double len = std::sqrt(nj);
        if (len < 1e-154) {
            null_cols.push_back(j);  // fill in after the range is known
        } else {
            for (int k = 0; k < n; ++k) v(k, j) = g(k, j) / len;
        }
    }
    // Exactly-zero columns (rank-deficient factors, e.g. pure states) get an
    // orthonormal completion so sum_k v_k v_k^dagger = I still holds.
    for (int j : null_cols) {
        vals[j] = 0.0;
        for (int cand = 0; cand < n; ++cand) {
            std::vector<cplx> w(n, cplx(0.0, 0.0));
            w[cand] = 1.0;
            for (int c = 0; c < n; ++c) {
                bool filled = std::find(null_cols.begin(), null_cols.end(), c) == null_cols.end() ||
                              c < j;  // columns already written
                if (c == j || !filled) continue;
                cplx ov(0.0, 0.0);
                for (int k = 0; k < n; ++k) ov += std::conj(v(k, c)) * w[k];
                for (int k = 0; k < n; ++k) w[k] -= ov * v(k, c);
            }
            double len2 = 0.0;
            for (int k = 0; k < n; ++k) len2 += std::norm(w[k]);
            if (len2 > 0.25) {
                const double inv = 1.0 / std::sqrt(len2);
                for (int k = 0; k < n; ++k) v(k, j) = w[k] * inv;
                break;
            }
        }
    }

    detail::sort_ascending(vals, v);
    return {std::move(vals), std::move(v)};
}

}  // namespace linalg
}  // namespace gqpred
