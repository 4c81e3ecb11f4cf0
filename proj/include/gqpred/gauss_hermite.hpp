#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gqpred/complex_matrix.hpp"
#include "gqpred/hermitian_eig.hpp"

namespace gqpred {
namespace linalg {

/// Physicists' Gauss-Hermite rule: integral f(x) e^{-x^2} dx ~ sum w_i f(x_i).
/// Weights sum to sqrt(pi); nodes ascend.
struct GaussHermiteRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Golub-Welsch construction: nodes are eigenvalues of the symmetric
/// tridiagonal Jacobi matrix with off-diagonals sqrt(k/2), weights are
/// sqrt(pi) times the squared first components of the eigenvectors.
/// Reuses the library eigensolver, so the rule is bit-stable alongside
/// everything else.
inline GaussHermiteRule gauss_hermite(int order) {
    if (order < 1 || order > 128) {
        throw std::invalid_argument("gauss_hermite: order must be in [1, 128]");
    }
    ComplexMatrix j(order);
    for (int k = 1; k < order; ++k) {
        const double b = std::sqrt(0.5 * k);
        j(k - 1, k) = b;
        j(k, k - 1) = b;
    }
    HermitianEigen eig = hermitian_eig(j);
    GaussHermiteRule rule;
    rule.nodes = eig.eigenvalues;
    rule.weights.resize(order);
    const double sqrt_pi = std::sqrt(M_PI);
    for (int k = 0; k < order; ++k) {
        rule.weights[k] = sqrt_pi * std::norm(eig.eigenvectors(0, k));
    }
    return rule;
}

/// Nodes/weights transformed for averaging against a normal density with the
/// given mean and variance: E[f(X)] ~ sum weights_i f(points_i) with the
/// weights now summing to 1.
struct NormalQuadrature {
    std::vector<double> points;
    std::vector<double> weights;
};

inline NormalQuadrature normal_quadrature(const GaussHermiteRule& rule, double mean, double variance) {
    if (!(variance > 0.0)) throw std::invalid_argument("normal_quadrature: variance must be positive");
    NormalQuadrature q;
    const std::size_t n = rule.nodes.size();
    q.points.resize(n);
    q.weights.resize(n);
    const double scale = std::sqrt(2.0 * variance);
    const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
    for (std::size_t i = 0; i < n; ++i) {
        q.points[i] = mean + scale * rule.nodes[i];
        q.weights[i] = rule.weights[i] * inv_sqrt_pi;
    }
    return q;
}

}  // namespace linalg
}  // namespace gqpred
