#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gqpred {

/// Scalar type used throughout the library.
using cplx = std::complex<double>;

namespace linalg {

/// Dense square complex matrix, row-major storage.
///
/// Deliberately minimal: the library needs square matrices only
/// (density operators, unitaries, generators), so rectangular shapes
/// and expression templates are out of scope.
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    explicit ComplexMatrix(int dim) : dim_(dim) {
        if (dim < 0) {
            throw std::invalid_argument("ComplexMatrix: dimension must be nonnegative");
        }
        a_.assign(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), cplx(0.0, 0.0));
    }

    static ComplexMatrix identity(int dim) {
        ComplexMatrix m(dim);
        for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
        return m;
    }

    int dim() const { return dim_; }

    cplx& operator()(int i, int j) {
        return a_[static_cast<std::size_t>(i) * dim_ + j];
    }
    const cplx& operator()(int i, int j) const {
        return a_[static_cast<std::size_t>(i) * dim_ + j];
    }

    cplx* row(int i) { return a_.data() + static_cast<std::size_t>(i) * dim_; }
    const cplx* row(int i) const { return a_.data() + static_cast<std::size_t>(i) * dim_; }

    cplx* data() { return a_.data(); }
    const cplx* data() const { return a_.data(); }

    ComplexMatrix conj_transpose() const {
        ComplexMatrix r(dim_);
        for (int i = 0; i < dim_; ++i)
            for (int j = 0; j < dim_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const cplx& v : a_) s += std::norm(v);
        return std::sqrt(s);
    }

    /// Largest |a_ij - conj(a_ji)| over all entries.
    double hermiticity_deviation() const {
        double d = 0.0;
        for (int i = 0; i < dim_; ++i)
            for (int j = i; j < dim_; ++j) {
                d = std::max(d, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
            }
        return d;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        check_same_dim(o, "+=");
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        check_same_dim(o, "-=");
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
        return *this;
    }

    ComplexMatrix& operator*=(cplx s) {
        for (cplx& v : a_) v *= s;
        return *this;
    }

    /// this += s * o (fused accumulate used by quadrature mixtures).
    void add_scaled(cplx s, const ComplexMatrix& o) {
        check_same_dim(o, "add_scaled");
        for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += s * o.a_[k];
    }

private:
    void check_same_dim(const ComplexMatrix& o, const char* op) const {
        if (o.dim_ != dim_) {
            throw std::invalid_argument(std::string("ComplexMatrix: dimension mismatch in ") + op);
        }
    }

    int dim_ = 0;
    std::vector<cplx> a_;
};

inline ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
    a += b;
    return a;
}

inline ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
    a -= b;
    return a;
}

inline ComplexMatrix operator*(cplx s, ComplexMatrix a) {
    a *= s;
    return a;
}

/// Dense product, ikj loop order for cache friendliness.
inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int n = a.dim();
    if (b.dim() != n) throw std::invalid_argument("ComplexMatrix: dimension mismatch in product");
    ComplexMatrix c(n);
    for (int i = 0; i < n; ++i) {
        cplx* ci = c.row(i);
        const cplx* ai = a.row(i);
        for (int k = 0; k < n; ++k) {
            const cplx aik = ai[k];
            if (aik == cplx(0.0, 0.0)) continue;
            const cplx* bk = b.row(k);
            for (int j = 0; j < n; ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

inline cplx trace(const ComplexMatrix& a) {
    cplx t(0.0, 0.0);
    for (int i = 0; i < a.dim(); ++i) t += a(i, i);
    return t;
}

/// tr(A B) in O(n^2) without forming the product.
inline cplx trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int n = a.dim();
    if (b.dim() != n) throw std::invalid_argument("trace_product: dimension mismatch");
    cplx t(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
        const cplx* ai = a.row(i);
        for (int j = 0; j < n; ++j) t += ai[j] * b(j, i);
    }
    return t;
}

/// Kronecker product with a guard on the output dimension. Index
/// convention: (i1*dim2 + i2, j1*dim2 + j2) = a(i1,j1) * b(i2,j2).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, int max_dim = 4096) {
    const long long out = static_cast<long long>(a.dim()) * b.dim();
    if (out > max_dim) {
        throw std::length_error("kron: output dimension " + std::to_string(out) +
                                " exceeds cap " + std::to_string(max_dim));
    }
    const int n1 = a.dim(), n2 = b.dim();
    ComplexMatrix c(n1 * n2);
    for (int i1 = 0; i1 < n1; ++i1)
        for (int j1 = 0; j1 < n1; ++j1) {
            const cplx f = a(i1, j1);
            if (f == cplx(0.0, 0.0)) continue;
            for (int i2 = 0; i2 < n2; ++i2) {
                cplx* crow = c.row(i1 * n2 + i2) + static_cast<std::size_t>(j1) * n2;
                const cplx* brow = b.row(i2);
                for (int j2 = 0; j2 < n2; ++j2) crow[j2] += f * brow[j2];
            }
        }
    return c;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int n = a.dim();
    if (b.dim() != n) throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double d = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
    return d;
}

inline double frobenius_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    const int n = a.dim();
    if (b.dim() != n) throw std::invalid_argument("frobenius_diff: dimension mismatch");
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += std::norm(a(i, j) - b(i, j));
    return std::sqrt(s);
}

}  // namespace linalg
}  // namespace gqpred
