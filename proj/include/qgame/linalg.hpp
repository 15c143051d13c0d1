#pragma once

// Dense complex linear algebra for the handful of small matrices this
// project needs. Row-major storage throughout; tensor products always put
// the player-1 factor first.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "qgame/errors.hpp"

namespace qgame {

using cx = std::complex<double>;

// Default tolerance for structural checks (unitarity, hermiticity, trace).
inline constexpr double kStructuralTol = 1e-12;
// Tolerance for dollar comparisons.
inline constexpr double kDollarTol = 1e-6;

inline bool is_finite(cx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, cx{0.0, 0.0}) {
        if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
    }
    Matrix(std::size_t rows, std::size_t cols, std::vector<cx> entries)
        : rows_(rows), cols_(cols), a_(std::move(entries)) {
        if (rows == 0 || cols == 0) throw DimensionError("matrix dimensions must be positive");
        if (a_.size() != rows * cols) throw DimensionError("entry count does not match dimensions");
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    cx operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<cx>& data() const { return a_; }

    bool all_finite() const {
        for (cx v : a_)
            if (!is_finite(v)) return false;
        return true;
    }

    Matrix adjoint() const {
        Matrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = std::conj((*this)(i, j));
        return r;
    }

    cx trace() const {
        if (!square()) throw DimensionError("trace requires a square matrix");
        cx t{0.0, 0.0};
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw DimensionError("matrix product: inner dimensions differ");
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                cx aik = a(i, k);
                if (aik == cx{0.0, 0.0}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }

    friend Matrix operator*(cx s, const Matrix& m) {
        Matrix r = m;
        for (cx& v : r.a_) v *= s;
        return r;
    }
    friend Matrix operator*(double s, const Matrix& m) { return cx{s, 0.0} * m; }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw DimensionError("matrix sum: shapes differ");
        Matrix r = a;
        for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] += b.a_[i];
        return r;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw DimensionError("matrix difference: shapes differ");
        Matrix r = a;
        for (std::size_t i = 0; i < r.a_.size(); ++i) r.a_[i] -= b.a_[i];
        return r;
    }

private:
    std::size_t rows_, cols_;
    std::vector<cx> a_;
};

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("max_abs_diff: shapes differ");
    double d = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
    return d;
}

// Kronecker product, player-1 factor first:
// entry ((i*b.rows+k),(j*b.cols+l)) = a(i,j) * b(k,l).
inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            cx aij = a(i, j);
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return r;
}

inline bool is_unitary(const Matrix& a, double tol = kStructuralTol) {
    if (!a.square()) throw DimensionError("is_unitary requires a square matrix");
    Matrix g = a.adjoint() * a;
    return max_abs_diff(g, Matrix::identity(a.rows())) <= tol;
}

inline bool is_hermitian(const Matrix& a, double tol = kStructuralTol) {
    if (!a.square()) return false;
    return max_abs_diff(a, a.adjoint()) <= tol;
}

struct Ket {
    std::vector<cx> amp;

    Ket() = default;
    explicit Ket(std::vector<cx> amplitudes) : amp(std::move(amplitudes)) {
        if (amp.empty()) throw DimensionError("ket must have dimension >= 1");
    }
    static Ket basis(std::size_t dim, std::size_t index) {
        std::vector<cx> a(dim, cx{0.0, 0.0});
        a.at(index) = 1.0;
        return Ket(std::move(a));
    }

    std::size_t dim() const { return amp.size(); }

    double norm() const {
        double s = 0.0;
        for (cx v : amp) s += std::norm(v);
        return std::sqrt(s);
    }

    Ket normalized() const {
        double n = norm();
        if (n == 0.0) throw ValidationError("cannot normalize the zero ket");
        Ket r = *this;
        for (cx& v : r.amp) v /= n;
        return r;
    }
};

inline Ket apply(const Matrix& m, const Ket& k) {
    if (m.cols() != k.dim()) throw DimensionError("matrix-ket product: dimensions differ");
    std::vector<cx> out(m.rows(), cx{0.0, 0.0});
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * k.amp[j];
    return Ket(std::move(out));
}

// |k><b| -- k * conj(b)^T.
inline Matrix outer(const Ket& k, const Ket& b) {
    Matrix r(k.dim(), b.dim());
    for (std::size_t i = 0; i < k.dim(); ++i)
        for (std::size_t j = 0; j < b.dim(); ++j) r(i, j) = k.amp[i] * std::conj(b.amp[j]);
    return r;
}

inline Ket kron(const Ket& a, const Ket& b) {
    std::vector<cx> out;
    out.reserve(a.dim() * b.dim());
    for (cx va : a.amp)
        for (cx vb : b.amp) out.push_back(va * vb);
    return Ket(std::move(out));
}

// m x m unitary DFT, entry (s,d) = exp(2*pi*i*s*d/m)/sqrt(m).
inline Matrix dft_matrix(std::size_t m) {
    if (m == 0) throw ValidationError("dft_matrix: dimension must be positive");
    Matrix r(m, m);
    const double w = 2.0 * std::numbers::pi / static_cast<double>(m);
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    for (std::size_t s = 0; s < m; ++s)
        for (std::size_t d = 0; d < m; ++d) {
            double phi = w * static_cast<double>(s) * static_cast<double>(d);
            r(s, d) = scale * cx{std::cos(phi), std::sin(phi)};
        }
    return r;
}

inline Matrix hadamard() {
    const double h = 1.0 / std::sqrt(2.0);
    return Matrix(2, 2, {h, h, h, -h});
}

inline Matrix negation() { return Matrix(2, 2, {0.0, 1.0, 1.0, 0.0}); }

// Eigenvalues of a Hermitian matrix by cyclic Jacobi sweeps. Good for the
// dimensions this project uses (<= 64); the input must already be Hermitian.
inline std::vector<double> hermitian_eigenvalues(Matrix a, double tol = 1e-14,
                                                 int max_sweeps = 60) {
    if (!a.square()) throw DimensionError("hermitian_eigenvalues requires a square matrix");
    const std::size_t n = a.rows();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off <= tol) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                cx apq = a(p, q);
                if (std::abs(apq) <= tol) continue;
                double app = a(p, p).real();
                double aqq = a(q, q).real();
                double phi = std::arg(apq);
                double theta = 0.5 * std::atan2(2.0 * std::abs(apq), app - aqq);
                double c = std::cos(theta), s = std::sin(theta);
                cx e{std::cos(phi), -std::sin(phi)};  // exp(-i*phi)
                // a <- J^dagger a J with J mixing columns p,q:
                // J(p,p)=c, J(p,q)=-s, J(q,p)=e*s, J(q,q)=e*c.
                for (std::size_t i = 0; i < n; ++i) {  // a <- a J
                    cx aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip + e * s * aiq;
                    a(i, q) = -s * aip + e * c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {  // a <- J^dagger a
                    cx apj = a(p, j), aqj = a(q, j);
                    a(p, j) = c * apj + std::conj(e) * s * aqj;
                    a(q, j) = -s * apj + std::conj(e) * c * aqj;
                }
            }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i).real();
    return ev;
}

inline double min_eigenvalue(const Matrix& a) {
    std::vector<double> ev = hermitian_eigenvalues(a);
    double m = ev.front();
    for (double v : ev) m = std::min(m, v);
    return m;
}

}  // namespace qgame
