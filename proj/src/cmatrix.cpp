#include "rislab/cmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rislab {

namespace {

std::string shape_str(const CMatrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

} // namespace

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Complex(0.0, 0.0)) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("CMatrix: dimensions must be positive");
    }
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("CMatrix: dimensions must be positive");
    }
    if (entries_.size() != rows * cols) {
        throw std::invalid_argument("CMatrix: entry count " + std::to_string(entries_.size()) +
                                    " does not match shape " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
    }
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = Complex(1.0, 0.0);
    }
    return m;
}

CMatrix CMatrix::diag(const std::vector<Complex>& d) {
    CMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        m(i, i) = d[i];
    }
    return m;
}

bool CMatrix::all_finite() const {
    for (const Complex& e : entries_) {
        if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) {
            return false;
        }
    }
    return true;
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw std::invalid_argument("CMatrix add: shape mismatch " + shape_str(*this) + " vs " +
                                    shape_str(other));
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        entries_[i] += other.entries_[i];
    }
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw std::invalid_argument("CMatrix sub: shape mismatch " + shape_str(*this) + " vs " +
                                    shape_str(other));
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        entries_[i] -= other.entries_[i];
    }
    return *this;
}

CMatrix& CMatrix::operator*=(Complex s) {
    for (Complex& e : entries_) {
        e *= s;
    }
    return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(Complex s, CMatrix a) { return a *= s; }

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matmul: inner dimensions differ, " + shape_str(a) + " * " +
                                    shape_str(b));
    }
    CMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex(0.0, 0.0)) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

CMatrix conj_transpose(const CMatrix& a) {
    CMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            out(j, i) = std::conj(a(i, j));
        }
    }
    return out;
}

Complex trace(const CMatrix& a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("trace: matrix not square, " + shape_str(a));
    }
    Complex t(0.0, 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        t += a(i, i);
    }
    return t;
}

double frob_norm_sq(const CMatrix& x) {
    double s = 0.0;
    for (const Complex& e : x.entries()) {
        s += std::norm(e);
    }
    return s;
}

double frob_norm(const CMatrix& x) { return std::sqrt(frob_norm_sq(x)); }

bool is_hermitian(const CMatrix& x, double tol) {
    if (x.rows() != x.cols()) {
        return false;
    }
    double dev = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = i; j < x.cols(); ++j) {
            dev += std::norm(x(i, j) - std::conj(x(j, i)));
        }
    }
    // Off-diagonal deviations appear once in the loop but twice in
    // ||x - x^H||_F^2; doubling everything only over-counts the diagonal,
    // which is fine for a threshold test.
    return std::sqrt(2.0 * dev) <= tol * std::max(1.0, frob_norm(x));
}

namespace {

// In-place lower Cholesky x = L L^H; returns false when a pivot is not
// strictly positive (matrix not positive definite to working precision).
bool cholesky(CMatrix& x) {
    const std::size_t n = x.rows();
    for (std::size_t j = 0; j < n; ++j) {
        double d = x(j, j).real();
        for (std::size_t k = 0; k < j; ++k) {
            d -= std::norm(x(j, k));
        }
        if (!(d > 0.0) || !std::isfinite(d)) {
            return false;
        }
        const double ljj = std::sqrt(d);
        x(j, j) = Complex(ljj, 0.0);
        for (std::size_t i = j + 1; i < n; ++i) {
            Complex s = x(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                s -= x(i, k) * std::conj(x(j, k));
            }
            x(i, j) = s / ljj;
        }
    }
    return true;
}

} // namespace

double logdet_capacity(const CMatrix& x) {
    if (x.rows() != x.cols()) {
        throw std::invalid_argument("logdet_capacity: matrix not square, " + shape_str(x));
    }
    if (!is_hermitian(x)) {
        throw std::invalid_argument("logdet_capacity: input is not Hermitian within tolerance");
    }
    CMatrix chol = x;
    if (cholesky(chol)) {
        double acc = 0.0;
        for (std::size_t i = 0; i < chol.rows(); ++i) {
            acc += std::log2(chol(i, i).real());
        }
        return 2.0 * acc;
    }
    // Cholesky failed; the eigendecomposition settles near-singular cases.
    HermitianEig eig = hermitian_eig(x);
    double acc = 0.0;
    for (double lambda : eig.eigenvalues) {
        if (!(lambda > 0.0)) {
            throw std::invalid_argument("logdet_capacity: input is not positive definite");
        }
        acc += std::log2(lambda);
    }
    return acc;
}

HermitianEig hermitian_eig(const CMatrix& x) {
    if (x.rows() != x.cols()) {
        throw std::invalid_argument("hermitian_eig: matrix not square, " + shape_str(x));
    }
    if (!is_hermitian(x)) {
        throw std::invalid_argument("hermitian_eig: input is not Hermitian within tolerance");
    }
    const std::size_t n = x.rows();
    CMatrix a = x;
    CMatrix v = CMatrix::identity(n);

    // Cyclic Jacobi sweeps with complex rotations: each step zeroes a(p,q)
    // by a unitary similarity built from a phase and a real rotation.
    const double scale = std::max(frob_norm(a), 1e-300);
    const double stop = 1e-15 * scale;
    const int max_sweeps = 100;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                off += std::norm(a(p, q));
            }
        }
        if (std::sqrt(2.0 * off) <= stop) {
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double m = std::abs(apq);
                if (m <= 1e-300) {
                    continue;
                }
                const Complex phase = apq / m; // e^{i arg(apq)}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * m);
                const double t =
                    (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // Columns transform by J with J(p,p)=c, J(q,p)=-s*conj(phase),
                // J(p,q)=s*phase, J(q,q)=c; rows by J^H.
                for (std::size_t i = 0; i < n; ++i) {
                    const Complex aip = a(i, p);
                    const Complex aiq = a(i, q);
                    a(i, p) = c * aip - s * std::conj(phase) * aiq;
                    a(i, q) = s * phase * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const Complex apj = a(p, j);
                    const Complex aqj = a(q, j);
                    a(p, j) = c * apj - s * phase * aqj;
                    a(q, j) = s * std::conj(phase) * apj + c * aqj;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const Complex vip = v(i, p);
                    const Complex viq = v(i, q);
                    v(i, p) = c * vip - s * std::conj(phase) * viq;
                    v(i, q) = s * phase * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    HermitianEig out;
    out.eigenvalues.resize(n);
    out.eigenvectors = CMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = a(order[j], order[j]).real();
        for (std::size_t i = 0; i < n; ++i) {
            out.eigenvectors(i, j) = v(i, order[j]);
        }
    }
    return out;
}

RealVector complex_to_realvec(const CMatrix& x) {
    const std::size_t count = x.rows() * x.cols();
    RealVector v(2 * count);
    std::size_t idx = 0;
    for (std::size_t j = 0; j < x.cols(); ++j) {
        for (std::size_t i = 0; i < x.rows(); ++i) {
            v[idx] = x(i, j).real();
            v[count + idx] = x(i, j).imag();
            ++idx;
        }
    }
    return v;
}

CMatrix realvec_to_complex(const RealVector& v, std::size_t rows, std::size_t cols) {
    const std::size_t count = rows * cols;
    if (v.size() != 2 * count) {
        throw std::invalid_argument("realvec_to_complex: vector length " +
                                    std::to_string(v.size()) + " does not match 2*" +
                                    std::to_string(rows) + "*" + std::to_string(cols));
    }
    CMatrix x(rows, cols);
    std::size_t idx = 0;
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < rows; ++i) {
            x(i, j) = Complex(v[idx], v[count + idx]);
            ++idx;
        }
    }
    return x;
}

} // namespace rislab
