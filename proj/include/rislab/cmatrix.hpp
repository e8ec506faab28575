#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace rislab {

using Complex = std::complex<double>;
using RealVector = std::vector<double>;

// Dense complex matrix, row-major, double precision.
class CMatrix {
  public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols);
    CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    static CMatrix identity(std::size_t n);
    static CMatrix diag(const std::vector<Complex>& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return entries_.size(); }

    Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    const std::vector<Complex>& entries() const { return entries_; }
    std::vector<Complex>& entries() { return entries_; }

    bool all_finite() const;

    CMatrix& operator+=(const CMatrix& other);
    CMatrix& operator-=(const CMatrix& other);
    CMatrix& operator*=(Complex s);

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(Complex s, CMatrix a);

// Standard complex matrix product; throws on a dimension mismatch, naming
// both shapes.
CMatrix matmul(const CMatrix& a, const CMatrix& b);

CMatrix conj_transpose(const CMatrix& a);

Complex trace(const CMatrix& a);

// Sum of squared entry moduli.
double frob_norm_sq(const CMatrix& x);
double frob_norm(const CMatrix& x);

// ||x - x^H||_F <= tol * max(1, ||x||_F)
bool is_hermitian(const CMatrix& x, double tol = 1e-9);

// log2 det of a Hermitian positive-definite matrix. Uses Cholesky when it
// succeeds and falls back to the eigendecomposition; never forms the raw
// determinant. Throws for non-Hermitian or non-positive-definite input.
double logdet_capacity(const CMatrix& x);

struct HermitianEig {
    RealVector eigenvalues; // descending
    CMatrix eigenvectors;   // columns; x = V diag(lambda) V^H
};

// Cyclic Jacobi eigendecomposition for Hermitian input.
HermitianEig hermitian_eig(const CMatrix& x);

// Real encoding of a complex matrix: column-stacked real parts followed by
// column-stacked imaginary parts. realvec_to_complex is its exact inverse.
RealVector complex_to_realvec(const CMatrix& x);
CMatrix realvec_to_complex(const RealVector& v, std::size_t rows, std::size_t cols);

} // namespace rislab
