#pragma once

// Dense complex linear algebra used throughout the library: a row-major
// matrix type, a cyclic Jacobi Hermitian eigensolver, PSD verdicts and a
// spectral minimum-norm solver.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cencov {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

struct Tolerances {
  double eig = 1e-10;
  double psd = 1e-9;
  double rank = 1e-9;
};

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  /// Throws DimensionMismatch if entries.size() != rows*cols, Schema on
  /// non-finite entries.
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const cplx> data() const noexcept { return data_; }
  std::span<cplx> data() noexcept { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  /// Largest absolute entry.
  double max_abs() const;
  double frobenius() const;
  cplx trace() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  /// Matrix product (OpenMP-parallel over rows).
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// Parallel dense product. The serial reference is reference::matmul.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
CVector matvec(const ComplexMatrix& a, std::span<const cplx> v);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// max_ij |a_ij - b_ij|; DimensionMismatch on shape disagreement.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b);
double norm2(std::span<const cplx> v);
cplx dot(std::span<const cplx> a, std::span<const cplx> b);  // a† b

struct EigenResult {
  std::vector<double> eigenvalues;  // ascending
  ComplexMatrix eigenvectors;       // column k pairs with eigenvalues[k]
  int sweeps = 0;
};

/// Cyclic Jacobi on a Hermitian matrix, capped at 100 sweeps.
EigenResult hermitian_eigen(const ComplexMatrix& h, double eig_tol = 1e-10);

struct PsdVerdict {
  bool is_psd = false;
  double min_eigenvalue = 0.0;
};

/// is_psd iff lambda_min >= -psd_tol * (1 + spectral radius).
PsdVerdict psd_verdict(const ComplexMatrix& h, double psd_tol = 1e-9, double eig_tol = 1e-10);

struct MinNormSolution {
  CVector x;
  double residual = 0.0;
  std::size_t rank = 0;
};

/// Spectral pseudoinverse solve of G x = v for Hermitian PSD G; eigenvalues
/// at or below rank_tol * lambda_max are treated as zero.
MinNormSolution min_norm_solve(const ComplexMatrix& g, std::span<const cplx> v,
                               double rank_tol = 1e-9, double eig_tol = 1e-10);

/// Numerical rank of an arbitrary matrix: number of squared singular values
/// (eigenvalues of M†M) above rank_tol * the largest one.
std::size_t numerical_rank(const ComplexMatrix& m, double rank_tol = 1e-9);

}  // namespace cencov
