#include "cencov/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cencov/error.hpp"

namespace cencov {

namespace {

constexpr int kMaxSweeps = 100;

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

void require_hermitian(const ComplexMatrix& h, double eig_tol) {
  if (!h.square()) {
    throw Error(ErrorKind::NotSquare,
                std::to_string(h.rows()) + "x" + std::to_string(h.cols()) + " matrix");
  }
  for (cplx z : h.data()) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorKind::NotHermitian, "non-finite entry");
    }
  }
  const std::size_t n = h.rows();
  double asym = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      asym = std::max(asym, std::abs(h(i, j) - std::conj(h(j, i))));
    }
  }
  const double bound = eig_tol * (1.0 + h.max_abs());
  if (asym > bound) {
    throw Error(ErrorKind::NotHermitian,
                "max asymmetry " + std::to_string(asym) + " exceeds " + std::to_string(bound));
  }
}

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (i != j) s += std::norm(a(i, j));
    }
  }
  return std::sqrt(s);
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(rows * cols) +
                                                  " entries, got " + std::to_string(data_.size()));
  }
  for (cplx z : data_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorKind::Schema, "matrix entries must be finite");
    }
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  }
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  }
  return m;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (cplx z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::frobenius() const {
  double s = 0.0;
  for (cplx z : data_) s += std::norm(z);
  return std::sqrt(s);
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  require_same_shape(*this, o, "matrix sum");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  require_same_shape(*this, o, "matrix difference");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (cplx& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "matmul inner dimensions " + std::to_string(a.cols()) +
                                                  " vs " + std::to_string(b.rows()));
  }
  const std::size_t n = a.rows();
  const std::size_t m = b.cols();
  const std::size_t inner = a.cols();
  ComplexMatrix c(n, m);
  const auto rows = static_cast<std::ptrdiff_t>(n);
  // i-k-j order keeps the inner loop contiguous in both b and c. The product
  // is spelled out in reals: std::complex operator* goes through __muldc3.
  const cplx* pa = a.data().data();
  const cplx* pb = b.data().data();
  cplx* pc = c.data().data();
#pragma omp parallel for schedule(static) if (n * m * inner > 32768)
  for (std::ptrdiff_t ii = 0; ii < rows; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    cplx* ci = pc + i * m;
    for (std::size_t k = 0; k < inner; ++k) {
      const double ar = pa[i * inner + k].real(), ai = pa[i * inner + k].imag();
      if (ar == 0.0 && ai == 0.0) continue;
      const cplx* bk = pb + k * m;
      for (std::size_t j = 0; j < m; ++j) {
        const double br = bk[j].real(), bi = bk[j].imag();
        ci[j] += cplx(ar * br - ai * bi, ar * bi + ai * br);
      }
    }
  }
  return c;
}

CVector matvec(const ComplexMatrix& a, std::span<const cplx> v) {
  if (a.cols() != v.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "matvec: " + std::to_string(a.cols()) + " columns vs vector of " + std::to_string(v.size()));
  }
  CVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      for (std::size_t p = 0; p < b.rows(); ++p) {
        for (std::size_t q = 0; q < b.cols(); ++q) {
          k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
        }
      }
    }
  }
  return k;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  return max_abs_diff(a.data(), b.data());
}

double max_abs_diff(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "vector lengths " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

double norm2(std::span<const cplx> v) {
  double s = 0.0;
  for (cplx z : v) s += std::norm(z);
  return std::sqrt(s);
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "dot: lengths " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  cplx s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
  return s;
}

EigenResult hermitian_eigen(const ComplexMatrix& h, double eig_tol) {
  require_hermitian(h, eig_tol);
  const std::size_t n = h.rows();

  // Work on the exactly Hermitian part so round-off asymmetry in the input
  // does not leak into the rotations.
  ComplexMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = h(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx v = 0.5 * (h(i, j) + std::conj(h(j, i)));
      a(i, j) = v;
      a(j, i) = std::conj(v);
    }
  }
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = a.frobenius();
  const double target = 1e-14 * scale;
  int sweep = 0;
  double previous_off = off_diagonal_norm(a);
  for (; sweep <= kMaxSweeps; ++sweep) {
    const double off = off_diagonal_norm(a);
    if (off <= target) break;
    // Round-off floor: progress has stalled well inside the requested accuracy.
    if (sweep > 0 && off >= previous_off && off <= 1e-3 * eig_tol * scale) break;
    if (sweep == kMaxSweeps) {
      throw Error(ErrorKind::NoConvergence,
                  "Jacobi did not converge in " + std::to_string(kMaxSweeps) + " sweeps (off-norm " +
                      std::to_string(off) + ")");
    }
    previous_off = off;

    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double r = std::abs(apq);
        if (r == 0.0) continue;
        const cplx phase = apq / r;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * r);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        // U = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
        const cplx upp = c;
        const cplx upq = s;
        const cplx uqp = -s * std::conj(phase);
        const cplx uqq = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = akp * upp + akq * uqp;
          a(k, q) = akp * upq + akq * uqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = std::conj(upp) * apk + std::conj(uqp) * aqk;
          a(q, k) = std::conj(upq) * apk + std::conj(uqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();

        for (std::size_t k = 0; k < n; ++k) {
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = vkp * upp + vkq * uqp;
          v(k, q) = vkp * upq + vkq * uqq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

  EigenResult out;
  out.sweeps = sweep;
  out.eigenvalues.resize(n);
  out.eigenvectors = ComplexMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

PsdVerdict psd_verdict(const ComplexMatrix& h, double psd_tol, double eig_tol) {
  const EigenResult e = hermitian_eigen(h, eig_tol);
  if (e.eigenvalues.empty()) return {true, 0.0};
  const double lo = e.eigenvalues.front();
  const double radius = std::max(std::abs(lo), std::abs(e.eigenvalues.back()));
  return {lo >= -psd_tol * (1.0 + radius), lo};
}

MinNormSolution min_norm_solve(const ComplexMatrix& g, std::span<const cplx> v, double rank_tol,
                               double eig_tol) {
  if (!g.square()) {
    throw Error(ErrorKind::NotSquare, std::to_string(g.rows()) + "x" + std::to_string(g.cols()));
  }
  if (g.rows() != v.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "system of size " + std::to_string(g.rows()) + " with rhs of " + std::to_string(v.size()));
  }
  const EigenResult e = hermitian_eigen(g, eig_tol);
  const std::size_t n = g.rows();
  MinNormSolution sol;
  sol.x.assign(n, cplx{});
  const double lmax = n ? e.eigenvalues.back() : 0.0;
  if (lmax > 0.0) {
    const double cut = rank_tol * lmax;
    for (std::size_t k = 0; k < n; ++k) {
      const double lam = e.eigenvalues[k];
      if (lam <= cut) continue;
      ++sol.rank;
      cplx coeff = 0.0;
      for (std::size_t i = 0; i < n; ++i) coeff += std::conj(e.eigenvectors(i, k)) * v[i];
      coeff /= lam;
      for (std::size_t i = 0; i < n; ++i) sol.x[i] += coeff * e.eigenvectors(i, k);
    }
  }
  CVector gx = matvec(g, sol.x);
  for (std::size_t i = 0; i < n; ++i) gx[i] -= v[i];
  sol.residual = norm2(gx);
  return sol;
}

std::size_t numerical_rank(const ComplexMatrix& m, double rank_tol) {
  const ComplexMatrix gram = matmul(m.adjoint(), m);
  const EigenResult e = hermitian_eigen(gram);
  if (e.eigenvalues.empty()) return 0;
  const double lmax = e.eigenvalues.back();
  if (lmax <= 0.0) return 0;
  return static_cast<std::size_t>(std::count_if(e.eigenvalues.begin(), e.eigenvalues.end(),
                                                [&](double l) { return l > rank_tol * lmax; }));
}

}  // namespace cencov
