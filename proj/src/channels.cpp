#include "cencov/channels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cencov/error.hpp"

namespace cencov {

namespace {

using Index = FiniteGroupoid::Index;

constexpr double kRowSumTol = 1e-12;

bool all_units(const FiniteGroupoid& g) {
  for (Index a = 0; a < g.size(); ++a) {
    if (!g.is_unit(a)) return false;
  }
  return true;
}

void require_shape(const QuantumKernel& k) {
  if (!k.source || !k.target) throw Error(ErrorKind::GroupoidMismatch, "kernel without groupoids");
  if (k.pi.rows() != k.source->size() || k.pi.cols() != k.target->size()) {
    throw Error(ErrorKind::DimensionMismatch, "kernel matrix does not match its groupoids");
  }
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

// Fiber matrix of Pi on the product groupoid at target (x1, x2).
ComplexMatrix joint_fiber(const QuantumKernel& k, Index x1, Index x2) {
  const FiniteGroupoid& g1 = *k.source;
  const FiniteGroupoid& g2 = *k.target;
  const auto f1 = g1.fiber(x1);
  const auto f2 = g2.fiber(x2);
  const std::size_t n2 = f2.size();
  ComplexMatrix m(f1.size() * n2, f1.size() * n2);
  for (std::size_t k1 = 0; k1 < f1.size(); ++k1) {
    const Index i1 = g1.inverse(f1[k1]);
    for (std::size_t k2 = 0; k2 < n2; ++k2) {
      const Index i2 = g2.inverse(f2[k2]);
      for (std::size_t l1 = 0; l1 < f1.size(); ++l1) {
        const Index c1 = g1.compose(i1, f1[l1]);
        for (std::size_t l2 = 0; l2 < n2; ++l2) {
          m(k1 * n2 + k2, l1 * n2 + l2) = k.pi(c1, g2.compose(i2, f2[l2]));
        }
      }
    }
  }
  return m;
}

}  // namespace

ClassicalKernel ClassicalKernel::make(std::vector<std::vector<double>> rows) {
  if (rows.empty() || rows.front().empty()) throw Error(ErrorKind::DimensionMismatch, "empty classical kernel");
  const std::size_t m = rows.front().size();
  for (std::size_t x = 0; x < rows.size(); ++x) {
    if (rows[x].size() != m) throw Error(ErrorKind::DimensionMismatch, "ragged classical kernel");
    double s = 0.0;
    for (double v : rows[x]) {
      if (!std::isfinite(v) || v < -kRowSumTol) {
        throw Error(ErrorKind::RowSumViolation, "row " + std::to_string(x) + " has a negative entry");
      }
      s += v;
    }
    if (std::abs(s - 1.0) > kRowSumTol) {
      throw Error(ErrorKind::RowSumViolation, "row " + std::to_string(x) + " sums to " + std::to_string(s));
    }
  }
  return ClassicalKernel(std::move(rows));
}

std::vector<double> ClassicalKernel::push(std::span<const double> p) const {
  if (p.size() != rows()) throw Error(ErrorKind::DimensionMismatch, "distribution length");
  std::vector<double> out(cols(), 0.0);
  for (std::size_t x = 0; x < rows(); ++x) {
    for (std::size_t y = 0; y < cols(); ++y) out[y] += p[x] * k_[x][y];
  }
  return out;
}

std::vector<double> ClassicalKernel::pull(std::span<const double> f) const {
  if (f.size() != cols()) throw Error(ErrorKind::DimensionMismatch, "observable length");
  std::vector<double> out(rows(), 0.0);
  for (std::size_t x = 0; x < rows(); ++x) {
    for (std::size_t y = 0; y < cols(); ++y) out[x] += k_[x][y] * f[y];
  }
  return out;
}

ClassicalKernel compose(const ClassicalKernel& k, const ClassicalKernel& l) {
  if (k.cols() != l.rows()) throw Error(ErrorKind::DimensionMismatch, "classical compose");
  std::vector<std::vector<double>> c(k.rows(), std::vector<double>(l.cols(), 0.0));
  for (std::size_t x = 0; x < k.rows(); ++x) {
    for (std::size_t y = 0; y < k.cols(); ++y) {
      for (std::size_t z = 0; z < l.cols(); ++z) c[x][z] += k(x, y) * l(y, z);
    }
  }
  // Rounding can push a row sum a few ulps away; renormalize before re-validating.
  for (auto& row : c) {
    double s = 0.0;
    for (double v : row) s += v;
    for (double& v : row) v /= s;
  }
  return ClassicalKernel::make(std::move(c));
}

std::string KernelReport::summary() const {
  std::ostringstream os;
  os << "normalization_deficit=" << normalization_deficit << " positivity_min_eigenvalue=" << positivity_min_eigenvalue
     << " hermiticity_deficit=" << hermiticity_deficit;
  if (offending_element) os << " (offending unit " << *offending_element << ")";
  return os.str();
}

KernelReport validate_kernel(const QuantumKernel& k, const KernelTolerances& tol) {
  require_shape(k);
  const FiniteGroupoid& g1 = *k.source;
  const FiniteGroupoid& g2 = *k.target;
  KernelReport r;

  for (Index a1 = 0; a1 < g1.size(); ++a1) {
    cplx s = 0.0;
    for (Index x = 0; x < g2.num_outcomes(); ++x) s += k.pi(a1, g2.unit_of(x)) * g2.P(x);
    const double want = g1.is_unit(a1) ? 1.0 : 0.0;
    r.normalization_deficit = std::max(r.normalization_deficit, std::abs(s - want));
  }
  r.normalized = r.normalization_deficit <= tol.normalization;

  r.positive = true;
  r.positivity_min_eigenvalue = std::numeric_limits<double>::infinity();
  CVector row(g2.size());
  for (Index x1 = 0; x1 < g1.num_outcomes(); ++x1) {
    const Index u = g1.unit_of(x1);
    for (Index a2 = 0; a2 < g2.size(); ++a2) row[a2] = k.pi(u, a2);
    for (Index x2 = 0; x2 < g2.num_outcomes(); ++x2) {
      const PsdVerdict v = psd_verdict(hermitian_part(fiber_matrix(g2, row, x2)), tol.psd);
      r.positivity_min_eigenvalue = std::min(r.positivity_min_eigenvalue, v.min_eigenvalue);
      if (!v.is_psd && r.positive) {
        r.positive = false;
        r.offending_element = u;
      }
    }
  }

  double scale = 1.0 + k.pi.max_abs();
  for (Index a1 = 0; a1 < g1.size(); ++a1) {
    for (Index a2 = 0; a2 < g2.size(); ++a2) {
      const cplx lhs = std::conj(k.pi(a1, a2));
      const cplx rhs = g2.delta(a2) * k.pi(g1.inverse(a1), g2.inverse(a2));
      r.hermiticity_deficit = std::max(r.hermiticity_deficit, std::abs(lhs - rhs));
    }
  }
  r.hermitian = r.hermiticity_deficit <= tol.hermiticity * scale;

  r.jointly_positive = true;
  r.joint_min_eigenvalue = std::numeric_limits<double>::infinity();
  for (Index x1 = 0; x1 < g1.num_outcomes(); ++x1) {
    for (Index x2 = 0; x2 < g2.num_outcomes(); ++x2) {
      const PsdVerdict v = psd_verdict(hermitian_part(joint_fiber(k, x1, x2)), tol.psd);
      r.joint_min_eigenvalue = std::min(r.joint_min_eigenvalue, v.min_eigenvalue);
      r.jointly_positive = r.jointly_positive && v.is_psd;
    }
  }
  return r;
}

QuantumKernel identity_kernel(GroupoidPtr g) {
  const std::size_t n = g->size();
  ComplexMatrix pi(n, n);
  for (Index a = 0; a < n; ++a) pi(a, a) = 1.0 / g->nu(a);
  return {g, g, std::move(pi)};
}

CVector push_phi(const QuantumKernel& k, std::span<const cplx> phi1) {
  require_shape(k);
  const FiniteGroupoid& g1 = *k.source;
  if (phi1.size() != g1.size()) throw Error(ErrorKind::DimensionMismatch, "push: phi length");
  CVector w(g1.size());
  for (Index a = 0; a < g1.size(); ++a) w[a] = phi1[a] * g1.nu(a);
  // phi2 = Pi^T w, i.e. the row vector w times Pi.
  return matvec(k.pi.transpose(), w);
}

State push_state(const State& rho, const QuantumKernel& k, const StateTolerances& tol) {
  require_shape(k);
  require_same_groupoid(*rho.groupoid(), *k.source, "push_state");
  CVector phi2 = push_phi(k, rho.phi());
  const StateReport r = check_state(phi2, *k.target, tol);
  if (!r.normalized) throw Error(ErrorKind::NormalizationLost, r.summary());
  if (!r.positive || !r.symmetric) throw Error(ErrorKind::PositivityLost, r.summary());
  return State::make(k.target, std::move(phi2), tol);
}

AlgebraElement pull_observable(const QuantumKernel& k, const AlgebraElement& f2) {
  require_shape(k);
  if (!f2.groupoid) throw Error(ErrorKind::GroupoidMismatch, "pull: observable without groupoid");
  require_same_groupoid(*f2.groupoid, *k.target, "pull_observable");
  const FiniteGroupoid& g2 = *k.target;
  CVector w(g2.size());
  for (Index a = 0; a < g2.size(); ++a) w[a] = f2.coeff[a] * g2.nu(a);
  return {k.source, matvec(k.pi, w)};
}

QuantumKernel compose(const QuantumKernel& k12, const QuantumKernel& k23) {
  require_shape(k12);
  require_shape(k23);
  require_same_groupoid(*k12.target, *k23.source, "compose");
  ComplexMatrix scaled = k23.pi;
  const FiniteGroupoid& g2 = *k12.target;
  for (Index a2 = 0; a2 < scaled.rows(); ++a2) {
    for (Index a3 = 0; a3 < scaled.cols(); ++a3) scaled(a2, a3) *= g2.nu(a2);
  }
  return {k12.source, k23.target, matmul(k12.pi, scaled)};
}

QuantumKernel embed_classical(const ClassicalKernel& k, GroupoidPtr g1, GroupoidPtr g2) {
  if (!all_units(*g1) || !all_units(*g2)) {
    throw Error(ErrorKind::Unsupported, "embed_classical needs trivial groupoids");
  }
  if (k.rows() != g1->num_outcomes() || k.cols() != g2->num_outcomes()) {
    throw Error(ErrorKind::DimensionMismatch, "kernel shape does not match the outcome sets");
  }
  ComplexMatrix pi(g1->size(), g2->size());
  for (Index x = 0; x < g1->num_outcomes(); ++x) {
    for (Index y = 0; y < g2->num_outcomes(); ++y) pi(g1->unit_of(x), g2->unit_of(y)) = k(x, y) / g2->P(y);
  }
  return {std::move(g1), std::move(g2), std::move(pi)};
}

MatrixMap::MatrixMap(std::size_t n, std::size_t m, std::vector<ComplexMatrix> images)
    : n_(n), m_(m), images_(std::move(images)) {
  if (images_.size() != n * n) throw Error(ErrorKind::DimensionMismatch, "matrix map needs n*n images");
  for (const auto& im : images_) {
    if (im.rows() != m || im.cols() != m) throw Error(ErrorKind::DimensionMismatch, "matrix map image shape");
  }
}

ComplexMatrix MatrixMap::operator()(const ComplexMatrix& d) const {
  if (d.rows() != n_ || d.cols() != n_) throw Error(ErrorKind::DimensionMismatch, "matrix map input shape");
  ComplexMatrix out(m_, m_);
  for (std::size_t x = 0; x < n_; ++x) {
    for (std::size_t y = 0; y < n_; ++y) {
      if (d(x, y) != cplx{}) out += image(x, y) * d(x, y);
    }
  }
  return out;
}

ComplexMatrix MatrixMap::choi() const {
  ComplexMatrix c(n_ * m_, n_ * m_);
  for (std::size_t x = 0; x < n_; ++x) {
    for (std::size_t y = 0; y < n_; ++y) {
      const ComplexMatrix& im = image(x, y);
      for (std::size_t a = 0; a < m_; ++a) {
        for (std::size_t b = 0; b < m_; ++b) c(x * m_ + a, y * m_ + b) = im(a, b);
      }
    }
  }
  return c;
}

MatrixMap kernel_to_cp_map(const QuantumKernel& k) {
  require_shape(k);
  require_uniform_pair(*k.source, "kernel_to_cp_map");
  require_uniform_pair(*k.target, "kernel_to_cp_map");
  const FiniteGroupoid& g1 = *k.source;
  const FiniteGroupoid& g2 = *k.target;
  const std::size_t n = g1.num_outcomes();
  const std::size_t m = g2.num_outcomes();
  // Phi_*(E_xy)[a,b] = Pi(x -> y, a -> b) / m, read off from
  // density_from_state ∘ push ∘ state_from_density on matrix units.
  std::vector<ComplexMatrix> images;
  images.reserve(n * n);
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < n; ++y) {
      ComplexMatrix im(m, m);
      const Index a1 = g1.pair_element(y, x);
      for (Index a = 0; a < m; ++a) {
        for (Index b = 0; b < m; ++b) im(a, b) = k.pi(a1, g2.pair_element(b, a)) / static_cast<double>(m);
      }
      images.push_back(std::move(im));
    }
  }
  return MatrixMap(n, m, std::move(images));
}

QuantumKernel kernel_from_matrix_map(const MatrixMap& phi, GroupoidPtr g1, GroupoidPtr g2) {
  require_uniform_pair(*g1, "kernel_from_matrix_map");
  require_uniform_pair(*g2, "kernel_from_matrix_map");
  const std::size_t n = g1->num_outcomes();
  const std::size_t m = g2->num_outcomes();
  if (phi.in_dim() != n || phi.out_dim() != m) {
    throw Error(ErrorKind::DimensionMismatch, "matrix map dimensions do not match the groupoids");
  }
  ComplexMatrix pi(g1->size(), g2->size());
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < n; ++y) {
      const Index a1 = g1->pair_element(y, x);
      const ComplexMatrix& im = phi.image(x, y);
      for (Index a = 0; a < m; ++a) {
        for (Index b = 0; b < m; ++b) pi(a1, g2->pair_element(b, a)) = static_cast<double>(m) * im(a, b);
      }
    }
  }
  return {std::move(g1), std::move(g2), std::move(pi)};
}

QuantumKernel choi_to_kernel(const std::vector<ComplexMatrix>& kraus, GroupoidPtr g1, GroupoidPtr g2, double tol) {
  require_uniform_pair(*g1, "choi_to_kernel");
  require_uniform_pair(*g2, "choi_to_kernel");
  const std::size_t n = g1->num_outcomes();
  const std::size_t m = g2->num_outcomes();
  if (kraus.empty()) throw Error(ErrorKind::NonTracePreserving, "empty Kraus list");
  ComplexMatrix completeness(n, n);
  for (const auto& a : kraus) {
    if (a.rows() != m || a.cols() != n) {
      throw Error(ErrorKind::DimensionMismatch, "Kraus operators must be " + std::to_string(m) + "x" + std::to_string(n));
    }
    completeness += a.adjoint() * a;
  }
  const double dev = max_abs_diff(completeness, ComplexMatrix::identity(n));
  if (dev > tol) throw Error(ErrorKind::NonTracePreserving, "max |sum A†A - I| = " + std::to_string(dev));

  std::vector<ComplexMatrix> images;
  images.reserve(n * n);
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < n; ++y) {
      ComplexMatrix im(m, m);
      for (const auto& a : kraus) {
        for (Index p = 0; p < m; ++p) {
          for (Index q = 0; q < m; ++q) im(p, q) += a(p, x) * std::conj(a(q, y));
        }
      }
      images.push_back(std::move(im));
    }
  }
  return kernel_from_matrix_map(MatrixMap(n, m, std::move(images)), std::move(g1), std::move(g2));
}

CpVerdict cp_verdict(const QuantumKernel& k, double psd_tol) {
  const ComplexMatrix c = kernel_to_cp_map(k).choi();
  const ComplexMatrix h = hermitian_part(c);
  const bool hermitian = max_abs_diff(c, h) <= 1e-9 * (1.0 + c.max_abs());
  const PsdVerdict v = psd_verdict(h, psd_tol);
  return {hermitian && v.is_psd, v.min_eigenvalue, numerical_rank(c)};
}

bool check_ncp_morphism(const QuantumKernel& k, const State& rho1, const State& rho2, double tol) {
  require_shape(k);
  require_same_groupoid(*rho1.groupoid(), *k.source, "check_ncp_morphism");
  require_same_groupoid(*rho2.groupoid(), *k.target, "check_ncp_morphism");
  return max_abs_diff(push_phi(k, rho1.phi()), rho2.phi()) <= tol;
}

std::vector<ComplexMatrix> depolarizing_kraus(double lambda) {
  const cplx i{0.0, 1.0};
  const double a = std::sqrt(1.0 - 3.0 * lambda / 4.0);
  const double b = std::sqrt(lambda / 4.0);
  return {
      ComplexMatrix(2, 2, {a, 0.0, 0.0, a}),
      ComplexMatrix(2, 2, {0.0, b, b, 0.0}),
      ComplexMatrix(2, 2, {0.0, -i * b, i * b, 0.0}),
      ComplexMatrix(2, 2, {b, 0.0, 0.0, -b}),
  };
}

QuantumKernel transpose_kernel(GroupoidPtr g) {
  require_uniform_pair(*g, "transpose_kernel");
  const std::size_t n = g->num_outcomes();
  std::vector<ComplexMatrix> images;
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < n; ++y) {
      ComplexMatrix e(n, n);
      e(y, x) = 1.0;
      images.push_back(std::move(e));
    }
  }
  return kernel_from_matrix_map(MatrixMap(n, n, std::move(images)), g, g);
}

}  // namespace cencov
