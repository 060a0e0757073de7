#include "cencov/reference.hpp"

#include <cmath>

#include "cencov/error.hpp"

namespace cencov::reference {

namespace {
using Index = FiniteGroupoid::Index;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "reference::matmul");
  ComplexMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      cplx s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  }
  return c;
}

AlgebraElement convolve(const AlgebraElement& a, const AlgebraElement& b) {
  require_same_groupoid(*a.groupoid, *b.groupoid, "reference::convolve");
  const FiniteGroupoid& g = *a.groupoid;
  AlgebraElement c = AlgebraElement::zero(a.groupoid);
  for (Index beta = 0; beta < g.size(); ++beta) {
    for (Index alpha = 0; alpha < g.size(); ++alpha) {
      const Index r = g.compose(beta, alpha);
      if (r != FiniteGroupoid::npos) c.coeff[r] += a.coeff[beta] * b.coeff[alpha];
    }
  }
  return c;
}

ComplexMatrix left_regular_rep(const AlgebraElement& a) {
  const FiniteGroupoid& g = *a.groupoid;
  ComplexMatrix m(g.size(), g.size());
  for (Index gamma = 0; gamma < g.size(); ++gamma) {
    for (Index alpha = 0; alpha < g.size(); ++alpha) {
      const Index r = g.compose(alpha, gamma);
      if (r != FiniteGroupoid::npos) m(r, gamma) += a.coeff[alpha] / std::sqrt(g.delta(alpha));
    }
  }
  return m;
}

QuantumKernel compose(const QuantumKernel& k12, const QuantumKernel& k23) {
  require_same_groupoid(*k12.target, *k23.source, "reference::compose");
  const FiniteGroupoid& g2 = *k12.target;
  ComplexMatrix c(k12.pi.rows(), k23.pi.cols());
  for (Index a1 = 0; a1 < c.rows(); ++a1) {
    for (Index a3 = 0; a3 < c.cols(); ++a3) {
      cplx s = 0.0;
      for (Index a2 = 0; a2 < g2.size(); ++a2) s += k12.pi(a1, a2) * k23.pi(a2, a3) * g2.nu(a2);
      c(a1, a3) = s;
    }
  }
  return {k12.source, k23.target, std::move(c)};
}

ComplexMatrix gns_gram(const State& rho) {
  const GroupoidPtr& g = rho.groupoid();
  const std::size_t n = g->size();
  ComplexMatrix gram(n, n);
  for (Index a = 0; a < n; ++a) {
    const AlgebraElement sa = star(AlgebraElement::basis(g, a));
    for (Index b = 0; b < n; ++b) gram(a, b) = expectation(rho, reference::convolve(sa, AlgebraElement::basis(g, b)));
  }
  return gram;
}

}  // namespace cencov::reference
