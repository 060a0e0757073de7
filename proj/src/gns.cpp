#include "cencov/gns.hpp"

#include <cmath>
#include <string>

#include "cencov/error.hpp"

namespace cencov {

namespace {

using Index = FiniteGroupoid::Index;

}  // namespace

ComplexMatrix gns_gram(const State& rho) {
  const FiniteGroupoid& g = *rho.groupoid();
  const std::size_t n = g.size();
  ComplexMatrix gram(n, n);
  // star(delta_a) * delta_b = delta(a^-1) delta_{a^-1∘b} when target(a) == target(b),
  // so the entry is delta(a^-1) phi(a^-1∘b) nu(a^-1∘b).
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (n > 64)
  for (std::ptrdiff_t ai = 0; ai < rows; ++ai) {
    const auto a = static_cast<Index>(ai);
    const Index inv = g.inverse(a);
    for (Index b = 0; b < n; ++b) {
      const Index c = g.compose(inv, b);
      if (c == FiniteGroupoid::npos) continue;
      gram(a, b) = g.delta(inv) * rho.phi(c) * g.nu(c);
    }
  }
  return gram;
}

GnsSpace build_gns(const State& rho, double rank_tol) {
  ComplexMatrix gram = gns_gram(rho);
  const EigenResult eig = hermitian_eigen(gram);
  const double lmax = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.back();
  if (!(lmax > 1e-300)) throw Error(ErrorKind::DegenerateState, "gram matrix is numerically zero");

  const std::size_t n = gram.rows();
  const double thr = rank_tol * lmax;
  std::vector<std::size_t> kept;
  std::vector<CVector> ideal;
  for (std::size_t k = 0; k < n; ++k) {
    if (eig.eigenvalues[k] > thr) {
      kept.push_back(k);
    } else {
      CVector v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = eig.eigenvectors(i, k);
      ideal.push_back(std::move(v));
    }
  }
  ComplexMatrix q(n, kept.size());
  for (std::size_t j = 0; j < kept.size(); ++j) {
    const double scale = 1.0 / std::sqrt(eig.eigenvalues[kept[j]]);
    for (std::size_t i = 0; i < n; ++i) q(i, j) = eig.eigenvectors(i, kept[j]) * scale;
  }
  return GnsSpace{rho.groupoid(), rho, std::move(gram), eig.eigenvalues, std::move(ideal), std::move(q), rank_tol};
}

ComplexMatrix gns_represent(const GnsSpace& s, const AlgebraElement& a) {
  if (!a.groupoid) throw Error(ErrorKind::GroupoidMismatch, "gns_represent: element without groupoid");
  require_same_groupoid(*s.groupoid, *a.groupoid, "gns_represent");
  const ComplexMatrix eg = s.quotient.adjoint() * s.gram;
  return eg * (left_multiplication(a) * s.quotient);
}

cplx gns_inner(const GnsSpace& s, std::span<const cplx> u, std::span<const cplx> v) {
  const std::size_t n = s.gram.rows();
  if (u.size() != n || v.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "gns_inner expects vectors of length " + std::to_string(n));
  }
  return dot(u, matvec(s.gram, v));
}

CVector gns_class(const GnsSpace& s, std::span<const cplx> b) {
  if (b.size() != s.gram.rows()) throw Error(ErrorKind::DimensionMismatch, "gns_class: vector length");
  return matvec(s.quotient.adjoint(), matvec(s.gram, b));
}

CVector cyclic_vector(const GnsSpace& s) {
  return gns_class(s, AlgebraElement::unit(s.groupoid).coeff);
}

}  // namespace cencov
