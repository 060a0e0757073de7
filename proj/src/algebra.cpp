#include "cencov/algebra.hpp"

#include <cmath>
#include <string>

#include "cencov/error.hpp"

namespace cencov {

namespace {

using Index = FiniteGroupoid::Index;

void require_same(const AlgebraElement& a, const AlgebraElement& b, const char* where) {
  if (!a.groupoid || !b.groupoid) throw Error(ErrorKind::GroupoidMismatch, std::string(where) + ": missing groupoid");
  require_same_groupoid(*a.groupoid, *b.groupoid, where);
}

}  // namespace

AlgebraElement AlgebraElement::zero(GroupoidPtr g) {
  const std::size_t n = g->size();
  return {std::move(g), CVector(n)};
}

AlgebraElement AlgebraElement::basis(GroupoidPtr g, Index alpha, cplx value) {
  AlgebraElement e = zero(std::move(g));
  e.coeff.at(alpha) = value;
  return e;
}

AlgebraElement AlgebraElement::unit(GroupoidPtr g) {
  AlgebraElement e = zero(g);
  for (Index x = 0; x < g->num_outcomes(); ++x) e.coeff[g->unit_of(x)] = 1.0;
  return e;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
  require_same(*this, o, "algebra sum");
  for (std::size_t k = 0; k < coeff.size(); ++k) coeff[k] += o.coeff[k];
  return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
  require_same(*this, o, "algebra difference");
  for (std::size_t k = 0; k < coeff.size(); ++k) coeff[k] -= o.coeff[k];
  return *this;
}

AlgebraElement& AlgebraElement::operator*=(cplx s) {
  for (cplx& z : coeff) z *= s;
  return *this;
}

AlgebraElement convolve(const AlgebraElement& a, const AlgebraElement& b) {
  require_same(a, b, "convolve");
  const FiniteGroupoid& g = *a.groupoid;
  const auto n = static_cast<std::ptrdiff_t>(g.size());
  AlgebraElement c = AlgebraElement::zero(a.groupoid);
  // Factorizations gamma = beta∘alpha are indexed by alpha with
  // source(alpha) == source(gamma); then beta = gamma∘alpha^-1.
#pragma omp parallel for schedule(static) if (n > 64)
  for (std::ptrdiff_t gi = 0; gi < n; ++gi) {
    const auto gamma = static_cast<Index>(gi);
    cplx sum = 0.0;
    for (Index alpha = 0; alpha < g.size(); ++alpha) {
      if (g.source(alpha) != g.source(gamma) || b.coeff[alpha] == cplx{}) continue;
      sum += a.coeff[g.compose(gamma, g.inverse(alpha))] * b.coeff[alpha];
    }
    c.coeff[gamma] = sum;
  }
  return c;
}

AlgebraElement star(const AlgebraElement& a) {
  const FiniteGroupoid& g = *a.groupoid;
  AlgebraElement s = AlgebraElement::zero(a.groupoid);
  for (Index alpha = 0; alpha < g.size(); ++alpha) {
    s.coeff[alpha] = std::conj(a.coeff[g.inverse(alpha)]) * g.delta(alpha);
  }
  return s;
}

ComplexMatrix left_regular_rep(const AlgebraElement& a) {
  const FiniteGroupoid& g = *a.groupoid;
  const std::size_t n = g.size();
  ComplexMatrix m(n, n);
  const auto rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (n > 64)
  for (std::ptrdiff_t bi = 0; bi < rows; ++bi) {
    const auto beta = static_cast<Index>(bi);
    for (Index gamma = 0; gamma < n; ++gamma) {
      if (g.source(beta) != g.source(gamma)) continue;
      const Index alpha = g.compose(beta, g.inverse(gamma));
      m(beta, gamma) = a.coeff[alpha] / std::sqrt(g.delta(alpha));
    }
  }
  return m;
}

ComplexMatrix left_multiplication(const AlgebraElement& a) {
  const FiniteGroupoid& g = *a.groupoid;
  const std::size_t n = g.size();
  ComplexMatrix m(n, n);
  for (Index beta = 0; beta < n; ++beta) {
    for (Index gamma = 0; gamma < n; ++gamma) {
      if (g.source(beta) != g.source(gamma)) continue;
      m(beta, gamma) = a.coeff[g.compose(beta, g.inverse(gamma))];
    }
  }
  return m;
}

void require_uniform_pair(const FiniteGroupoid& g, const char* where) {
  if (!g.is_pair()) throw Error(ErrorKind::NotPairGroupoid, where);
  if (!g.uniform_P()) throw Error(ErrorKind::NonUniformP, where);
}

ComplexMatrix fundamental_rep_pair(const AlgebraElement& a) {
  const FiniteGroupoid& g = *a.groupoid;
  require_uniform_pair(g, "fundamental_rep_pair");
  const std::size_t n = g.num_outcomes();
  ComplexMatrix f(n, n);
  for (Index y = 0; y < n; ++y) {
    for (Index x = 0; x < n; ++x) f(y, x) = a.coeff[g.pair_element(y, x)];
  }
  return f;
}

AlgebraElement element_from_matrix(GroupoidPtr g, const ComplexMatrix& f) {
  require_uniform_pair(*g, "element_from_matrix");
  const std::size_t n = g->num_outcomes();
  if (f.rows() != n || f.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "matrix must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  AlgebraElement a = AlgebraElement::zero(g);
  for (Index y = 0; y < n; ++y) {
    for (Index x = 0; x < n; ++x) a.coeff[g->pair_element(y, x)] = f(y, x);
  }
  return a;
}

}  // namespace cencov
