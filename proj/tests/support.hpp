#pragma once

// Generators and oracles shared by the unit and acceptance tests.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "cencov/algebra.hpp"
#include "cencov/channels.hpp"
#include "cencov/error.hpp"
#include "cencov/groupoid.hpp"
#include "cencov/numkit.hpp"
#include "cencov/states.hpp"

namespace cencov::testing {

using Rng = std::mt19937_64;

inline cplx random_cplx(Rng& rng) {
  std::normal_distribution<double> d;
  return {d(rng), d(rng)};
}

inline ComplexMatrix random_matrix(Rng& rng, std::size_t r, std::size_t c) {
  ComplexMatrix m(r, c);
  for (auto& z : m.data()) z = random_cplx(rng);
  return m;
}

inline ComplexMatrix random_hermitian(Rng& rng, std::size_t n) {
  const ComplexMatrix b = random_matrix(rng, n, n);
  return 0.5 * (b + b.adjoint());
}

/// B†B / Tr, full rank with probability one.
inline ComplexMatrix random_density(Rng& rng, std::size_t n, std::size_t rank = 0) {
  const ComplexMatrix b = random_matrix(rng, rank == 0 ? n : rank, n);
  ComplexMatrix d = b.adjoint() * b;
  d *= 1.0 / d.trace().real();
  return d;
}

inline AlgebraElement random_element(Rng& rng, const GroupoidPtr& g) {
  AlgebraElement a = AlgebraElement::zero(g);
  for (auto& z : a.coeff) z = random_cplx(rng);
  return a;
}

inline std::vector<double> random_distribution(Rng& rng, std::size_t n, double floor = 0.05) {
  std::uniform_real_distribution<double> u(floor, 1.0);
  std::vector<double> p(n);
  double s = 0.0;
  for (double& v : p) s += (v = u(rng));
  for (double& v : p) v /= s;
  return p;
}

inline ClassicalKernel random_stochastic(Rng& rng, std::size_t n, std::size_t m) {
  std::vector<std::vector<double>> k;
  for (std::size_t i = 0; i < n; ++i) k.push_back(random_distribution(rng, m, 0.0));
  return ClassicalKernel::make(std::move(k));
}

inline Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  Eigen::MatrixXcd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  }
  return e;
}

inline ComplexMatrix from_eigen(const Eigen::MatrixXcd& e) {
  ComplexMatrix m(e.rows(), e.cols());
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  }
  return m;
}

/// Eigenvalues from Eigen's solver, ascending.
inline std::vector<double> oracle_eigenvalues(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(h), Eigen::EigenvaluesOnly);
  const Eigen::VectorXd v = es.eigenvalues();
  return {v.data(), v.data() + v.size()};
}

/// Trace-preserving Kraus list A_k = B_k S^(-1/2), S = sum B_k† B_k.
inline std::vector<ComplexMatrix> random_kraus(Rng& rng, std::size_t n, std::size_t m, std::size_t count) {
  std::vector<Eigen::MatrixXcd> bs;
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t k = 0; k < count; ++k) {
    bs.push_back(to_eigen(random_matrix(rng, m, n)));
    s += bs.back().adjoint() * bs.back();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s);
  const Eigen::MatrixXcd inv_sqrt = es.operatorInverseSqrt();
  std::vector<ComplexMatrix> out;
  for (const auto& b : bs) out.push_back(from_eigen(b * inv_sqrt));
  return out;
}

inline ComplexMatrix pauli_x() { return ComplexMatrix(2, 2, {0.0, 1.0, 1.0, 0.0}); }
inline ComplexMatrix pauli_y() { return ComplexMatrix(2, 2, {0.0, cplx(0, -1), cplx(0, 1), 0.0}); }
inline ComplexMatrix pauli_z() { return ComplexMatrix(2, 2, {1.0, 0.0, 0.0, -1.0}); }

/// Every standard construction used by the property tests, |Γ| <= 64.
inline std::vector<GroupoidPtr> standard_groupoids() {
  std::vector<GroupoidPtr> out;
  for (std::size_t n = 1; n <= 8; ++n) out.push_back(pair_groupoid(n));
  for (std::size_t n = 1; n <= 8; ++n) out.push_back(trivial_groupoid(n));
  out.push_back(cyclic_group(2));
  out.push_back(cyclic_group(3));
  out.push_back(cyclic_group(5));
  out.push_back(pair_groupoid(3, {0.2, 0.3, 0.5}));
  out.push_back(trivial_groupoid(3, {0.1, 0.6, 0.3}));
  out.push_back(product(*pair_groupoid(2), *cyclic_group(3)));
  out.push_back(product(*pair_groupoid(2), *pair_groupoid(2)));
  out.push_back(product(*trivial_groupoid(2), *pair_groupoid(3, {0.5, 0.25, 0.25})));
  out.push_back(disjoint_union(*pair_groupoid(2), *cyclic_group(3), 0.4));
  out.push_back(disjoint_union(*pair_groupoid(3), *trivial_groupoid(2), 0.7));
  out.push_back(disjoint_union(*pair_groupoid(3, {0.2, 0.3, 0.5}), *pair_groupoid(2), 0.5));
  return out;
}

struct Mutation {
  GroupoidSpec spec;
  ErrorKind expected;
  std::string label;
};

/// One planted defect in the tables of a random standard groupoid, with the
/// violation class validate must report for it.
inline Mutation random_mutation(Rng& rng) {
  auto pick = [&rng](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  const std::size_t family = pick(3);
  const std::size_t n = (family == 2 ? 3 : 2) + pick(3);
  const GroupoidPtr g = family == 0 ? pair_groupoid(n) : family == 1 ? trivial_groupoid(n) : cyclic_group(n);
  Mutation m{to_spec(*g), ErrorKind::Io, ""};
  GroupoidSpec& s = m.spec;
  auto entry = [&s](const std::string& b, const std::string& a) {
    return std::find_if(s.compose.begin(), s.compose.end(), [&](const auto& t) { return t[0] == b && t[1] == a; });
  };
  const std::size_t sz = g->size();

  switch (pick(5)) {
    case 0: {
      const std::string& x = s.outcomes[pick(s.outcomes.size())];
      s.P[x] = pick(2) == 0 ? -s.P[x] : s.P[x] + 0.25;
      m.expected = ErrorKind::BadMeasure;
      m.label = "P(" + x + ") altered";
      break;
    }
    case 1: {
      if (sz < 2) return random_mutation(rng);
      const std::size_t a = pick(sz);
      std::size_t b = pick(sz);
      while (b == g->inverse(a)) b = pick(sz);
      s.inverse[g->element_id(a)] = g->element_id(b);
      m.expected = ErrorKind::InverseViolation;
      m.label = "inverse of " + g->element_id(a) + " redirected";
      break;
    }
    case 2: {
      if (sz < 2) return random_mutation(rng);
      const std::size_t x = pick(g->num_outcomes());
      std::size_t b = pick(sz);
      while (b == g->unit_of(x)) b = pick(sz);
      s.units[g->outcome_id(x)] = g->element_id(b);
      m.expected = ErrorKind::UnitViolation;
      m.label = "unit of " + g->outcome_id(x) + " moved";
      break;
    }
    case 3: {
      // Deleting an entry always leaves a composable pair undefined; for
      // pair and trivial tables a redirect also breaks the endpoints.
      const std::size_t k = pick(s.compose.size());
      if (family == 2 || pick(2) == 0) {
        m.label = "compose(" + s.compose[k][0] + ", " + s.compose[k][1] + ") deleted";
        s.compose.erase(s.compose.begin() + static_cast<std::ptrdiff_t>(k));
      } else {
        const auto r = *g->find_element(s.compose[k][2]);
        std::size_t r2 = pick(sz);
        while (r2 == r) r2 = pick(sz);
        s.compose[k][2] = g->element_id(r2);
        m.label = "compose(" + s.compose[k][0] + ", " + s.compose[k][1] + ") redirected";
      }
      m.expected = ErrorKind::CoherenceViolation;
      break;
    }
    default: {
      if (family != 2) return random_mutation(rng);
      // Group tables: a non-identity product a*b with b != a^-1 redirected
      // to any other element breaks (a*b)*b^-1 = a, or (a^-1*a)*b = b.
      const std::size_t e = g->unit_of(0);
      std::size_t a = pick(sz), b = pick(sz);
      while (a == e || b == e || b == g->inverse(a)) {
        a = pick(sz);
        b = pick(sz);
      }
      auto it = entry(g->element_id(a), g->element_id(b));
      const std::size_t r = g->compose(a, b);
      std::size_t r2 = pick(sz);
      while (r2 == r) r2 = pick(sz);
      (*it)[2] = g->element_id(r2);
      m.expected = ErrorKind::AssociativityViolation;
      m.label = "product " + g->element_id(a) + "*" + g->element_id(b) + " redirected";
      break;
    }
  }
  return m;
}

}  // namespace cencov::testing
