#include <gtest/gtest.h>

#include "cencov/channels.hpp"
#include "cencov/error.hpp"
#include "support.hpp"

using namespace cencov;
using namespace cencov::testing;

namespace {

constexpr double EPS = 1e-12;

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Io;
}

ClassicalKernel swap2() { return ClassicalKernel::make({{0.0, 1.0}, {1.0, 0.0}}); }

State classical_state(GroupoidPtr g, const std::vector<double>& p) {
  CVector phi(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) phi[x] = p[x] / g->P(x);
  return State::make(std::move(g), phi);
}

// sum_k A D A†, straight from Eigen.
ComplexMatrix kraus_apply(const std::vector<ComplexMatrix>& kraus, const ComplexMatrix& d) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(kraus.front().rows(), kraus.front().rows());
  for (const auto& a : kraus) out += to_eigen(a) * to_eigen(d) * to_eigen(a).adjoint();
  return from_eigen(out);
}

ComplexMatrix unit_matrix(std::size_t n, std::size_t x, std::size_t y) {
  ComplexMatrix e(n, n);
  e(x, y) = 1.0;
  return e;
}

}  // namespace

TEST(Channels, ClassicalKernelChecks) {
  EXPECT_EQ(kind_of([] { ClassicalKernel::make({{0.5, 0.6}, {1.0, 0.0}}); }), ErrorKind::RowSumViolation);
  EXPECT_EQ(kind_of([] { ClassicalKernel::make({{1.5, -0.5}}); }), ErrorKind::RowSumViolation);
  EXPECT_EQ(kind_of([] { ClassicalKernel::make({{1.0}, {0.5, 0.5}}); }), ErrorKind::DimensionMismatch);
  const auto k = ClassicalKernel::make({{0.9, 0.1}, {0.2, 0.8}});
  const auto p = k.push(std::vector<double>{0.3, 0.7});
  EXPECT_NEAR(p[0], 0.41, EPS);
  EXPECT_NEAR(p[1], 0.59, EPS);
  const auto f = k.pull(std::vector<double>{1.0, -1.0});
  EXPECT_NEAR(f[0], 0.8, EPS);
  EXPECT_NEAR(f[1], -0.6, EPS);
}

TEST(Channels, IdentityKernel) {
  const auto t = trivial_groupoid(2);
  const QuantumKernel id = identity_kernel(t);
  EXPECT_NEAR(id(0, 0).real(), 2.0, EPS);
  EXPECT_EQ(id(0, 1), cplx{});
  for (const auto& g : standard_groupoids()) EXPECT_TRUE(validate_kernel(identity_kernel(g)).passed()) << g->size();

  Rng rng(31);
  for (std::size_t n : {2u, 3u, 4u}) {
    const auto g = pair_groupoid(n);
    const State rho = state_from_density(random_density(rng, n), g);
    EXPECT_LE(max_abs_diff(push_state(rho, identity_kernel(g)).phi(), rho.phi()), EPS);
    const auto f = random_element(rng, g);
    EXPECT_LE(max_abs_diff(pull_observable(identity_kernel(g), f).coeff, f.coeff), EPS);
  }
}

TEST(Channels, EmbeddedSwap) {
  const auto t = trivial_groupoid(2);
  const QuantumKernel k = embed_classical(swap2(), t, t);
  EXPECT_TRUE(validate_kernel(k).passed());
  EXPECT_NEAR(k(0, 1).real(), 2.0, EPS);
  EXPECT_NEAR(k(0, 0).real(), 0.0, EPS);
  const State out = push_state(classical_state(t, {1.0, 0.0}), k);
  const auto p = outcome_distribution(out);
  EXPECT_NEAR(p[0], 0.0, EPS);
  EXPECT_NEAR(p[1], 1.0, EPS);

  const QuantumKernel sq = compose(k, k);
  EXPECT_LE(max_abs_diff(sq.pi, identity_kernel(t).pi), EPS);
  EXPECT_LE(max_abs_diff(embed_classical(ClassicalKernel::make({{1.0, 0.0}, {0.0, 1.0}}), t, t).pi,
                         identity_kernel(t).pi),
            EPS);

  EXPECT_TRUE(check_ncp_morphism(k, classical_state(t, {1.0, 0.0}), classical_state(t, {0.0, 1.0})));
  EXPECT_FALSE(check_ncp_morphism(k, classical_state(t, {1.0, 0.0}), classical_state(t, {1.0, 0.0})));
}

TEST(Channels, PlantedNormalizationDefect) {
  const auto t = trivial_groupoid(2);
  QuantumKernel k = identity_kernel(t);
  k.pi(0, 0) *= 2.0;
  const KernelReport r = validate_kernel(k);
  EXPECT_FALSE(r.normalized);
  EXPECT_TRUE(r.positive);
  EXPECT_NEAR(r.normalization_deficit, 1.0, EPS);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.summary().empty());
}

TEST(Channels, PlantedPositivityAndHermiticityDefects) {
  const auto t = trivial_groupoid(2);
  QuantumKernel k{t, t, ComplexMatrix(2, 2, {2.0, 0.0, -2.0, 4.0})};
  const KernelReport r = validate_kernel(k);
  EXPECT_TRUE(r.normalized);
  EXPECT_FALSE(r.positive);
  ASSERT_TRUE(r.offending_element.has_value());
  EXPECT_EQ(*r.offending_element, 1u);
  EXPECT_EQ(kind_of([&] { push_state(classical_state(t, {0.0, 1.0}), k); }), ErrorKind::PositivityLost);

  const auto g = pair_groupoid(2);
  QuantumKernel h = identity_kernel(g);
  const auto a = g->pair_element(0, 1);
  h.pi(a, a) += cplx(0.0, 0.5);
  EXPECT_FALSE(validate_kernel(h).hermitian);
}

TEST(Channels, Depolarizing) {
  const auto g = pair_groupoid(2);
  const QuantumKernel k = choi_to_kernel(depolarizing_kraus(0.5), g, g);
  EXPECT_TRUE(validate_kernel(k).passed());
  const State rho = state_from_density(ComplexMatrix(2, 2, {1.0, 0.0, 0.0, 0.0}), g);
  const ComplexMatrix d = density_from_state(push_state(rho, k));
  EXPECT_LE(max_abs_diff(d, ComplexMatrix(2, 2, {0.75, 0.0, 0.0, 0.25})), 1e-12);
  const CpVerdict v = cp_verdict(k);
  EXPECT_TRUE(v.is_cp);
  EXPECT_EQ(v.choi_rank, 4u);
}

TEST(Channels, KrausIdentityIsIdentityKernel) {
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto g = pair_groupoid(n);
    const QuantumKernel k = choi_to_kernel({ComplexMatrix::identity(n)}, g, g);
    EXPECT_LE(max_abs_diff(k.pi, identity_kernel(g).pi), 1e-12);
    const CpVerdict v = cp_verdict(k);
    EXPECT_TRUE(v.is_cp);
    EXPECT_EQ(v.choi_rank, 1u);
  }
}

TEST(Channels, TransposeIsNotCp) {
  const auto g = pair_groupoid(2);
  const QuantumKernel k = transpose_kernel(g);
  EXPECT_TRUE(validate_kernel(k).passed());
  const CpVerdict v = cp_verdict(k);
  EXPECT_FALSE(v.is_cp);
  // Choi of the transpose is the swap on C2 x C2.
  ComplexMatrix swap(4, 4);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) swap(i * 2 + j, j * 2 + i) = 1.0;
  }
  EXPECT_NEAR(v.min_choi_eigenvalue, oracle_eigenvalues(swap).front(), 1e-10);
  EXPECT_LE(max_abs_diff(kernel_to_cp_map(k).choi(), swap), 1e-12);
  // still maps states to states
  Rng rng(32);
  const State rho = state_from_density(random_density(rng, 2), g);
  EXPECT_NO_THROW(push_state(rho, k));
}

TEST(Channels, KrausRoundTripAndPositivity) {
  Rng rng(33);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + t % 2, m = 2 + (t / 2) % 3;
    const auto g1 = pair_groupoid(n);
    const auto g2 = pair_groupoid(m);
    const auto kraus = random_kraus(rng, n, m, 1 + t % 3);
    const QuantumKernel k = choi_to_kernel(kraus, g1, g2);
    EXPECT_TRUE(validate_kernel(k).passed());
    const MatrixMap phi = kernel_to_cp_map(k);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        EXPECT_LE(max_abs_diff(phi.image(x, y), kraus_apply(kraus, unit_matrix(n, x, y))), 1e-10);
      }
    }
    EXPECT_LE(max_abs_diff(kernel_from_matrix_map(phi, g1, g2).pi, k.pi), 1e-10);

    const ComplexMatrix d = random_density(rng, n);
    const State out = push_state(state_from_density(d, g1), k);
    EXPECT_TRUE(check_state(out.phi(), *g2).passed());
    EXPECT_LE(max_abs_diff(density_from_state(out), kraus_apply(kraus, d)), 1e-10);

    const CpVerdict v = cp_verdict(k);
    EXPECT_TRUE(v.is_cp);
    EXPECT_NEAR(v.min_choi_eigenvalue, oracle_eigenvalues(phi.choi()).front(), 1e-9);
  }
}

TEST(Channels, PushPullDuality) {
  Rng rng(34);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 2 + t % 3, m = 2 + (t / 3) % 3;
    const auto g1 = pair_groupoid(n);
    const auto g2 = pair_groupoid(m);
    const QuantumKernel k = choi_to_kernel(random_kraus(rng, n, m, 2), g1, g2);
    const State rho = state_from_density(random_density(rng, n), g1);
    const auto f = random_element(rng, g2);
    const cplx lhs = expectation(rho, pull_observable(k, f));
    const cplx rhs = expectation(push_state(rho, k), f);
    EXPECT_LE(std::abs(lhs - rhs), 1e-12 * (1.0 + std::abs(lhs)) * 10);
  }
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + t % 5, m = 2 + (t / 5) % 4;
    const auto g1 = trivial_groupoid(n, random_distribution(rng, n));
    const auto g2 = trivial_groupoid(m, random_distribution(rng, m));
    const QuantumKernel k = embed_classical(random_stochastic(rng, n, m), g1, g2);
    const State rho = classical_state(g1, random_distribution(rng, n));
    const auto f = random_element(rng, g2);
    EXPECT_LE(std::abs(expectation(rho, pull_observable(k, f)) - expectation(push_state(rho, k), f)), 1e-12 * 10);
  }
}

TEST(Channels, ClassicalSquare) {
  Rng rng(35);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + t % 6, m = 1 + (t / 6) % 6;
    const auto g1 = trivial_groupoid(n, random_distribution(rng, n));
    const auto g2 = trivial_groupoid(m, random_distribution(rng, m));
    const ClassicalKernel kk = random_stochastic(rng, n, m);
    const QuantumKernel k = embed_classical(kk, g1, g2);
    EXPECT_TRUE(validate_kernel(k).passed());
    const auto p = random_distribution(rng, n);
    const auto pushed = outcome_distribution(push_state(classical_state(g1, p), k));
    // oracle: p K by hand
    for (std::size_t y = 0; y < m; ++y) {
      double want = 0.0;
      for (std::size_t x = 0; x < n; ++x) want += p[x] * kk(x, y);
      EXPECT_NEAR(pushed[y], want, 1e-12);
    }
    AlgebraElement f = random_element(rng, g2);
    const auto pulled = pull_observable(k, f);
    for (std::size_t x = 0; x < n; ++x) {
      cplx want = 0.0;
      for (std::size_t y = 0; y < m; ++y) want += kk(x, y) * f.coeff[y];
      EXPECT_LE(std::abs(pulled.coeff[x] - want), 1e-12 * 10);
    }
    const ClassicalKernel ll = random_stochastic(rng, m, 3);
    const auto g3 = trivial_groupoid(3);
    EXPECT_LE(max_abs_diff(compose(k, embed_classical(ll, g2, g3)).pi, embed_classical(compose(kk, ll), g1, g3).pi),
              1e-12 * 10);
  }
}

TEST(Channels, ComposeAssociativeAndUnital) {
  Rng rng(36);
  for (int t = 0; t < 10; ++t) {
    const auto g1 = pair_groupoid(2);
    const auto g2 = pair_groupoid(3);
    const auto g3 = pair_groupoid(2);
    const auto g4 = pair_groupoid(3);
    const QuantumKernel a = choi_to_kernel(random_kraus(rng, 2, 3, 2), g1, g2);
    const QuantumKernel b = choi_to_kernel(random_kraus(rng, 3, 2, 2), g2, g3);
    const QuantumKernel c = choi_to_kernel(random_kraus(rng, 2, 3, 3), g3, g4);
    const QuantumKernel l = compose(compose(a, b), c);
    const QuantumKernel r = compose(a, compose(b, c));
    EXPECT_LE(max_abs_diff(l.pi, r.pi), 1e-12 * (1.0 + l.pi.max_abs()));
    EXPECT_LE(max_abs_diff(compose(a, identity_kernel(g2)).pi, a.pi), 1e-12);
    EXPECT_LE(max_abs_diff(compose(identity_kernel(g1), a).pi, a.pi), 1e-12);

    const State rho = state_from_density(random_density(rng, 2), g1);
    EXPECT_LE(max_abs_diff(push_state(rho, compose(a, b)).phi(), push_state(push_state(rho, a), b).phi()), 1e-12);
  }
}

TEST(Channels, CpDictionaryIsFunctorial) {
  Rng rng(37);
  for (int t = 0; t < 10; ++t) {
    const auto g1 = pair_groupoid(2);
    const auto g2 = pair_groupoid(3);
    const auto g3 = pair_groupoid(2);
    const QuantumKernel a = choi_to_kernel(random_kraus(rng, 2, 3, 2), g1, g2);
    const QuantumKernel b = choi_to_kernel(random_kraus(rng, 3, 2, 2), g2, g3);
    const MatrixMap ab = kernel_to_cp_map(compose(a, b));
    const MatrixMap pa = kernel_to_cp_map(a);
    const MatrixMap pb = kernel_to_cp_map(b);
    for (std::size_t x = 0; x < 2; ++x) {
      for (std::size_t y = 0; y < 2; ++y) EXPECT_LE(max_abs_diff(ab.image(x, y), pb(pa.image(x, y))), 1e-10);
    }
  }
}

TEST(Channels, NcpMorphism) {
  Rng rng(38);
  const auto g = pair_groupoid(3);
  const State rho = state_from_density(random_density(rng, 3), g);
  EXPECT_TRUE(check_ncp_morphism(identity_kernel(g), rho, rho));
  const State sigma = state_from_density(random_density(rng, 3), g);
  EXPECT_FALSE(check_ncp_morphism(identity_kernel(g), rho, sigma));
  EXPECT_EQ(kind_of([&] { check_ncp_morphism(identity_kernel(g), rho, state_from_density(random_density(rng, 2), pair_groupoid(2))); }),
            ErrorKind::GroupoidMismatch);
}

TEST(Channels, Errors) {
  const auto p2 = pair_groupoid(2);
  const auto t2 = trivial_groupoid(2);
  EXPECT_EQ(kind_of([&] { embed_classical(swap2(), p2, t2); }), ErrorKind::Unsupported);
  EXPECT_EQ(kind_of([&] { embed_classical(swap2(), t2, trivial_groupoid(3)); }), ErrorKind::DimensionMismatch);
  EXPECT_EQ(kind_of([&] { choi_to_kernel({0.5 * ComplexMatrix::identity(2)}, p2, p2); }), ErrorKind::NonTracePreserving);
  EXPECT_EQ(kind_of([&] { cp_verdict(identity_kernel(t2)); }), ErrorKind::NotPairGroupoid);
  const auto skew = pair_groupoid(2, {0.3, 0.7});
  EXPECT_EQ(kind_of([&] { cp_verdict(identity_kernel(skew)); }), ErrorKind::NonUniformP);
  EXPECT_EQ(kind_of([&] { compose(identity_kernel(p2), identity_kernel(t2)); }), ErrorKind::GroupoidMismatch);
}
