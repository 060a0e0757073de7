// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

#include "cencov/estimation.hpp"
#include "cencov/gns.hpp"
#include "cli_runner.hpp"
#include "support.hpp"

using namespace cencov;
using namespace cencov::testing;

namespace {

// Worst observed value per check, so failing lines say by how much.
struct Log {
  std::ostringstream note;
  bool ok = true;
  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      note << " [" << what << "]";
    }
  }
  void le(double v, double tol, const std::string& what) {
    if (!(v <= tol)) {
      ok = false;
      note << " [" << what << ": " << v << " > " << tol << "]";
    }
  }
  void near(double v, double want, double tol, const std::string& what) {
    if (!(std::abs(v - want) <= tol)) {
      ok = false;
      note << " [" << what << ": " << v << " vs " << want << "]";
    }
  }
};

template <class F>
bool throws_kind(F&& f, ErrorKind k) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == k;
  }
  return false;
}

State classical_state(GroupoidPtr g, const std::vector<double>& p) {
  CVector phi(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) phi[x] = p[x] / g->P(x);
  return State::make(std::move(g), phi);
}

StatisticalModel classical_model(GroupoidPtr g, std::function<std::vector<double>(double)> p, double s0) {
  auto curve = [g, p](double s) {
    const auto q = p(s);
    CVector phi(q.size());
    for (std::size_t x = 0; x < q.size(); ++x) phi[x] = q[x] / g->P(x);
    return phi;
  };
  return {g, curve, -0.45, 0.45, s0};
}

StatisticalModel density_model(GroupoidPtr g, std::function<ComplexMatrix(double)> d, double s0) {
  return {g, [g, d](double s) { return state_from_density(d(s), g).phi(); }, -0.9, 0.9, s0};
}

ComplexMatrix qubit_z(double s) { return 0.5 * (ComplexMatrix::identity(2) + s * pauli_z()); }

FisherResult fisher_at(const StatisticalModel& m) { return fisher_metric(m, build_gns(m.state_at(m.s0))); }

void c1(Log& log) {
  std::vector<GroupoidPtr> all = standard_groupoids();
  all.push_back(group_groupoid({{0, 1}, {1, 0}}));
  for (const auto& g : all) {
    try {
      log.check(same_groupoid(*validate(to_spec(*g)), *g), "round trip");
    } catch (const Error& e) {
      log.check(false, e.what());
    }
  }
  Rng rng(101);
  int hit = 0;
  for (int t = 0; t < 50; ++t) {
    const Mutation m = random_mutation(rng);
    bool ok = false;
    try {
      validate(m.spec);
    } catch (const Error& e) {
      ok = e.kind() == m.expected;
    }
    hit += ok;
    log.check(ok, m.label);
  }
  log.note << " mutations " << hit << "/50";
}

void c2(Log& log) {
  Rng rng(102);
  double worst = 0.0;
  for (const auto& g : standard_groupoids()) {
    const auto a = random_element(rng, g);
    const auto b = random_element(rng, g);
    const ComplexMatrix la = left_regular_rep(a), lb = left_regular_rep(b);
    const double scale = la.max_abs() * lb.max_abs() * static_cast<double>(g->size());
    worst = std::max(worst, max_abs_diff(left_regular_rep(convolve(a, b)), la * lb) / scale);
    worst = std::max(worst, max_abs_diff(left_regular_rep(star(a)), la.adjoint()));
    const std::size_t n = g->size();
    ComplexMatrix stack(n * n, n);
    for (std::size_t k = 0; k < n; ++k) {
      const ComplexMatrix m = left_regular_rep(AlgebraElement::basis(g, k));
      for (std::size_t i = 0; i < n * n; ++i) stack(i, k) = m.data()[i];
    }
    log.check(numerical_rank(stack) == n, "rank on |G| = " + std::to_string(n));
  }
  log.le(worst, 1e-12, "relative deviation");
  log.note << " max relative deviation " << worst;
}

void c3(Log& log) {
  Rng rng(103);
  double worst = 0.0;
  for (std::size_t n : {2u, 3u, 4u}) {
    const auto g = pair_groupoid(n);
    for (int t = 0; t < 20; ++t) {
      const auto a = random_element(rng, g);
      const auto b = random_element(rng, g);
      const ComplexMatrix fa = fundamental_rep_pair(a), fb = fundamental_rep_pair(b);
      const ComplexMatrix prod = from_eigen(to_eigen(fa) * to_eigen(fb));
      worst = std::max(worst, max_abs_diff(fundamental_rep_pair(convolve(a, b)), prod) / (1.0 + prod.max_abs()));
      worst = std::max(worst, max_abs_diff(fundamental_rep_pair(star(a)), fa.adjoint()));
      worst = std::max(worst, max_abs_diff(element_from_matrix(g, fa).coeff, a.coeff));
      const ComplexMatrix d = random_density(rng, n);
      worst = std::max(worst, max_abs_diff(density_from_state(state_from_density(d, g)), d));
    }
  }
  log.le(worst, 1e-12, "deviation");
  log.note << " max deviation " << worst;
}

void c4(Log& log) {
  Rng rng(104);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + t % 6, m = 1 + (t / 6) % 6, r = 1 + (t / 3) % 6;
    const auto g1 = trivial_groupoid(n, random_distribution(rng, n));
    const auto g2 = trivial_groupoid(m, random_distribution(rng, m));
    const auto g3 = trivial_groupoid(r, random_distribution(rng, r));
    const ClassicalKernel k = random_stochastic(rng, n, m);
    const ClassicalKernel l = random_stochastic(rng, m, r);
    const QuantumKernel ek = embed_classical(k, g1, g2), el = embed_classical(l, g2, g3);
    log.check(validate_kernel(ek).passed(), "embedded kernel fails axioms");

    const auto p = random_distribution(rng, n);
    const auto pushed = outcome_distribution(push_state(classical_state(g1, p), ek));
    std::vector<double> f(m);
    std::normal_distribution<double> gauss;
    for (double& v : f) v = gauss(rng);
    AlgebraElement fe = AlgebraElement::zero(g2);
    for (std::size_t y = 0; y < m; ++y) fe.coeff[y] = f[y];
    const auto pulled = pull_observable(ek, fe);
    for (std::size_t y = 0; y < m; ++y) {
      double want = 0.0;
      for (std::size_t x = 0; x < n; ++x) want += p[x] * k(x, y);
      worst = std::max(worst, std::abs(pushed[y] - want));
    }
    for (std::size_t x = 0; x < n; ++x) {
      double want = 0.0;
      for (std::size_t y = 0; y < m; ++y) want += k(x, y) * f[y];
      worst = std::max(worst, std::abs(pulled.coeff[x] - want));
    }
    // composition of decision rules
    std::vector<std::vector<double>> kl(n, std::vector<double>(r, 0.0));
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < m; ++y) {
        for (std::size_t z = 0; z < r; ++z) kl[x][z] += k(x, y) * l(y, z);
      }
    }
    const QuantumKernel c = compose(ek, el);
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t z = 0; z < r; ++z) worst = std::max(worst, std::abs(c(x, z) - kl[x][z] / g3->P(z)) * g3->P(z));
    }
    const ClassicalKernel j = random_stochastic(rng, r, 2);
    const QuantumKernel ej = embed_classical(j, g3, trivial_groupoid(2));
    worst = std::max(worst, max_abs_diff(compose(compose(ek, el), ej).pi, compose(ek, compose(el, ej)).pi) /
                                (1.0 + c.pi.max_abs()));
  }
  log.le(worst, 1e-12, "deviation");
  log.note << " max deviation " << worst;
}

void c5(Log& log) {
  for (std::size_t n = 1; n <= 4; ++n) log.check(validate_kernel(identity_kernel(pair_groupoid(n))).passed(), "identity");
  const auto q = pair_groupoid(2);
  const QuantumKernel dep = choi_to_kernel(depolarizing_kraus(0.5), q, q);
  log.check(validate_kernel(dep).passed(), "depolarizing axioms");
  log.check(cp_verdict(dep).is_cp, "depolarizing cp");
  const CpVerdict tv = cp_verdict(transpose_kernel(q));
  log.check(!tv.is_cp && tv.min_choi_eigenvalue < 0.0, "transpose verdict");

  Rng rng(105);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 2 + t % 3, m = 2 + (t / 3) % 3;
    const auto g1 = pair_groupoid(n), g2 = pair_groupoid(m);
    const QuantumKernel k = choi_to_kernel(random_kraus(rng, n, m, 1 + t % 3), g1, g2);
    log.check(validate_kernel(k).passed(), "random kernel axioms");
    const State rho = state_from_density(random_density(rng, n), g1);
    const auto f = random_element(rng, g2);
    const cplx lhs = expectation(rho, pull_observable(k, f));
    worst = std::max(worst, std::abs(lhs - expectation(push_state(rho, k), f)) / (1.0 + std::abs(lhs)));
  }
  log.le(worst, 1e-12, "duality");
  log.note << " min Choi eigenvalue of transpose " << tv.min_choi_eigenvalue << ", duality " << worst;
}

void c6(Log& log) {
  Rng rng(106);
  double worst = 0.0;
  const auto g = pair_groupoid(2);
  for (std::size_t rank : {1u, 2u}) {
    const State rho = state_from_density(random_density(rng, 2, rank), g);
    const GnsSpace s = build_gns(rho);
    const CVector omega = cyclic_vector(s);
    for (int t = 0; t < 20; ++t) {
      const auto a = random_element(rng, g);
      worst = std::max(worst, std::abs(dot(omega, matvec(gns_represent(s, a), omega)) - expectation(rho, a)));
    }
  }
  log.le(worst, 1e-10, "cyclic identity");
  const std::size_t faithful = build_gns(state_from_density(ComplexMatrix::identity(2) * cplx(0.5), g)).dim();
  const std::size_t pure = build_gns(state_from_density(ComplexMatrix(2, 2, {1.0, 0.0, 0.0, 0.0}), g)).dim();
  log.check(faithful == 4, "faithful dim " + std::to_string(faithful));
  log.check(pure == 2, "pure dim " + std::to_string(pure));
  log.note << " dims " << faithful << "/" << pure << ", cyclic " << worst;
}

void c7(Log& log) {
  const auto g = pair_groupoid(2);
  const StatisticalModel m = density_model(g, qubit_z, 0.0);
  const GnsSpace s = build_gns(m.state_at(0.0));
  const double gf = fisher_metric(m, s, 1e-5).value;
  log.near(gf, 1.0, 1e-4, "G_F");
  log.near(cramer_rao_bound(m, s, 1e-5), 1.0, 1e-4, "bound");
  const Estimator z = Estimator::make(element_from_matrix(g, pauli_z()));
  const CramerRaoAudit az = cramer_rao_audit(m, z, s);
  log.le(az.slack, 1e-4, "sigma_z slack");
  const Estimator zx = Estimator::make(element_from_matrix(g, pauli_z() + pauli_x()));
  const CramerRaoAudit azx = cramer_rao_audit(m, zx, s);
  log.near(azx.slack, 1.0, 1e-3, "sigma_z + sigma_x slack");
  const double half = fisher_at(density_model(g, qubit_z, 0.5)).value;
  log.near(half, 1.0 / (1.0 - 0.25), 1e-3, "G_F at 0.5");
  log.note << " G_F " << gf << ", G_F(0.5) " << half << ", slack " << azx.slack;
}

void c8(Log& log) {
  const StatisticalModel coin = classical_model(
      trivial_groupoid(2), [](double s) { return std::vector<double>{0.5 + s, 0.5 - s}; }, 0.0);
  const GnsSpace s = build_gns(coin.state_at(0.0));
  const double gf = fisher_metric(coin, s).value;
  log.near(gf, 4.0, 1e-4, "coin G_F");
  log.near(cramer_rao_bound(coin, s), 0.25, 1e-9, "coin bound");
  AlgebraElement a = AlgebraElement::zero(coin.groupoid);
  a.coeff = {0.5, -0.5};
  log.check(cramer_rao_audit(coin, Estimator::make(a), s).saturated, "+-1/2 saturates");

  Rng rng(108);
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + t % 7;
    const auto g = trivial_groupoid(n, random_distribution(rng, n));
    const auto p0 = random_distribution(rng, n, 0.2);
    std::vector<double> d(n), d2(n);
    double mean = 0.0, mean2 = 0.0;
    for (double& v : d) mean += (v = gauss(rng));
    for (double& v : d2) mean2 += (v = gauss(rng));
    for (double& v : d) v = 0.02 * (v - mean / static_cast<double>(n));
    for (double& v : d2) v = 0.02 * (v - mean2 / static_cast<double>(n));
    const StatisticalModel m = classical_model(
        g,
        [=](double s) {
          std::vector<double> p(n);
          for (std::size_t x = 0; x < n; ++x) p[x] = p0[x] + s * d[x] + s * s * d2[x];
          return p;
        },
        0.1);
    // direct evaluation of sum (dp)^2 / p at s0
    double direct = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      const double p = p0[x] + 0.1 * d[x] + 0.01 * d2[x];
      const double dp = d[x] + 0.2 * d2[x];
      direct += dp * dp / p;
    }
    worst = std::max(worst, std::abs(fisher_at(m).value - direct));
    worst = std::max(worst, std::abs(classical_fisher_rao(m) - direct));
  }
  log.le(worst, 1e-6, "agreement");
  log.note << " coin G_F " << gf << ", agreement " << worst;
}

void c9(Log& log) {
  Rng rng(109);
  double worst = 0.0;
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 2 + t % 2;
    const ComplexMatrix d0 = random_density(rng, n);
    ComplexMatrix h = random_hermitian(rng, n);
    h -= ComplexMatrix::identity(n) * cplx(h.trace().real() / static_cast<double>(n));
    h *= 0.05 / h.max_abs();
    ComplexMatrix k = random_hermitian(rng, n);
    k -= ComplexMatrix::identity(n) * cplx(k.trace().real() / static_cast<double>(n));
    k *= 0.02 / k.max_abs();
    const auto g = pair_groupoid(n);
    StatisticalModel m = density_model(g, [=](double s) { return d0 + s * h + (s * s) * k; }, 0.0);
    m.lo = -0.1;
    m.hi = 0.1;
    const Eigen::MatrixXcd e0 = to_eigen(d0), e1 = to_eigen(h);
    const double oracle = (e1 * e0.inverse() * e1).trace().real();
    worst = std::max(worst, std::abs(fisher_at(m).value - oracle));
  }
  log.le(worst, 1e-6, "oracle");
  log.note << " max deviation " << worst;
}

void c10(Log& log) {
  const StatisticalModel coin = classical_model(
      trivial_groupoid(2), [](double s) { return std::vector<double>{0.5 + s, 0.5 - s}; }, 0.1);
  const auto perm = ClassicalKernel::make({{0.0, 1.0}, {1.0, 0.0}});
  const double dp = congruent_invariance(coin, perm, perm).deviation;
  const auto split = ClassicalKernel::make({{1.0, 0.0, 0.0}, {0.0, 1.0 / 3.0, 2.0 / 3.0}});
  const auto merge = ClassicalKernel::make({{1.0, 0.0}, {0.0, 1.0}, {0.0, 1.0}});
  const double ds = congruent_invariance(coin, split, merge).deviation;
  log.le(dp, 1e-6, "permutation");
  log.le(ds, 1e-6, "splitting");
  // three outcomes, permuted
  const StatisticalModel three = classical_model(
      trivial_groupoid(3, {0.2, 0.3, 0.5}),
      [](double s) { return std::vector<double>{0.2 + s, 0.3, 0.5 - s}; }, 0.05);
  const auto p3 = ClassicalKernel::make({{0, 0, 1}, {1, 0, 0}, {0, 1, 0}});
  const auto p3i = ClassicalKernel::make({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}});
  log.le(congruent_invariance(three, p3, p3i).deviation, 1e-6, "3-cycle");
  const auto collapse = ClassicalKernel::make({{1.0, 0.0}, {1.0, 0.0}});
  log.check(throws_kind([&] { congruent_invariance(coin, collapse, perm); }, ErrorKind::NotCongruent),
            "NotCongruent not raised");
  log.note << " deviations " << dp << ", " << ds;
}

void c11(Log& log) {
  struct Case {
    std::string args;
    int code;
    std::function<bool(const io::json&)> ok;
  };
  const std::vector<Case> cases = {
      {"validate pair2.json --json", 0, [](const io::json& j) { return j["valid"] == true; }},
      {"validate coin_model.json --json", 0, [](const io::json& j) { return j["kind"] == "model"; }},
      {"validate invalid_state.json --json", 1, [](const io::json& j) { return j["valid"] == false; }},
      {"validate bad_groupoid.json --json", 1, [](const io::json& j) { return j["error"] == "InverseViolation"; }},
      {"validate nonstochastic.json --json", 1, [](const io::json& j) { return j["valid"] == false; }},
      {"validate bad_fmt.json --json", 2, [](const io::json& j) { return j["error"] == "Schema"; }},
      {"validate broken.json --json", 2, [](const io::json& j) { return j.contains("error"); }},
      {"compose transpose.json transpose.json --json", 0, [](const io::json& j) { return j.contains("pi_re"); }},
      {"push pure.json transpose.json --json", 0, [](const io::json& j) { return j.contains("phi_re"); }},
      {"pull transpose.json sigma_z.json --json", 0, [](const io::json& j) { return j.contains("coeff_re"); }},
      {"pipeline pipeline.json --json", 0, [](const io::json& j) { return j["passed"] == true; }},
      {"gns pure.json --json", 0, [](const io::json& j) { return j["dim"] == 2 && j["ideal_dim"] == 2; }},
      {"gns mixed.json --json", 0, [](const io::json& j) { return j["dim"] == 4; }},
      {"fisher coin_model.json --json", 0,
       [](const io::json& j) { return std::abs(j["fisher"].get<double>() - 4.0) < 1e-6; }},
      {"crb coin_model.json --estimator pm_half.json --json", 0,
       [](const io::json& j) {
         return std::abs(j["bound"].get<double>() - 0.25) < 1e-8 &&
                std::abs(j["second_moment"].get<double>() - 0.25) < 1e-12 && j["saturated"] == true;
       }},
      {"crb flat_model.json --json", 3, [](const io::json& j) { return j["error"] == "ZeroInformation"; }},
      {"cp transpose.json --json", 0, [](const io::json& j) { return j["is_cp"] == false; }},
      {"from-kraus depolarizing.json --json", 0, [](const io::json& j) { return j.contains("pi_re"); }},
      {"embed swap.json --json", 0, [](const io::json& j) { return j.contains("pi_re"); }},
      {"sample state --n 2 --seed 3 --json", 0, [](const io::json& j) { return j.contains("phi_re"); }},
  };
  int passed = 0;
  for (const auto& c : cases) {
    const CliRun r = run_cli(c.args);
    const io::json j = r.json();
    const bool ok = r.code == c.code && !j.is_discarded() && c.ok(j);
    passed += ok;
    log.check(ok, c.args + " -> " + std::to_string(r.code));
  }
  log.check(run_cli("bogus").code == 2, "unknown subcommand");
  log.note << " " << passed << "/" << cases.size() << " invocations";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, void (*)(Log&)>> criteria = {
      {"groupoid axioms and planted violations", c1},
      {"regular representation", c2},
      {"pair groupoid and density dictionary", c3},
      {"classical reduction", c4},
      {"quantum kernels", c5},
      {"GNS", c6},
      {"Cramer-Rao, qubit", c7},
      {"Cramer-Rao, coin and classical agreement", c8},
      {"oracle identity", c9},
      {"congruent invariance", c10},
      {"CLI", c11},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Log log;
    try {
      criteria[i].second(log);
    } catch (const std::exception& e) {
      log.ok = false;
      log.note << " [uncaught: " << e.what() << "]";
    }
    failures += !log.ok;
    std::printf("%s %zu %s:%s\n", log.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), log.note.str().c_str());
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
