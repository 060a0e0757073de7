#include "cencov/states.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cencov/error.hpp"

namespace cencov {

namespace {

using Index = FiniteGroupoid::Index;

constexpr double kTraceTol = 1e-9;

}  // namespace

std::string StateReport::summary() const {
  std::ostringstream os;
  os << "positive=" << (positive ? "yes" : "no");
  if (offending_fiber) os << " (fiber " << *offending_fiber << ")";
  os << " normalization_deficit=" << normalization_deficit << " symmetry_deficit=" << symmetry_deficit;
  return os.str();
}

ComplexMatrix fiber_matrix(const FiniteGroupoid& g, std::span<const cplx> phi, Index x) {
  const auto fiber = g.fiber(x);
  ComplexMatrix m(fiber.size(), fiber.size());
  for (std::size_t k = 0; k < fiber.size(); ++k) {
    const Index inv = g.inverse(fiber[k]);
    for (std::size_t l = 0; l < fiber.size(); ++l) m(k, l) = phi[g.compose(inv, fiber[l])];
  }
  return m;
}

StateReport check_state(std::span<const cplx> phi, const FiniteGroupoid& g, const StateTolerances& tol) {
  if (phi.size() != g.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "phi has " + std::to_string(phi.size()) + " entries for " + std::to_string(g.size()) + " elements");
  }
  StateReport r;
  for (Index a = 0; a < g.size(); ++a) {
    r.symmetry_deficit = std::max(r.symmetry_deficit, std::abs(phi[g.inverse(a)] - std::conj(phi[a])));
  }
  r.symmetric = r.symmetry_deficit <= tol.symmetry;

  cplx total = 0.0;
  for (Index x = 0; x < g.num_outcomes(); ++x) total += phi[g.unit_of(x)] * g.P(x);
  r.normalization_deficit = std::abs(total - 1.0);
  r.normalized = r.normalization_deficit <= tol.normalization;

  // The Hermitian part carries the PSD question; asymmetry is reported above.
  r.positive = true;
  r.fiber_min_eigenvalue.resize(g.num_outcomes());
  for (Index x = 0; x < g.num_outcomes(); ++x) {
    const ComplexMatrix m = fiber_matrix(g, phi, x);
    const ComplexMatrix h = 0.5 * (m + m.adjoint());
    const PsdVerdict v = psd_verdict(h, tol.psd);
    r.fiber_min_eigenvalue[x] = v.min_eigenvalue;
    if (!v.is_psd && r.positive) {
      r.positive = false;
      r.offending_fiber = x;
    }
  }
  return r;
}

State State::make(GroupoidPtr g, CVector phi, const StateTolerances& tol) {
  const StateReport r = check_state(phi, *g, tol);
  if (!r.passed()) throw Error(ErrorKind::InvalidState, r.summary());
  return State(std::move(g), std::move(phi));
}

cplx expectation(const FiniteGroupoid& g, std::span<const cplx> phi, std::span<const cplx> a) {
  cplx s = 0.0;
  for (Index k = 0; k < g.size(); ++k) s += a[k] * phi[k] * g.nu(k);
  return s;
}

cplx expectation(const State& rho, const AlgebraElement& a) {
  if (!a.groupoid) throw Error(ErrorKind::GroupoidMismatch, "expectation: element without groupoid");
  require_same_groupoid(*rho.groupoid(), *a.groupoid, "expectation");
  return expectation(*rho.groupoid(), rho.phi(), a.coeff);
}

std::vector<double> outcome_distribution(const State& rho) {
  const FiniteGroupoid& g = *rho.groupoid();
  std::vector<double> p(g.num_outcomes());
  for (Index x = 0; x < g.num_outcomes(); ++x) p[x] = rho.phi(g.unit_of(x)).real() * g.P(x);
  return p;
}

ComplexMatrix density_from_state(const State& rho) {
  const FiniteGroupoid& g = *rho.groupoid();
  require_uniform_pair(g, "density_from_state");
  const std::size_t n = g.num_outcomes();
  ComplexMatrix d(n, n);
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < n; ++y) d(x, y) = rho.phi(g.pair_element(y, x)) * std::sqrt(g.P(x) * g.P(y));
  }
  return d;
}

void check_density(const ComplexMatrix& d, double psd_tol) {
  if (!d.square()) throw Error(ErrorKind::InvalidDensity, "density matrix must be square");
  PsdVerdict v;
  try {
    v = psd_verdict(d, psd_tol);
  } catch (const Error& e) {
    throw Error(ErrorKind::InvalidDensity, e.what());
  }
  if (!v.is_psd) throw Error(ErrorKind::InvalidDensity, "min eigenvalue " + std::to_string(v.min_eigenvalue));
  if (std::abs(d.trace() - 1.0) > kTraceTol) {
    throw Error(ErrorKind::InvalidDensity, "trace " + std::to_string(d.trace().real()) + " != 1");
  }
}

State state_from_density(const ComplexMatrix& d, GroupoidPtr g, const StateTolerances& tol) {
  require_uniform_pair(*g, "state_from_density");
  const std::size_t n = g->num_outcomes();
  if (d.rows() != n || d.cols() != n) {
    throw Error(ErrorKind::DimensionMismatch, "density must be " + std::to_string(n) + "x" + std::to_string(n));
  }
  check_density(d, tol.psd);
  CVector phi(g->size());
  for (Index x = 0; x < n; ++x) {
    for (Index y = 0; y < n; ++y) phi[g->pair_element(y, x)] = d(x, y) / std::sqrt(g->P(x) * g->P(y));
  }
  return State::make(std::move(g), std::move(phi), tol);
}

}  // namespace cencov
