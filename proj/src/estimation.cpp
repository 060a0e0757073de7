#include "cencov/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cencov/error.hpp"

namespace cencov {

namespace {

using Index = FiniteGroupoid::Index;

void require_classical(const FiniteGroupoid& g) {
  for (Index a = 0; a < g.size(); ++a) {
    if (!g.is_unit(a)) throw Error(ErrorKind::Unsupported, "classical Fisher-Rao needs a trivial groupoid");
  }
}

std::vector<double> classical_distribution(const StatisticalModel& m, double s) {
  const State st = m.state_at(s);
  return outcome_distribution(st);
}

// sum_x p'(x)^2 / p(x) with central differences; zero-mass outcomes that
// stay at zero carry no information and are skipped.
double fisher_rao_sum(const std::function<std::vector<double>(double)>& p, double s0, double h) {
  const auto p0 = p(s0);
  const auto pp = p(s0 + h);
  const auto pm = p(s0 - h);
  double sum = 0.0;
  for (std::size_t x = 0; x < p0.size(); ++x) {
    const double d = (pp[x] - pm[x]) / (2.0 * h);
    const double lo = std::min({p0[x], pp[x], pm[x]});
    if (lo <= kProbabilityFloor) {
      if (std::max({p0[x], pp[x], pm[x]}) <= kProbabilityFloor) continue;
      throw Error(ErrorKind::SupportBoundary, "p_s(" + std::to_string(x) + ") reaches " + std::to_string(lo));
    }
    sum += d * d / p0[x];
  }
  return sum;
}

class CubicSpline {
 public:
  CubicSpline(std::vector<double> t, std::vector<CVector> y) : t_(std::move(t)), y_(std::move(y)) {
    const std::size_t n = t_.size();
    const std::size_t dim = y_.front().size();
    m_.assign(n, CVector(dim));
    if (n < 3) return;
    // Thomas algorithm for the natural end conditions M_0 = M_{n-1} = 0.
    std::vector<double> diag(n, 0.0), upper(n, 0.0);
    std::vector<CVector> rhs(n, CVector(dim));
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double hl = t_[i] - t_[i - 1];
      const double hr = t_[i + 1] - t_[i];
      diag[i] = (hl + hr) / 3.0;
      upper[i] = hr / 6.0;
      for (std::size_t k = 0; k < dim; ++k) {
        rhs[i][k] = (y_[i + 1][k] - y_[i][k]) / hr - (y_[i][k] - y_[i - 1][k]) / hl;
      }
    }
    for (std::size_t i = 2; i + 1 < n; ++i) {
      const double lower = (t_[i] - t_[i - 1]) / 6.0;
      const double w = lower / diag[i - 1];
      diag[i] -= w * upper[i - 1];
      for (std::size_t k = 0; k < dim; ++k) rhs[i][k] -= w * rhs[i - 1][k];
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      for (std::size_t k = 0; k < dim; ++k) {
        const cplx next = (i + 2 < n) ? m_[i + 1][k] : cplx{};
        m_[i][k] = (rhs[i][k] - upper[i] * next) / diag[i];
      }
    }
  }

  CVector operator()(double s) const {
    const auto it = std::upper_bound(t_.begin(), t_.end(), s);
    std::size_t i = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
    i = std::min(i, t_.size() - 2);
    const double h = t_[i + 1] - t_[i];
    const double a = (t_[i + 1] - s) / h;
    const double b = 1.0 - a;
    const double ca = (a * a * a - a) * h * h / 6.0;
    const double cb = (b * b * b - b) * h * h / 6.0;
    CVector out(y_[i].size());
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = a * y_[i][k] + b * y_[i + 1][k] + ca * m_[i][k] + cb * m_[i + 1][k];
    }
    return out;
  }

 private:
  std::vector<double> t_;
  std::vector<CVector> y_;
  std::vector<CVector> m_;
};

}  // namespace

State StatisticalModel::state_at(double s) const {
  if (s < lo || s > hi) {
    throw Error(ErrorKind::IntervalExceeded,
                "s = " + std::to_string(s) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return State::make(groupoid, curve(s));
}

StatisticalModel interpolated_model(GroupoidPtr g, std::vector<double> grid, std::vector<CVector> phis, double s0,
                                    double lo, double hi) {
  if (grid.size() < 2 || grid.size() != phis.size()) {
    throw Error(ErrorKind::Schema, "a model needs at least two grid states");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (phis[i].size() != g->size()) throw Error(ErrorKind::DimensionMismatch, "grid state on another groupoid");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw Error(ErrorKind::Schema, "grid must be strictly increasing");
  }
  if (lo < grid.front() || hi > grid.back() || !(lo <= s0 && s0 <= hi)) {
    throw Error(ErrorKind::IntervalExceeded, "interval must lie inside the grid and contain s0");
  }
  auto spline = std::make_shared<const CubicSpline>(std::move(grid), std::move(phis));
  return {std::move(g), [spline](double s) { return (*spline)(s); }, lo, hi, s0};
}

CVector derivative_vector(const StatisticalModel& m, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::IntervalExceeded, "step must be positive");
  const State plus = m.state_at(m.s0 + h);
  const State minus = m.state_at(m.s0 - h);
  const FiniteGroupoid& g = *m.groupoid;
  CVector v(g.size());
  for (Index a = 0; a < g.size(); ++a) v[a] = (plus.phi(a) - minus.phi(a)) * g.nu(a) / (2.0 * h);
  return v;
}

RieszResult riesz_representer(const StatisticalModel& m, const GnsSpace& s, double h, double folium_tol) {
  require_same_groupoid(*m.groupoid, *s.groupoid, "riesz_representer");
  RieszResult r;
  r.v = derivative_vector(m, h);
  // <ell|b> = ell† gram b must equal sum_a b_a v_a, hence gram ell = conj(v).
  CVector rhs(r.v.size());
  for (std::size_t k = 0; k < rhs.size(); ++k) rhs[k] = std::conj(r.v[k]);
  MinNormSolution sol = min_norm_solve(s.gram, rhs, s.rank_tol);
  r.ell = std::move(sol.x);
  r.folium_residual = sol.residual;
  r.rank = sol.rank;
  if (r.folium_residual > folium_tol) {
    throw Error(ErrorKind::FoliumViolation, "residual " + std::to_string(r.folium_residual));
  }
  return r;
}

cplx fisher_form(const GnsSpace& s, const RieszResult& xi, const RieszResult& zeta) {
  return gns_inner(s, xi.ell, zeta.ell);
}

FisherResult fisher_metric(const StatisticalModel& m, const GnsSpace& s, double h) {
  FisherResult f;
  f.riesz = riesz_representer(m, s, h);
  const cplx g = fisher_form(s, f.riesz, f.riesz);
  f.value = g.real();
  f.imag = g.imag();
  return f;
}

double cramer_rao_bound(const StatisticalModel& m, const GnsSpace& s, double h) {
  const double g = fisher_metric(m, s, h).value;
  if (g <= kBoundTol) throw Error(ErrorKind::ZeroInformation, "G_F = " + std::to_string(g));
  return 1.0 / g;
}

Estimator Estimator::make(AlgebraElement a, double tol) {
  const double dev = max_abs_diff(star(a).coeff, a.coeff);
  if (dev > tol) throw Error(ErrorKind::NotHermitian, "estimator is not self-adjoint, deviation " + std::to_string(dev));
  return Estimator(std::move(a));
}

UnbiasedReport check_unbiased(const StatisticalModel& m, const Estimator& a, const std::vector<double>& grid,
                              double tol) {
  UnbiasedReport r;
  r.grid = grid;
  for (double s : grid) {
    const double d = std::abs(expectation(m.state_at(s), a.element()) - s);
    r.deviation.push_back(d);
    r.max_deviation = std::max(r.max_deviation, d);
  }
  r.passed = r.max_deviation <= tol;
  return r;
}

CramerRaoAudit cramer_rao_audit(const StatisticalModel& m, const Estimator& a, const GnsSpace& s, double h) {
  CramerRaoAudit r;
  r.fisher = fisher_metric(m, s, h).value;
  if (r.fisher <= kBoundTol) throw Error(ErrorKind::ZeroInformation, "G_F = " + std::to_string(r.fisher));
  r.bound = 1.0 / r.fisher;
  const AlgebraElement& x = a.element();
  r.second_moment = expectation(s.base, convolve(star(x), x)).real();
  r.slack = r.second_moment - r.bound;
  r.saturated = r.slack <= 1e-6;
  std::vector<double> grid;
  for (int k = -5; k <= 5; ++k) {
    const double t = m.s0 + k * h;
    if (t >= m.lo && t <= m.hi) grid.push_back(t);
  }
  r.local_bias = check_unbiased(m, a, grid).max_deviation;
  return r;
}

double classical_fisher_rao(const StatisticalModel& m, double h) {
  require_classical(*m.groupoid);
  return fisher_rao_sum([&m](double s) { return classical_distribution(m, s); }, m.s0, h);
}

CongruenceReport congruent_invariance(const StatisticalModel& m, const ClassicalKernel& k, const ClassicalKernel& l,
                                      double h) {
  require_classical(*m.groupoid);
  const std::size_t n = m.groupoid->num_outcomes();
  if (k.rows() != n || l.rows() != k.cols() || l.cols() != n) {
    throw Error(ErrorKind::NotCongruent, "kernel shapes do not admit K L = I");
  }
  double dev = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t z = 0; z < n; ++z) {
      double s = 0.0;
      for (std::size_t y = 0; y < k.cols(); ++y) s += k(x, y) * l(y, z);
      dev = std::max(dev, std::abs(s - (x == z ? 1.0 : 0.0)));
    }
  }
  if (dev > 1e-10) throw Error(ErrorKind::NotCongruent, "max |K L - I| = " + std::to_string(dev));

  CongruenceReport r;
  r.fisher_before = classical_fisher_rao(m, h);
  r.fisher_after =
      fisher_rao_sum([&](double s) { return k.push(classical_distribution(m, s)); }, m.s0, h);
  r.deviation = std::abs(r.fisher_before - r.fisher_after);
  return r;
}

}  // namespace cencov
