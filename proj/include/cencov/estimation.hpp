#pragma once

// One-parameter statistical models on a fixed groupoid, the Riesz
// representer of the derivative functional, the GNS Fisher metric and the
// Cramer-Rao bound, plus the classical Fisher-Rao metric and its invariance
// under congruent embeddings.

#include <functional>
#include <vector>

#include "cencov/algebra.hpp"
#include "cencov/channels.hpp"
#include "cencov/gns.hpp"
#include "cencov/states.hpp"

namespace cencov {

struct StatisticalModel {
  GroupoidPtr groupoid;
  std::function<CVector(double)> curve;  // s -> phi_s, reentrant
  double lo = -1.0;
  double hi = 1.0;
  double s0 = 0.0;

  /// IntervalExceeded outside [lo, hi]; InvalidState if phi_s is not a state.
  State state_at(double s) const;
};

/// Natural cubic spline through (grid[i], phis[i]), entrywise on real and
/// imaginary parts. Two knots give linear interpolation.
StatisticalModel interpolated_model(GroupoidPtr g, std::vector<double> grid, std::vector<CVector> phis, double s0,
                                    double lo, double hi);

constexpr double kDefaultStep = 1e-5;
constexpr double kFoliumTol = 1e-6;
constexpr double kBoundTol = 1e-12;
constexpr double kProbabilityFloor = 1e-12;

/// v_alpha = d/ds phi_s(alpha) nu(alpha) at s0 by central differences.
CVector derivative_vector(const StatisticalModel& m, double h = kDefaultStep);

struct RieszResult {
  CVector ell;      // coordinates over the spanning set
  CVector v;        // derivative vector
  double folium_residual = 0.0;
  std::size_t rank = 0;
};

/// Minimum-norm solution of <ell|B> = Phi(B) for all B. FoliumViolation when
/// the residual exceeds folium_tol.
RieszResult riesz_representer(const StatisticalModel& m, const GnsSpace& s, double h = kDefaultStep,
                              double folium_tol = kFoliumTol);

struct FisherResult {
  double value = 0.0;
  double imag = 0.0;  // diagnostic
  RieszResult riesz;
};

FisherResult fisher_metric(const StatisticalModel& m, const GnsSpace& s, double h = kDefaultStep);
/// G_F(xi, zeta) = <ell_xi | ell_zeta>.
cplx fisher_form(const GnsSpace& s, const RieszResult& xi, const RieszResult& zeta);

/// 1 / G_F; ZeroInformation when G_F <= 1e-12.
double cramer_rao_bound(const StatisticalModel& m, const GnsSpace& s, double h = kDefaultStep);

class Estimator {
 public:
  /// NotHermitian unless star(a) == a within tol.
  static Estimator make(AlgebraElement a, double tol = 1e-10);
  const AlgebraElement& element() const noexcept { return a_; }

 private:
  explicit Estimator(AlgebraElement a) : a_(std::move(a)) {}
  AlgebraElement a_;
};

struct UnbiasedReport {
  std::vector<double> grid;
  std::vector<double> deviation;  // |rho_s(A) - s|
  double max_deviation = 0.0;
  bool passed = false;
};

UnbiasedReport check_unbiased(const StatisticalModel& m, const Estimator& a, const std::vector<double>& grid,
                              double tol = 1e-8);

struct CramerRaoAudit {
  double second_moment = 0.0;  // rho_0(A* A)
  double bound = 0.0;
  double slack = 0.0;
  bool saturated = false;      // slack <= 1e-6
  double fisher = 0.0;
  /// Unbiasedness near s0 (s0 + k h, |k| <= 5, clipped to the interval).
  double local_bias = 0.0;
};

CramerRaoAudit cramer_rao_audit(const StatisticalModel& m, const Estimator& a, const GnsSpace& s,
                                double h = kDefaultStep);

/// sum_x (d/ds p_s(x))^2 / p_s(x) at s0, for models on trivial groupoids.
/// SupportBoundary when some p_s(x) <= 1e-12.
double classical_fisher_rao(const StatisticalModel& m, double h = kDefaultStep);

struct CongruenceReport {
  double fisher_before = 0.0;
  double fisher_after = 0.0;
  double deviation = 0.0;
};

/// Pushes p_s through K and compares Fisher-Rao values. NotCongruent unless
/// K L = I within 1e-10.
CongruenceReport congruent_invariance(const StatisticalModel& m, const ClassicalKernel& k, const ClassicalKernel& l,
                                      double h = kDefaultStep);

}  // namespace cencov
