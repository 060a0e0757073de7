#pragma once

// States as normalized positive-definite characteristic functions phi on Γ.

#include <optional>
#include <string>
#include <vector>

#include "cencov/algebra.hpp"
#include "cencov/groupoid.hpp"
#include "cencov/numkit.hpp"

namespace cencov {

struct StateTolerances {
  double psd = 1e-9;
  double normalization = 1e-9;
  double symmetry = 1e-9;
};

struct StateReport {
  std::vector<double> fiber_min_eigenvalue;  // per outcome
  double normalization_deficit = 0.0;        // |sum_x phi(1_x) P(x) - 1|
  double symmetry_deficit = 0.0;             // max |phi(alpha^-1) - conj(phi(alpha))|
  bool positive = false;
  bool normalized = false;
  bool symmetric = false;
  /// First outcome whose fiber matrix fails the PSD test, if any.
  std::optional<FiniteGroupoid::Index> offending_fiber;

  bool passed() const noexcept { return positive && normalized && symmetric; }
  std::string summary() const;
};

/// Fiber matrix M^x[k,l] = phi(alpha_k^-1 ∘ alpha_l) over the target fiber of x.
ComplexMatrix fiber_matrix(const FiniteGroupoid& g, std::span<const cplx> phi, FiniteGroupoid::Index x);

/// Report-style check; never throws on invalid phi (DimensionMismatch only
/// when phi has the wrong length).
StateReport check_state(std::span<const cplx> phi, const FiniteGroupoid& g, const StateTolerances& tol = {});

class State {
 public:
  /// InvalidState (with the report summary) unless check_state passes.
  static State make(GroupoidPtr g, CVector phi, const StateTolerances& tol = {});

  const GroupoidPtr& groupoid() const noexcept { return groupoid_; }
  const CVector& phi() const noexcept { return phi_; }
  cplx phi(FiniteGroupoid::Index a) const { return phi_[a]; }

 private:
  State(GroupoidPtr g, CVector phi) : groupoid_(std::move(g)), phi_(std::move(phi)) {}
  GroupoidPtr groupoid_;
  CVector phi_;
};

/// rho(lambda(a)) = sum_alpha a(alpha) phi(alpha) nu(alpha).
cplx expectation(const State& rho, const AlgebraElement& a);
/// Same sum for an unvalidated characteristic function.
cplx expectation(const FiniteGroupoid& g, std::span<const cplx> phi, std::span<const cplx> a);

/// p(x) = phi(1_x) P(x).
std::vector<double> outcome_distribution(const State& rho);

/// D[x,y] = phi(x -> y) sqrt(P(x) P(y)) on a pair groupoid with uniform P.
ComplexMatrix density_from_state(const State& rho);
/// Inverse dictionary; InvalidDensity unless D is Hermitian PSD with unit trace.
State state_from_density(const ComplexMatrix& d, GroupoidPtr g, const StateTolerances& tol = {});

/// InvalidDensity unless d is Hermitian, PSD and has unit trace within 1e-9.
void check_density(const ComplexMatrix& d, double psd_tol = 1e-9);

}  // namespace cencov
