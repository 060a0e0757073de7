#pragma once

// Classical and quantum Markov kernels: validation, transport of states and
// observables, composition, classical embedding and the Choi picture on
// pair groupoids.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cencov/algebra.hpp"
#include "cencov/groupoid.hpp"
#include "cencov/numkit.hpp"
#include "cencov/states.hpp"

namespace cencov {

/// Row-stochastic matrix K[x,y] = probability of y given x.
class ClassicalKernel {
 public:
  /// RowSumViolation on negative entries or rows not summing to 1 within 1e-12.
  static ClassicalKernel make(std::vector<std::vector<double>> rows);

  std::size_t rows() const noexcept { return k_.size(); }
  std::size_t cols() const noexcept { return k_.empty() ? 0 : k_.front().size(); }
  double operator()(std::size_t x, std::size_t y) const { return k_[x][y]; }
  const std::vector<std::vector<double>>& matrix() const noexcept { return k_; }

  /// p' = p K
  std::vector<double> push(std::span<const double> p) const;
  /// (K f)(x) = sum_y K[x,y] f(y)
  std::vector<double> pull(std::span<const double> f) const;

 private:
  explicit ClassicalKernel(std::vector<std::vector<double>> k) : k_(std::move(k)) {}
  std::vector<std::vector<double>> k_;
};

/// K then L, i.e. the matrix product K L.
ClassicalKernel compose(const ClassicalKernel& k, const ClassicalKernel& l);

/// Pi[alpha1, alpha2] stored as a |Γ1| x |Γ2| matrix.
struct QuantumKernel {
  GroupoidPtr source;
  GroupoidPtr target;
  ComplexMatrix pi;

  cplx operator()(FiniteGroupoid::Index a1, FiniteGroupoid::Index a2) const { return pi(a1, a2); }
};

struct KernelTolerances {
  double normalization = 1e-9;
  double psd = 1e-9;
  double hermiticity = 1e-9;
};

struct KernelReport {
  double normalization_deficit = 0.0;
  /// Smallest fiber eigenvalue of Pi(1_x, .) over all units 1_x of Γ1.
  double positivity_min_eigenvalue = 0.0;
  double hermiticity_deficit = 0.0;
  bool normalized = false;
  bool positive = false;
  bool hermitian = false;
  std::optional<FiniteGroupoid::Index> offending_element;  // first failing unit of Γ1

  /// Diagnostic only: fiberwise positive-definiteness of Pi as a function on
  /// Γ1 x Γ2. On pair groupoids this is the Choi test.
  double joint_min_eigenvalue = 0.0;
  bool jointly_positive = false;

  bool passed() const noexcept { return normalized && positive && hermitian; }
  std::string summary() const;
};

KernelReport validate_kernel(const QuantumKernel& k, const KernelTolerances& tol = {});

/// Pi(a1, a2) = [a1 == a2] / nu(a1).
QuantumKernel identity_kernel(GroupoidPtr g);

/// Raw pushforward sum over Γ1, no validation of the result.
CVector push_phi(const QuantumKernel& k, std::span<const cplx> phi1);

/// PositivityLost / NormalizationLost when the pushed function is not a state.
State push_state(const State& rho, const QuantumKernel& k, const StateTolerances& tol = {});

AlgebraElement pull_observable(const QuantumKernel& k, const AlgebraElement& f2);

/// (Pi12 ∘ Pi23)(a1, a3) = sum_a2 Pi12(a1,a2) Pi23(a2,a3) nu2(a2).
QuantumKernel compose(const QuantumKernel& k12, const QuantumKernel& k23);

/// Pi(1_x, 1_y) = K[x,y] / P2(y) between trivial groupoids.
QuantumKernel embed_classical(const ClassicalKernel& k, GroupoidPtr g1, GroupoidPtr g2);

/// Linear map on matrices given by its images of the matrix units:
/// image(x, y) = Phi(E_xy), an m x m matrix for x, y < n.
class MatrixMap {
 public:
  MatrixMap(std::size_t n, std::size_t m, std::vector<ComplexMatrix> images);

  std::size_t in_dim() const noexcept { return n_; }
  std::size_t out_dim() const noexcept { return m_; }
  const ComplexMatrix& image(std::size_t x, std::size_t y) const { return images_[x * n_ + y]; }

  ComplexMatrix operator()(const ComplexMatrix& d) const;
  /// Choi matrix C[(x,a),(y,b)] = Phi(E_xy)[a,b].
  ComplexMatrix choi() const;

 private:
  std::size_t n_, m_;
  std::vector<ComplexMatrix> images_;
};

/// State-side map Phi_* between density matrices of pair(n) and pair(m).
MatrixMap kernel_to_cp_map(const QuantumKernel& k);

/// Kernel realizing a given state-side map (inverse of kernel_to_cp_map).
QuantumKernel kernel_from_matrix_map(const MatrixMap& phi, GroupoidPtr g1, GroupoidPtr g2);

/// Kraus operators A_k (m x n), Phi_*(D) = sum A_k D A_k†. NonTracePreserving
/// unless sum A_k† A_k = I within tol.
QuantumKernel choi_to_kernel(const std::vector<ComplexMatrix>& kraus, GroupoidPtr g1, GroupoidPtr g2,
                             double tol = 1e-9);

struct CpVerdict {
  bool is_cp = false;
  double min_choi_eigenvalue = 0.0;
  std::size_t choi_rank = 0;
};

/// Choi test on pair groupoids with uniform P (NotPairGroupoid / NonUniformP
/// otherwise).
CpVerdict cp_verdict(const QuantumKernel& k, double psd_tol = 1e-9);

/// True iff push(rho1) matches rho2 entrywise within tol.
bool check_ncp_morphism(const QuantumKernel& k, const State& rho1, const State& rho2, double tol = 1e-9);

// Handy channels on qubits / pair groupoids.
std::vector<ComplexMatrix> depolarizing_kraus(double lambda);
/// D -> D^T on pair(n); positive but not completely positive.
QuantumKernel transpose_kernel(GroupoidPtr g);

}  // namespace cencov
