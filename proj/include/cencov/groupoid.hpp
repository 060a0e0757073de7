#pragma once

// Finite groupoids with outcome probability P, a left-invariant fiber
// (Haar) system and the derived total measure and modular function.
//
// Conventions: compose(beta, alpha) is "alpha first, then beta" and is
// defined exactly when target(alpha) == source(beta). The total measure is
// nu(alpha) = fiber_weight(alpha) * P(target(alpha)).

#include <array>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cencov {

/// Raw tables as read from a groupoid file, before any validation.
struct GroupoidSpec {
  std::vector<std::string> outcomes;
  std::vector<std::string> elements;
  std::map<std::string, std::string> source;
  std::map<std::string, std::string> target;
  std::map<std::string, std::string> inverse;
  std::map<std::string, std::string> units;
  std::vector<std::array<std::string, 3>> compose;  // {beta, alpha, beta∘alpha}
  std::map<std::string, double> P;
  std::map<std::string, double> fiber_weight;  // empty: counting measure
};

class FiniteGroupoid;
using GroupoidPtr = std::shared_ptr<const FiniteGroupoid>;

class FiniteGroupoid {
 public:
  using Index = std::size_t;
  static constexpr Index npos = std::numeric_limits<Index>::max();

  std::size_t size() const noexcept { return element_ids_.size(); }
  std::size_t num_outcomes() const noexcept { return outcome_ids_.size(); }

  const std::string& element_id(Index a) const { return element_ids_.at(a); }
  const std::string& outcome_id(Index x) const { return outcome_ids_.at(x); }
  const std::vector<std::string>& element_ids() const noexcept { return element_ids_; }
  const std::vector<std::string>& outcome_ids() const noexcept { return outcome_ids_; }
  std::optional<Index> find_element(const std::string& id) const;
  std::optional<Index> find_outcome(const std::string& id) const;

  Index source(Index a) const { return source_[a]; }
  Index target(Index a) const { return target_[a]; }
  Index inverse(Index a) const { return inverse_[a]; }
  Index unit_of(Index x) const { return unit_of_[x]; }
  bool is_unit(Index a) const { return unit_of_[source_[a]] == a; }
  /// beta∘alpha, or npos when target(alpha) != source(beta).
  Index compose(Index beta, Index alpha) const { return compose_[beta * size() + alpha]; }

  double P(Index x) const { return p_[x]; }
  std::span<const double> probabilities() const noexcept { return p_; }
  double fiber_weight(Index a) const { return weight_[a]; }
  bool counting_measure() const noexcept { return counting_; }
  /// nu(alpha) = fiber_weight(alpha) * P(target(alpha)).
  double nu(Index a) const { return nu_[a]; }
  std::span<const double> measure() const noexcept { return nu_; }
  /// Modular function nu(alpha^-1) / nu(alpha).
  double delta(Index a) const { return delta_[a]; }
  std::span<const double> modular() const noexcept { return delta_; }

  /// Elements with the given target, in canonical element order.
  std::span<const Index> fiber(Index x) const { return fibers_[x]; }

  /// True when every ordered pair of outcomes is joined by exactly one element.
  bool is_pair() const noexcept { return !pair_index_.empty(); }
  /// The element x -> y of a pair groupoid (target y, source x).
  Index pair_element(Index y, Index x) const { return pair_index_.at(y * num_outcomes() + x); }
  bool uniform_P(double tol = 1e-12) const;

  friend GroupoidPtr validate(const GroupoidSpec& spec);

 private:
  FiniteGroupoid() = default;

  std::vector<std::string> element_ids_;
  std::vector<std::string> outcome_ids_;
  std::map<std::string, Index> element_lookup_;
  std::map<std::string, Index> outcome_lookup_;
  std::vector<Index> source_, target_, inverse_, unit_of_;
  std::vector<Index> compose_;
  std::vector<double> p_, weight_, nu_, delta_;
  bool counting_ = true;
  std::vector<std::vector<Index>> fibers_;
  std::vector<Index> pair_index_;
};

/// Checks every groupoid axiom and the measure data; throws the matching
/// violation (Schema, BadMeasure, CoherenceViolation, UnitViolation,
/// InverseViolation, AssociativityViolation, InvarianceViolation,
/// HomomorphismViolation) on the first failure.
GroupoidPtr validate(const GroupoidSpec& spec);

/// Tables of an existing groupoid, suitable for writing or re-validating.
GroupoidSpec to_spec(const FiniteGroupoid& g);

struct StandardKind {
  enum class Tag { Pair, Trivial, Group };
  Tag tag = Tag::Trivial;
  std::size_t n = 1;                                  // Pair / Trivial
  std::vector<std::vector<std::size_t>> table;        // Group: table[g][h] = g*h
};

/// Empty P means uniform. Throws BadMeasure or NotAGroup.
GroupoidPtr construct_standard(const StandardKind& kind, std::vector<double> P = {});
GroupoidPtr pair_groupoid(std::size_t n, std::vector<double> P = {});
GroupoidPtr trivial_groupoid(std::size_t n, std::vector<double> P = {});
GroupoidPtr group_groupoid(const std::vector<std::vector<std::size_t>>& table);
GroupoidPtr cyclic_group(std::size_t n);

/// Element ids are prefixed "1:" / "2:"; P = (w P1, (1-w) P2). BadWeight
/// unless 0 < w < 1.
GroupoidPtr disjoint_union(const FiniteGroupoid& g1, const FiniteGroupoid& g2, double w);
/// Element ids joined as "a&b"; P = P1 ⊗ P2.
GroupoidPtr product(const FiniteGroupoid& g1, const FiniteGroupoid& g2);

/// Recomputes delta from the measure and verifies the homomorphism property
/// on every composable pair and delta(1_x) = 1.
std::vector<double> modular_function(const FiniteGroupoid& g);

/// UnknownOutcome if the id is not an outcome of g.
std::vector<FiniteGroupoid::Index> target_fiber(const FiniteGroupoid& g, const std::string& outcome);

/// Same ids, tables and measure (used for GroupoidMismatch checks).
bool same_groupoid(const FiniteGroupoid& a, const FiniteGroupoid& b);
void require_same_groupoid(const FiniteGroupoid& a, const FiniteGroupoid& b, const char* where);

}  // namespace cencov
