#include "cencov/groupoid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "cencov/error.hpp"

namespace cencov {

namespace {

using Index = FiniteGroupoid::Index;
constexpr Index npos = FiniteGroupoid::npos;

constexpr double kProbabilitySumTol = 1e-9;
constexpr double kWeightRelTol = 1e-12;

template <class Map>
Index lookup(const Map& m, const std::string& id, const char* what) {
  auto it = m.find(id);
  if (it == m.end()) throw Error(ErrorKind::Schema, std::string("unknown ") + what + " '" + id + "'");
  return it->second;
}

std::vector<double> uniform(std::size_t n) { return std::vector<double>(n, 1.0 / static_cast<double>(n)); }

std::map<std::string, double> keyed(const std::vector<std::string>& ids, const std::vector<double>& values) {
  std::map<std::string, double> m;
  for (std::size_t i = 0; i < ids.size(); ++i) m[ids[i]] = values[i];
  return m;
}

bool close_rel(double a, double b) { return std::abs(a - b) <= kWeightRelTol * std::max(std::abs(a), std::abs(b)); }

std::string pair_id(std::size_t y, std::size_t x) {
  return "(" + std::to_string(y + 1) + "," + std::to_string(x + 1) + ")";
}

}  // namespace

std::optional<Index> FiniteGroupoid::find_element(const std::string& id) const {
  auto it = element_lookup_.find(id);
  if (it == element_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<Index> FiniteGroupoid::find_outcome(const std::string& id) const {
  auto it = outcome_lookup_.find(id);
  if (it == outcome_lookup_.end()) return std::nullopt;
  return it->second;
}

bool FiniteGroupoid::uniform_P(double tol) const {
  const double u = 1.0 / static_cast<double>(num_outcomes());
  return std::all_of(p_.begin(), p_.end(), [&](double p) { return std::abs(p - u) <= tol; });
}

GroupoidPtr validate(const GroupoidSpec& spec) {
  // shared_ptr cannot reach the private constructor through make_shared.
  std::shared_ptr<FiniteGroupoid> g(new FiniteGroupoid());
  const std::size_t n = spec.elements.size();
  const std::size_t m = spec.outcomes.size();
  if (n == 0 || m == 0) throw Error(ErrorKind::Schema, "groupoid needs at least one outcome and one element");

  g->element_ids_ = spec.elements;
  g->outcome_ids_ = spec.outcomes;
  for (Index i = 0; i < n; ++i) {
    if (!g->element_lookup_.emplace(spec.elements[i], i).second) {
      throw Error(ErrorKind::Schema, "duplicate element id '" + spec.elements[i] + "'");
    }
  }
  for (Index x = 0; x < m; ++x) {
    if (!g->outcome_lookup_.emplace(spec.outcomes[x], x).second) {
      throw Error(ErrorKind::Schema, "duplicate outcome id '" + spec.outcomes[x] + "'");
    }
  }

  auto element_map = [&](const std::map<std::string, std::string>& table, const char* name, bool to_outcome) {
    std::vector<Index> out(n, npos);
    for (const auto& [key, value] : table) {
      const Index a = lookup(g->element_lookup_, key, "element");
      out[a] = to_outcome ? lookup(g->outcome_lookup_, value, "outcome") : lookup(g->element_lookup_, value, "element");
    }
    for (Index a = 0; a < n; ++a) {
      if (out[a] == npos) throw Error(ErrorKind::Schema, std::string(name) + " missing for '" + spec.elements[a] + "'");
    }
    return out;
  };
  g->source_ = element_map(spec.source, "source", true);
  g->target_ = element_map(spec.target, "target", true);
  g->inverse_ = element_map(spec.inverse, "inverse", false);

  g->unit_of_.assign(m, npos);
  for (const auto& [x, u] : spec.units) {
    g->unit_of_[lookup(g->outcome_lookup_, x, "outcome")] = lookup(g->element_lookup_, u, "element");
  }
  for (Index x = 0; x < m; ++x) {
    if (g->unit_of_[x] == npos) throw Error(ErrorKind::Schema, "unit missing for outcome '" + spec.outcomes[x] + "'");
  }

  g->compose_.assign(n * n, npos);
  for (const auto& [b, a, r] : spec.compose) {
    const Index bi = lookup(g->element_lookup_, b, "element");
    const Index ai = lookup(g->element_lookup_, a, "element");
    const Index ri = lookup(g->element_lookup_, r, "element");
    Index& slot = g->compose_[bi * n + ai];
    if (slot != npos && slot != ri) {
      throw Error(ErrorKind::Schema, "conflicting compose entries for (" + b + ", " + a + ")");
    }
    slot = ri;
  }

  // Measure.
  g->p_.assign(m, 0.0);
  for (const auto& [x, p] : spec.P) g->p_[lookup(g->outcome_lookup_, x, "outcome")] = p;
  if (spec.P.size() != m) throw Error(ErrorKind::BadMeasure, "P must assign every outcome");
  double total = 0.0;
  for (Index x = 0; x < m; ++x) {
    const double p = g->p_[x];
    if (!std::isfinite(p) || p <= 0.0) {
      throw Error(ErrorKind::BadMeasure, "P('" + spec.outcomes[x] + "') = " + std::to_string(p) + " is not > 0");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kProbabilitySumTol) {
    throw Error(ErrorKind::BadMeasure, "P sums to " + std::to_string(total));
  }
  g->weight_.assign(n, 1.0);
  g->counting_ = spec.fiber_weight.empty();
  for (const auto& [a, w] : spec.fiber_weight) {
    if (!std::isfinite(w) || w <= 0.0) {
      throw Error(ErrorKind::BadMeasure, "fiber weight of '" + a + "' must be > 0");
    }
    g->weight_[lookup(g->element_lookup_, a, "element")] = w;
  }

  const auto& s = g->source_;
  const auto& t = g->target_;
  auto name = [&](Index a) { return "'" + spec.elements[a] + "'"; };

  // Coherence: defined exactly on composable pairs, with the right endpoints.
  for (Index b = 0; b < n; ++b) {
    for (Index a = 0; a < n; ++a) {
      const Index r = g->compose(b, a);
      const bool composable = t[a] == s[b];
      if (!composable && r != npos) {
        throw Error(ErrorKind::CoherenceViolation, "compose(" + name(b) + ", " + name(a) + ") defined but not composable");
      }
      if (composable && r == npos) {
        throw Error(ErrorKind::CoherenceViolation, "compose(" + name(b) + ", " + name(a) + ") missing for composable pair");
      }
      if (composable && (s[r] != s[a] || t[r] != t[b])) {
        throw Error(ErrorKind::CoherenceViolation,
                    "compose(" + name(b) + ", " + name(a) + ") = " + name(r) + " has wrong source/target");
      }
    }
  }

  // Units.
  for (Index x = 0; x < m; ++x) {
    const Index u = g->unit_of_[x];
    if (s[u] != x || t[u] != x) {
      throw Error(ErrorKind::UnitViolation, "unit of '" + spec.outcomes[x] + "' is " + name(u) + ", not a loop at it");
    }
  }
  for (Index a = 0; a < n; ++a) {
    if (g->compose(a, g->unit_of_[s[a]]) != a || g->compose(g->unit_of_[t[a]], a) != a) {
      throw Error(ErrorKind::UnitViolation, "units do not fix " + name(a));
    }
  }

  // Inverses.
  for (Index a = 0; a < n; ++a) {
    const Index ai = g->inverse_[a];
    if (s[ai] != t[a] || t[ai] != s[a] || g->compose(ai, a) != g->unit_of_[s[a]] ||
        g->compose(a, ai) != g->unit_of_[t[a]]) {
      throw Error(ErrorKind::InverseViolation, name(ai) + " is not an inverse of " + name(a));
    }
  }

  // Associativity over every composable triple (gamma, beta, alpha).
  for (Index a = 0; a < n; ++a) {
    for (Index b = 0; b < n; ++b) {
      if (t[a] != s[b]) continue;
      const Index ba = g->compose(b, a);
      for (Index c = 0; c < n; ++c) {
        if (t[b] != s[c]) continue;
        if (g->compose(g->compose(c, b), a) != g->compose(c, ba)) {
          throw Error(ErrorKind::AssociativityViolation,
                      "(" + name(c) + " o " + name(b) + ") o " + name(a) + " != " + name(c) + " o (" + name(b) +
                          " o " + name(a) + ")");
        }
      }
    }
  }

  // Left invariance of the fiber system: translation by alpha carries
  // nu^{s(alpha)} onto nu^{t(alpha)} point by point.
  if (!g->counting_) {
    for (Index a = 0; a < n; ++a) {
      for (Index b = 0; b < n; ++b) {
        if (t[b] != s[a]) continue;
        const Index ab = g->compose(a, b);
        if (!close_rel(g->weight_[ab], g->weight_[b])) {
          throw Error(ErrorKind::InvarianceViolation,
                      "fiber weights not left-invariant: w(" + name(a) + " o " + name(b) + ") != w(" + name(b) + ")");
        }
      }
    }
  }

  g->nu_.resize(n);
  for (Index a = 0; a < n; ++a) g->nu_[a] = g->weight_[a] * g->p_[t[a]];
  g->delta_.resize(n);
  for (Index a = 0; a < n; ++a) g->delta_[a] = g->nu_[g->inverse_[a]] / g->nu_[a];

  g->fibers_.assign(m, {});
  for (Index a = 0; a < n; ++a) g->fibers_[t[a]].push_back(a);

  if (n == m * m) {
    std::vector<Index> idx(m * m, npos);
    bool ok = true;
    for (Index a = 0; a < n && ok; ++a) {
      Index& slot = idx[t[a] * m + s[a]];
      if (slot != npos) ok = false;
      slot = a;
    }
    if (ok) g->pair_index_ = std::move(idx);
  }

  modular_function(*g);  // HomomorphismViolation guard for user weights
  return g;
}

GroupoidSpec to_spec(const FiniteGroupoid& g) {
  GroupoidSpec spec;
  spec.outcomes = g.outcome_ids();
  spec.elements = g.element_ids();
  for (Index a = 0; a < g.size(); ++a) {
    const auto& id = g.element_id(a);
    spec.source[id] = g.outcome_id(g.source(a));
    spec.target[id] = g.outcome_id(g.target(a));
    spec.inverse[id] = g.element_id(g.inverse(a));
    for (Index b = 0; b < g.size(); ++b) {
      const Index r = g.compose(b, a);
      if (r != npos) spec.compose.push_back({g.element_id(b), id, g.element_id(r)});
    }
    if (!g.counting_measure()) spec.fiber_weight[id] = g.fiber_weight(a);
  }
  for (Index x = 0; x < g.num_outcomes(); ++x) {
    spec.units[g.outcome_id(x)] = g.element_id(g.unit_of(x));
    spec.P[g.outcome_id(x)] = g.P(x);
  }
  return spec;
}

GroupoidPtr pair_groupoid(std::size_t n, std::vector<double> P) {
  return construct_standard({StandardKind::Tag::Pair, n, {}}, std::move(P));
}

GroupoidPtr trivial_groupoid(std::size_t n, std::vector<double> P) {
  return construct_standard({StandardKind::Tag::Trivial, n, {}}, std::move(P));
}

GroupoidPtr group_groupoid(const std::vector<std::vector<std::size_t>>& table) {
  return construct_standard({StandardKind::Tag::Group, table.size(), table});
}

GroupoidPtr cyclic_group(std::size_t n) {
  std::vector<std::vector<std::size_t>> table(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) table[i][j] = (i + j) % n;
  }
  return group_groupoid(table);
}

GroupoidPtr construct_standard(const StandardKind& kind, std::vector<double> P) {
  GroupoidSpec spec;
  switch (kind.tag) {
    case StandardKind::Tag::Pair: {
      const std::size_t n = kind.n;
      if (n == 0) throw Error(ErrorKind::Schema, "pair(n) needs n >= 1");
      for (std::size_t x = 0; x < n; ++x) spec.outcomes.push_back(std::to_string(x + 1));
      for (std::size_t y = 0; y < n; ++y) {
        for (std::size_t x = 0; x < n; ++x) {
          const auto id = pair_id(y, x);
          spec.elements.push_back(id);
          spec.source[id] = spec.outcomes[x];
          spec.target[id] = spec.outcomes[y];
          spec.inverse[id] = pair_id(x, y);
          for (std::size_t z = 0; z < n; ++z) spec.compose.push_back({pair_id(z, y), id, pair_id(z, x)});
        }
      }
      for (std::size_t x = 0; x < n; ++x) spec.units[spec.outcomes[x]] = pair_id(x, x);
      break;
    }
    case StandardKind::Tag::Trivial: {
      const std::size_t n = kind.n;
      if (n == 0) throw Error(ErrorKind::Schema, "trivial(n) needs n >= 1");
      for (std::size_t x = 0; x < n; ++x) {
        const auto o = std::to_string(x + 1);
        const auto id = "1_" + o;
        spec.outcomes.push_back(o);
        spec.elements.push_back(id);
        spec.source[id] = spec.target[id] = o;
        spec.inverse[id] = id;
        spec.units[o] = id;
        spec.compose.push_back({id, id, id});
      }
      break;
    }
    case StandardKind::Tag::Group: {
      const auto& table = kind.table;
      const std::size_t n = table.size();
      if (n == 0) throw Error(ErrorKind::NotAGroup, "empty multiplication table");
      for (const auto& row : table) {
        if (row.size() != n) throw Error(ErrorKind::NotAGroup, "multiplication table is not square");
        for (std::size_t v : row) {
          if (v >= n) throw Error(ErrorKind::NotAGroup, "table entry out of range");
        }
      }
      std::optional<std::size_t> e;
      for (std::size_t c = 0; c < n && !e; ++c) {
        bool ok = true;
        for (std::size_t g = 0; g < n && ok; ++g) ok = table[c][g] == g && table[g][c] == g;
        if (ok) e = c;
      }
      if (!e) throw Error(ErrorKind::NotAGroup, "no identity element");
      std::vector<std::size_t> inv(n, n);
      for (std::size_t g = 0; g < n; ++g) {
        for (std::size_t h = 0; h < n; ++h) {
          if (table[g][h] == *e && table[h][g] == *e) inv[g] = h;
        }
        if (inv[g] == n) throw Error(ErrorKind::NotAGroup, "element g" + std::to_string(g) + " has no inverse");
      }
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
          for (std::size_t c = 0; c < n; ++c) {
            if (table[table[a][b]][c] != table[a][table[b][c]]) throw Error(ErrorKind::NotAGroup, "table is not associative");
          }
        }
      }
      if (!P.empty() && P.size() != 1) throw Error(ErrorKind::BadMeasure, "a group has one outcome");
      spec.outcomes = {"*"};
      for (std::size_t g = 0; g < n; ++g) {
        const auto id = "g" + std::to_string(g);
        spec.elements.push_back(id);
        spec.source[id] = spec.target[id] = "*";
        spec.inverse[id] = "g" + std::to_string(inv[g]);
        for (std::size_t h = 0; h < n; ++h) {
          // compose(beta, alpha) = beta∘alpha, read as the group product beta*alpha.
          spec.compose.push_back({id, "g" + std::to_string(h), "g" + std::to_string(table[g][h])});
        }
      }
      spec.units["*"] = "g" + std::to_string(*e);
      break;
    }
  }
  if (P.empty()) P = uniform(spec.outcomes.size());
  if (P.size() != spec.outcomes.size()) {
    throw Error(ErrorKind::BadMeasure, "P has " + std::to_string(P.size()) + " entries for " +
                                           std::to_string(spec.outcomes.size()) + " outcomes");
  }
  spec.P = keyed(spec.outcomes, P);
  return validate(spec);
}

GroupoidPtr disjoint_union(const FiniteGroupoid& g1, const FiniteGroupoid& g2, double w) {
  if (!(w > 0.0 && w < 1.0)) throw Error(ErrorKind::BadWeight, "mixing weight must lie in (0,1), got " + std::to_string(w));
  GroupoidSpec out;
  const bool counting = g1.counting_measure() && g2.counting_measure();
  auto absorb = [&](const FiniteGroupoid& g, const std::string& tag, double mix) {
    const GroupoidSpec s = to_spec(g);
    auto re = [&](const std::string& id) { return tag + id; };
    for (const auto& o : s.outcomes) out.outcomes.push_back(re(o));
    for (const auto& e : s.elements) out.elements.push_back(re(e));
    for (const auto& [k, v] : s.source) out.source[re(k)] = re(v);
    for (const auto& [k, v] : s.target) out.target[re(k)] = re(v);
    for (const auto& [k, v] : s.inverse) out.inverse[re(k)] = re(v);
    for (const auto& [k, v] : s.units) out.units[re(k)] = re(v);
    for (const auto& [b, a, r] : s.compose) out.compose.push_back({re(b), re(a), re(r)});
    for (const auto& [k, v] : s.P) out.P[re(k)] = mix * v;
    if (!counting) {
      for (std::size_t a = 0; a < g.size(); ++a) out.fiber_weight[re(g.element_id(a))] = g.fiber_weight(a);
    }
  };
  absorb(g1, "1:", w);
  absorb(g2, "2:", 1.0 - w);
  return validate(out);
}

GroupoidPtr product(const FiniteGroupoid& g1, const FiniteGroupoid& g2) {
  GroupoidSpec out;
  const std::size_t n2 = g2.size();
  const std::size_t m2 = g2.num_outcomes();
  auto eid = [&](Index a, Index b) { return g1.element_id(a) + "&" + g2.element_id(b); };
  auto oid = [&](Index x, Index y) { return g1.outcome_id(x) + "&" + g2.outcome_id(y); };
  for (Index x = 0; x < g1.num_outcomes(); ++x) {
    for (Index y = 0; y < m2; ++y) {
      out.outcomes.push_back(oid(x, y));
      out.units[oid(x, y)] = eid(g1.unit_of(x), g2.unit_of(y));
      out.P[oid(x, y)] = g1.P(x) * g2.P(y);
    }
  }
  const bool counting = g1.counting_measure() && g2.counting_measure();
  for (Index a = 0; a < g1.size(); ++a) {
    for (Index b = 0; b < n2; ++b) {
      const auto id = eid(a, b);
      out.elements.push_back(id);
      out.source[id] = oid(g1.source(a), g2.source(b));
      out.target[id] = oid(g1.target(a), g2.target(b));
      out.inverse[id] = eid(g1.inverse(a), g2.inverse(b));
      if (!counting) out.fiber_weight[id] = g1.fiber_weight(a) * g2.fiber_weight(b);
    }
  }
  for (Index a1 = 0; a1 < g1.size(); ++a1) {
    for (Index c1 = 0; c1 < g1.size(); ++c1) {
      const Index r1 = g1.compose(c1, a1);
      if (r1 == npos) continue;
      for (Index a2 = 0; a2 < n2; ++a2) {
        for (Index c2 = 0; c2 < n2; ++c2) {
          const Index r2 = g2.compose(c2, a2);
          if (r2 == npos) continue;
          out.compose.push_back({eid(c1, c2), eid(a1, a2), eid(r1, r2)});
        }
      }
    }
  }
  return validate(out);
}

std::vector<double> modular_function(const FiniteGroupoid& g) {
  std::vector<double> delta(g.size());
  for (Index a = 0; a < g.size(); ++a) delta[a] = g.nu(g.inverse(a)) / g.nu(a);
  for (Index x = 0; x < g.num_outcomes(); ++x) {
    if (!close_rel(delta[g.unit_of(x)], 1.0)) {
      throw Error(ErrorKind::HomomorphismViolation, "delta(1_" + g.outcome_id(x) + ") != 1");
    }
  }
  for (Index a = 0; a < g.size(); ++a) {
    for (Index b = 0; b < g.size(); ++b) {
      const Index ba = g.compose(b, a);
      if (ba == npos) continue;
      if (!close_rel(delta[ba], delta[b] * delta[a])) {
        throw Error(ErrorKind::HomomorphismViolation,
                    "delta(" + g.element_id(b) + " o " + g.element_id(a) + ") != delta * delta");
      }
    }
  }
  return delta;
}

std::vector<Index> target_fiber(const FiniteGroupoid& g, const std::string& outcome) {
  const auto x = g.find_outcome(outcome);
  if (!x) throw Error(ErrorKind::UnknownOutcome, "'" + outcome + "'");
  const auto f = g.fiber(*x);
  return {f.begin(), f.end()};
}

bool same_groupoid(const FiniteGroupoid& a, const FiniteGroupoid& b) {
  if (&a == &b) return true;
  if (a.element_ids() != b.element_ids() || a.outcome_ids() != b.outcome_ids()) return false;
  for (Index i = 0; i < a.size(); ++i) {
    if (a.source(i) != b.source(i) || a.target(i) != b.target(i) || a.inverse(i) != b.inverse(i)) return false;
    if (!close_rel(a.nu(i), b.nu(i))) return false;
    for (Index j = 0; j < a.size(); ++j) {
      if (a.compose(i, j) != b.compose(i, j)) return false;
    }
  }
  return true;
}

void require_same_groupoid(const FiniteGroupoid& a, const FiniteGroupoid& b, const char* where) {
  if (!same_groupoid(a, b)) throw Error(ErrorKind::GroupoidMismatch, where);
}

}  // namespace cencov
