#pragma once

// The convolution *-algebra C[Γ] of a finite groupoid and its left regular
// and fundamental (pair groupoid) representations.

#include "cencov/groupoid.hpp"
#include "cencov/numkit.hpp"

namespace cencov {

/// Finite formal combination sum_alpha coeff[alpha] * alpha.
struct AlgebraElement {
  GroupoidPtr groupoid;
  CVector coeff;  // indexed by element, zero allowed

  static AlgebraElement zero(GroupoidPtr g);
  /// The basis element delta_alpha.
  static AlgebraElement basis(GroupoidPtr g, FiniteGroupoid::Index alpha, cplx value = 1.0);
  /// sum_x delta_{1_x}; represented by the identity matrix.
  static AlgebraElement unit(GroupoidPtr g);

  AlgebraElement& operator+=(const AlgebraElement& o);
  AlgebraElement& operator-=(const AlgebraElement& o);
  AlgebraElement& operator*=(cplx s);
  friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
  friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
  friend AlgebraElement operator*(cplx s, AlgebraElement a) { return a *= s; }
};

/// Product pinned by left_regular_rep(a*b) = left_regular_rep(a) * left_regular_rep(b).
/// Because delta is multiplicative this is (a*b)(gamma) = sum_{beta∘alpha=gamma} a(beta) b(alpha).
AlgebraElement convolve(const AlgebraElement& a, const AlgebraElement& b);

/// Involution with left_regular_rep(star(a)) = left_regular_rep(a)†:
/// star(a)(alpha) = conj(a(alpha^-1)) * delta(alpha).
AlgebraElement star(const AlgebraElement& a);

/// |Γ|x|Γ| matrix on l2(Γ) in canonical element order:
/// M[beta, gamma] = a(alpha) * delta(alpha)^(-1/2) with alpha = beta∘gamma^-1
/// when source(beta) == source(gamma), zero otherwise.
ComplexMatrix left_regular_rep(const AlgebraElement& a);

/// Matrix of b -> a*b on coefficient vectors (the regular representation
/// without modular weights).
ComplexMatrix left_multiplication(const AlgebraElement& a);

/// n x n matrix F[y, x] = a(x -> y); requires a pair groupoid with uniform P.
ComplexMatrix fundamental_rep_pair(const AlgebraElement& a);
/// Inverse of fundamental_rep_pair.
AlgebraElement element_from_matrix(GroupoidPtr g, const ComplexMatrix& f);

/// Throws NotPairGroupoid / NonUniformP.
void require_uniform_pair(const FiniteGroupoid& g, const char* where);

}  // namespace cencov
