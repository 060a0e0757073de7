#pragma once

// GNS space of a state on a finite groupoid algebra, spanned by the classes
// of the basis elements delta_alpha.

#include <vector>

#include "cencov/algebra.hpp"
#include "cencov/numkit.hpp"
#include "cencov/states.hpp"

namespace cencov {

struct GnsSpace {
  GroupoidPtr groupoid;
  State base;
  ComplexMatrix gram;               // gram[a,b] = rho(star(delta_a) * delta_b)
  std::vector<double> spectrum;     // gram eigenvalues, ascending
  std::vector<CVector> ideal_basis; // orthonormal (Euclidean) null vectors of gram
  ComplexMatrix quotient;           // |Γ| x dim, columns orthonormal for the gram form
  double rank_tol = 1e-9;

  std::size_t dim() const noexcept { return quotient.cols(); }
  double lambda_max() const noexcept { return spectrum.empty() ? 0.0 : spectrum.back(); }
};

/// DegenerateState when gram is numerically zero.
GnsSpace build_gns(const State& rho, double rank_tol = 1e-9);

/// Gram matrix of rho on the basis {delta_alpha} (parallel over rows).
ComplexMatrix gns_gram(const State& rho);

/// Matrix of left multiplication by a on the quotient basis.
ComplexMatrix gns_represent(const GnsSpace& s, const AlgebraElement& a);

/// u† gram v for coordinate vectors over the spanning set.
cplx gns_inner(const GnsSpace& s, std::span<const cplx> u, std::span<const cplx> v);

/// Quotient-basis coordinates of the class of b (b given over the spanning set).
CVector gns_class(const GnsSpace& s, std::span<const cplx> b);

/// Class of the algebra unit.
CVector cyclic_vector(const GnsSpace& s);

}  // namespace cencov
