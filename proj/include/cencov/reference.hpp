#pragma once

// Serial, literal implementations of the parallel kernels. Used as oracles
// in the tests and as the baseline in bench_kernels.

#include "cencov/algebra.hpp"
#include "cencov/channels.hpp"
#include "cencov/numkit.hpp"
#include "cencov/states.hpp"

namespace cencov::reference {

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

/// Sum over all composable pairs (beta, alpha) of a(beta) b(alpha) delta_{beta∘alpha}.
AlgebraElement convolve(const AlgebraElement& a, const AlgebraElement& b);

/// Column gamma is the image of delta_gamma: sum over alpha of
/// a(alpha) delta(alpha)^(-1/2) placed at alpha∘gamma.
ComplexMatrix left_regular_rep(const AlgebraElement& a);

/// Triple loop over (a1, a2, a3).
QuantumKernel compose(const QuantumKernel& k12, const QuantumKernel& k23);

/// gram[a,b] = expectation(rho, star(delta_a) * delta_b) through convolve.
ComplexMatrix gns_gram(const State& rho);

}  // namespace cencov::reference
