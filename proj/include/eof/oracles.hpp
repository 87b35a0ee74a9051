#pragma once

#include "eof/states.hpp"
#include "eof/types.hpp"

namespace eof {

// h(x) = -x log2 x - (1-x) log2(1-x), with h(0) = h(1) = 0.
double binary_entropy(double x);

// Closed-form two-qubit entanglement of formation. The spin flip
// rho~ = (sy (x) sy) rho* (sy (x) sy) conjugates in the standard product
// basis; lambda_1 >= ... >= lambda_4 are the square roots of the eigenvalues
// of rho rho~, the concurrence is C = max(0, l1 - l2 - l3 - l4), and
// E = h((1 + sqrt(1 - C^2))/2).
double wootters_eof(const DensityMatrix& rho);

// Mixture of |Psi+><Psi+| (weight picked so <Psi+|rho|Psi+> = F) with the
// orthogonal remainder spread uniformly.
DensityMatrix isotropic_state(int d, double fidelity);

// Closed-form E_F of the isotropic state: zero up to the separability
// threshold F = 1/d, a binary-entropy branch on (1/d, 4(d-1)/d^2], and a
// linear branch above (nonempty only for d >= 3).
double isotropic_eof(int d, double fidelity);

// Fidelity parametrization bundled with its state and closed-form value.
struct IsotropicState {
  int d;
  double fidelity;

  IsotropicState(int d, double fidelity);
  DensityMatrix state() const { return isotropic_state(d, fidelity); }
  double eof() const { return isotropic_eof(d, fidelity); }
};

}  // namespace eof
