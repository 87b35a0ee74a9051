// Shared scalar/matrix aliases, tolerance constants, and bipartite dimensions.
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>

#include <Eigen/Dense>

namespace eof {

using Complex    = std::complex<double>;
using Matrix     = Eigen::MatrixXcd;
using Vector     = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Tolerances shared across modules. Validation thresholds, not target precisions.
inline constexpr double hermitian_tol = 1e-10;  // max |M - M^dag| accepted as Hermitian
inline constexpr double unitary_tol   = 1e-10;  // ||U U^dag - I||_F accepted as unitary
inline constexpr double psd_tol       = 1e-10;  // eigenvalue slack below zero for PSD inputs
inline constexpr double trace_tol     = 1e-10;  // |Tr(rho) - 1| accepted for density matrices

// Eigenvalues at or below this floor contribute nothing to a support-restricted log.
inline constexpr double support_floor_default = 1e-14;

// A state with weight <psi|psi> at or below this is padding; its entanglement
// contribution and its gradient rows/columns are defined to be zero.
inline constexpr double zero_state_tol = 1e-14;

// Subsystem dimensions. Composite index is A-major: idx = a*dim_b + b.
struct BipartiteDims {
  int dim_a;
  int dim_b;

  BipartiteDims(int da, int db) : dim_a(da), dim_b(db) {
    if (da < 2 || db < 2)
      throw std::invalid_argument("BipartiteDims: both subsystem dimensions must be >= 2");
  }

  int total() const { return dim_a * dim_b; }
  bool operator==(const BipartiteDims&) const = default;
};

}  // namespace eof
