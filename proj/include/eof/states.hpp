// Density matrices, pure-state decompositions, entanglement of pure states,
// average entanglement, and seeded random-state generation.
#pragma once

#include <vector>

#include "eof/numerics.hpp"

namespace eof {

// Raised when an operation needs a state with weight above zero_state_tol.
struct ZeroWeightError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Hermitian, positive-semidefinite, unit-trace matrix on the A (x) B space.
// Construction validates all three properties.
class DensityMatrix {
 public:
  DensityMatrix(BipartiteDims dims, Matrix matrix);

  const BipartiteDims& dims() const { return dims_; }
  const Matrix& matrix() const { return matrix_; }

 private:
  BipartiteDims dims_;
  Matrix matrix_;
};

// Ordered set of n subnormalized vectors |psi_i> whose outer products sum to a
// density matrix. Stored as the columns of an (dA*dB) x n matrix. Weights
// p_i = <psi_i|psi_i> must sum to one; zero columns are padding states.
class Decomposition {
 public:
  Decomposition(BipartiteDims dims, Matrix states);
  Decomposition(BipartiteDims dims, const std::vector<Vector>& states);

  const BipartiteDims& dims() const { return dims_; }
  int size() const { return static_cast<int>(states_.cols()); }

  // Columns are the subnormalized states.
  const Matrix& states() const { return states_; }
  Eigen::Ref<const Vector> state(int i) const { return states_.col(i); }

  double weight(int i) const { return states_.col(i).squaredNorm(); }
  RealVector weights() const { return states_.colwise().squaredNorm().real().transpose(); }

  Matrix reconstruct() const { return states_ * states_.adjoint(); }

 private:
  BipartiteDims dims_;
  Matrix states_;
};

// ||sum_i |psi_i><psi_i| - rho||_F
double reconstruction_error(const Decomposition& dec, const DensityMatrix& rho);

// Decomposition from the spectral data of rho: state i is sqrt(lambda_i) times
// eigenvector i, eigenvalues descending. n_states = 0 picks the numerical rank
// (eigenvalues above 1e-12 * lambda_max); larger values pad with zero states;
// smaller values cannot reconstruct rho and are rejected.
Decomposition eigenstate_decomposition(const DensityMatrix& rho, int n_states = 0);

// Entropy of entanglement of a subnormalized pure state, in ebits. Throws
// ZeroWeightError when <psi|psi> <= zero_state_tol.
double pure_state_entanglement(const Eigen::Ref<const Vector>& psi, const BipartiteDims& dims);

// sum_i p_i E_i with padding states contributing zero. The OpenMP variant
// computes per-state terms in parallel and sums them in index order, so the
// result does not depend on the thread count.
double average_entanglement(const Decomposition& dec);
double average_entanglement_serial(const Decomposition& dec);

// |psi_i'> = sum_j U_ij |psi_j>. Rejects non-unitary U; preserves the
// reconstructed density matrix.
Decomposition apply_unitary(const Decomposition& dec, const Matrix& u);

// rho = G G^dag / Tr(G G^dag) with G an (dA*dB) x rank standard complex
// Gaussian matrix drawn from mt19937_64(seed).
DensityMatrix random_density_matrix(const BipartiteDims& dims, int rank, std::uint64_t seed);

}  // namespace eof
