// Dense complex-matrix kernels: Hermitian eigendecomposition, unitary
// exponential of a Hermitian generator, support-restricted base-2 logarithm,
// and partial traces over one subsystem.
//
// All matrix functions go through the Hermitian eigendecomposition rather than
// series or Pade approximants: inputs here are always Hermitian, and the
// spectral route keeps exponentials exactly unitary and logs exactly Hermitian
// up to roundoff.
#pragma once

#include "eof/types.hpp"

namespace eof {

// Spectral data of a Hermitian matrix. Eigenvalues are real and sorted
// descending; column k of `eigenvectors` belongs to eigenvalues[k]. Each
// eigenvector's phase is fixed (largest-modulus entry real positive) and exact
// eigenvalue ties are ordered by lexicographic comparison of the phase-fixed
// columns, so repeated runs produce identical output.
struct EigenSystem {
  RealVector eigenvalues;
  Matrix eigenvectors;
};

double hermiticity_error(const Matrix& m);  // max_ij |m_ij - conj(m_ji)|
double unitarity_error(const Matrix& u);    // ||U U^dag - I||_F
Complex trace_of_product(const Matrix& a, const Matrix& b);  // Tr(a b) without forming a*b

// Rejects inputs with hermiticity_error above hermitian_tol.
EigenSystem hermitian_eig(const Matrix& m);

// U = exp(i h) for Hermitian h.
Matrix unitary_from_generator(const Matrix& h);

// log2 restricted to the support: eigenvalues above `floor` map to their log2,
// the rest contribute zero. Input must be PSD up to psd_tol; small negative
// eigenvalues are clamped to zero.
Matrix support_log2(const Matrix& rho, double floor = support_floor_default);

// Kronecker product with A-major composite indexing:
// out(a*rb + b, a'*cb + b') = a(a, a') * b(b, b').
Matrix kron(const Matrix& a, const Matrix& b);

enum class Subsystem { A, B };

// Trace over the discarded subsystem of a matrix on the A (x) B space.
Matrix partial_trace(const Matrix& m, const BipartiteDims& dims, Subsystem keep);

// View of a composite-space vector as its dA x dB coefficient matrix,
// X(a, b) = psi[a*dB + b].
Matrix reshape_ab(const Eigen::Ref<const Vector>& psi, const BipartiteDims& dims);

// Tr_B |x><y| computed as X_x X_y^dag, without forming the outer product.
Matrix partial_trace_b_outer(const Eigen::Ref<const Vector>& x,
                             const Eigen::Ref<const Vector>& y,
                             const BipartiteDims& dims);

}  // namespace eof
