#include "eof/states.hpp"

#include <cmath>
#include <sstream>

#include "eof/rng.hpp"

namespace eof {

DensityMatrix::DensityMatrix(BipartiteDims dims, Matrix matrix)
    : dims_(dims), matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() != dims_.total())
    throw std::invalid_argument("DensityMatrix: matrix side must equal dim_a*dim_b");
  if (!matrix_.allFinite())
    throw std::invalid_argument("DensityMatrix: entries must be finite");
  const double herr = hermiticity_error(matrix_);
  if (herr > hermitian_tol) {
    std::ostringstream oss;
    oss << "DensityMatrix: not Hermitian, max |M - M^dag| = " << herr;
    throw std::invalid_argument(oss.str());
  }
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > trace_tol || std::abs(matrix_.trace().imag()) > trace_tol) {
    std::ostringstream oss;
    oss << "DensityMatrix: trace = " << matrix_.trace() << ", expected 1";
    throw std::invalid_argument(oss.str());
  }
  const EigenSystem es = hermitian_eig(matrix_);
  const double min_eig = es.eigenvalues[es.eigenvalues.size() - 1];
  if (min_eig < -psd_tol) {
    std::ostringstream oss;
    oss << "DensityMatrix: not PSD, min eigenvalue = " << min_eig;
    throw std::invalid_argument(oss.str());
  }
}

Decomposition::Decomposition(BipartiteDims dims, Matrix states)
    : dims_(dims), states_(std::move(states)) {
  if (states_.cols() < 1)
    throw std::invalid_argument("Decomposition: needs at least one state");
  if (states_.rows() != dims_.total())
    throw std::invalid_argument("Decomposition: state length must equal dim_a*dim_b");
  if (!states_.allFinite())
    throw std::invalid_argument("Decomposition: entries must be finite");
  const double total_weight = states_.squaredNorm();
  if (std::abs(total_weight - 1.0) > trace_tol) {
    std::ostringstream oss;
    oss << "Decomposition: weights sum to " << total_weight << ", expected 1";
    throw std::invalid_argument(oss.str());
  }
}

Decomposition::Decomposition(BipartiteDims dims, const std::vector<Vector>& states)
    : Decomposition(dims, [&] {
        Matrix m(dims.total(), static_cast<Eigen::Index>(states.size()));
        for (std::size_t i = 0; i < states.size(); ++i) {
          if (states[i].size() != dims.total())
            throw std::invalid_argument("Decomposition: state length must equal dim_a*dim_b");
          m.col(static_cast<Eigen::Index>(i)) = states[i];
        }
        return m;
      }()) {}

double reconstruction_error(const Decomposition& dec, const DensityMatrix& rho) {
  return (dec.reconstruct() - rho.matrix()).norm();
}

Decomposition eigenstate_decomposition(const DensityMatrix& rho, int n_states) {
  const EigenSystem es = hermitian_eig(rho.matrix());
  const Eigen::Index n = es.eigenvalues.size();
  const double lambda_max = std::max(es.eigenvalues[0], 0.0);
  const double tol_rank = 1e-12 * lambda_max;

  int rank = 0;
  for (Eigen::Index k = 0; k < n; ++k)
    if (es.eigenvalues[k] > tol_rank) ++rank;
  if (rank == 0)
    throw std::invalid_argument("eigenstate_decomposition: matrix has zero numerical rank");

  if (n_states == 0) n_states = rank;
  if (n_states < rank) {
    std::ostringstream oss;
    oss << "eigenstate_decomposition: " << n_states << " states cannot reconstruct a rank-"
        << rank << " density matrix";
    throw std::invalid_argument(oss.str());
  }

  Matrix states = Matrix::Zero(rho.dims().total(), n_states);
  for (int k = 0; k < rank; ++k)
    states.col(k) = std::sqrt(std::max(es.eigenvalues[k], 0.0)) * es.eigenvectors.col(k);
  return Decomposition(rho.dims(), std::move(states));
}

double pure_state_entanglement(const Eigen::Ref<const Vector>& psi, const BipartiteDims& dims) {
  const double p = psi.squaredNorm();
  if (p <= zero_state_tol)
    throw ZeroWeightError("pure_state_entanglement: zero-weight state");

  const Matrix x = reshape_ab(psi, dims);
  const Matrix rho_a = (x * x.adjoint()) / p;
  const EigenSystem es = hermitian_eig(rho_a);

  double entropy = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues.size(); ++k) {
    const double lambda = es.eigenvalues[k];
    if (lambda > support_floor_default) entropy -= lambda * std::log2(lambda);
  }
  return std::max(entropy, 0.0);
}

namespace {

double weighted_entanglement_term(const Decomposition& dec, int i) {
  const double p = dec.weight(i);
  if (p <= zero_state_tol) return 0.0;
  return p * pure_state_entanglement(dec.state(i), dec.dims());
}

}  // namespace

double average_entanglement(const Decomposition& dec) {
  const int n = dec.size();
  std::vector<double> terms(static_cast<std::size_t>(n), 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    terms[static_cast<std::size_t>(i)] = weighted_entanglement_term(dec, i);

  double total = 0.0;
  for (int i = 0; i < n; ++i) total += terms[static_cast<std::size_t>(i)];
  return total;
}

double average_entanglement_serial(const Decomposition& dec) {
  const int n = dec.size();
  std::vector<double> terms(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i)
    terms[static_cast<std::size_t>(i)] = weighted_entanglement_term(dec, i);

  double total = 0.0;
  for (int i = 0; i < n; ++i) total += terms[static_cast<std::size_t>(i)];
  return total;
}

Decomposition apply_unitary(const Decomposition& dec, const Matrix& u) {
  const int n = dec.size();
  if (u.rows() != n || u.cols() != n)
    throw std::invalid_argument("apply_unitary: U must be n x n for an n-state decomposition");
  const double uerr = unitarity_error(u);
  if (uerr > unitary_tol) {
    std::ostringstream oss;
    oss << "apply_unitary: U not unitary, ||U U^dag - I||_F = " << uerr;
    throw std::invalid_argument(oss.str());
  }
  // |psi_i'> = sum_j U_ij |psi_j>, i.e. S' = S U^T on the column stack.
  return Decomposition(dec.dims(), dec.states() * u.transpose());
}

DensityMatrix random_density_matrix(const BipartiteDims& dims, int rank, std::uint64_t seed) {
  const int total = dims.total();
  if (rank < 1 || rank > total)
    throw std::invalid_argument("random_density_matrix: rank must be in [1, dim_a*dim_b]");

  std::mt19937_64 rng(seed);
  const Matrix g = random_gaussian_matrix(total, rank, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = ((rho + rho.adjoint()) * 0.5).eval();
  return DensityMatrix(dims, std::move(rho));
}

}  // namespace eof
