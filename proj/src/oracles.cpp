#include "eof/oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "eof/channels.hpp"
#include "eof/numerics.hpp"

namespace eof {

namespace {

void check_fidelity(int d, double fidelity) {
  if (d < 2) throw std::invalid_argument("isotropic state: dimension must be >= 2");
  if (!(fidelity >= 0.0 && fidelity <= 1.0)) {
    std::ostringstream oss;
    oss << "isotropic state: fidelity " << fidelity << " outside [0, 1]";
    throw std::invalid_argument(oss.str());
  }
}

}  // namespace

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument("binary_entropy: argument outside [0, 1]");
  double h = 0.0;
  if (x > 0.0) h -= x * std::log2(x);
  if (x < 1.0) h -= (1.0 - x) * std::log2(1.0 - x);
  return h;
}

double wootters_eof(const DensityMatrix& rho) {
  const BipartiteDims& dims = rho.dims();
  if (dims.dim_a != 2 || dims.dim_b != 2)
    throw std::invalid_argument("wootters_eof: needs a two-qubit state");

  // sigma_y (x) sigma_y is real in the standard product basis
  Matrix yy = Matrix::Zero(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;

  const Matrix flipped = yy * rho.matrix().conjugate() * yy;
  const Matrix product = rho.matrix() * flipped;

  // rho rho~ is similar to a PSD matrix: eigenvalues real and >= 0 up to
  // roundoff, recovered through a general complex eigensolver.
  Eigen::ComplexEigenSolver<Matrix> solver(product, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("wootters_eof: eigendecomposition did not converge");

  // Zero eigenvalues of the product (any rank-deficient rho) come back as
  // O(1e-16) noise, and the square root amplifies that to O(1e-8); snapping
  // values below 1e-13 to zero keeps local-unitary invariance and the
  // pure-state limit tight. Genuine eigenvalues of two-qubit states are
  // either exactly zero or far above this floor.
  constexpr double lambda_floor = 1e-13;
  std::array<double, 4> lambdas{};
  for (int k = 0; k < 4; ++k) {
    const double ev = solver.eigenvalues()[k].real();
    lambdas[static_cast<std::size_t>(k)] = ev <= lambda_floor ? 0.0 : std::sqrt(ev);
  }
  std::sort(lambdas.begin(), lambdas.end(), std::greater<double>());

  const double c = std::max(0.0, lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]);
  return binary_entropy(0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))));
}

DensityMatrix isotropic_state(int d, double fidelity) {
  check_fidelity(d, fidelity);
  const Vector psi = psi_plus(d);
  const Matrix proj = psi * psi.adjoint();
  const int total = d * d;
  const double off = (1.0 - fidelity) / (total - 1);
  Matrix rho = off * (Matrix::Identity(total, total) - proj) + fidelity * proj;
  rho = ((rho + rho.adjoint()) * 0.5).eval();
  return DensityMatrix(BipartiteDims(d, d), std::move(rho));
}

double isotropic_eof(int d, double fidelity) {
  check_fidelity(d, fidelity);
  const double dd = static_cast<double>(d);
  if (fidelity <= 1.0 / dd) return 0.0;

  if (fidelity <= 4.0 * (dd - 1.0) / (dd * dd)) {
    const double root = std::sqrt(fidelity) + std::sqrt((dd - 1.0) * (1.0 - fidelity));
    const double gamma = std::min(1.0, root * root / dd);  // hits 1 at F = 1/d
    return binary_entropy(gamma) + (1.0 - gamma) * std::log2(dd - 1.0);
  }
  // linear branch, reachable only for d >= 3
  return dd * std::log2(dd - 1.0) / (dd - 2.0) * (fidelity - 1.0) + std::log2(dd);
}

IsotropicState::IsotropicState(int d_in, double fidelity_in) : d(d_in), fidelity(fidelity_in) {
  check_fidelity(d, fidelity);
}

}  // namespace eof
