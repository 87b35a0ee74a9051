#include "eof/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace eof {

double hermiticity_error(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_error(const Matrix& u) {
  return (u * u.adjoint() - Matrix::Identity(u.rows(), u.rows())).norm();
}

Complex trace_of_product(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols())
    throw std::invalid_argument("trace_of_product: incompatible shapes");
  // Tr(ab) = sum_ik a_ik b_ki
  return a.cwiseProduct(b.transpose()).sum();
}

namespace {

// Strict-weak order: descending eigenvalue, exact ties broken by lexicographic
// comparison of the phase-fixed eigenvector columns.
bool spectral_less(const RealVector& values, const Matrix& vectors,
                   Eigen::Index a, Eigen::Index b) {
  if (values[a] != values[b]) return values[a] > values[b];
  for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
    const Complex ca = vectors(i, a);
    const Complex cb = vectors(i, b);
    if (ca.real() != cb.real()) return ca.real() < cb.real();
    if (ca.imag() != cb.imag()) return ca.imag() < cb.imag();
  }
  return false;
}

}  // namespace

EigenSystem hermitian_eig(const Matrix& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("hermitian_eig: matrix must be square");
  const double herr = hermiticity_error(m);
  if (herr > hermitian_tol) {
    std::ostringstream oss;
    oss << "hermitian_eig: input not Hermitian, max |M - M^dag| = " << herr;
    throw std::invalid_argument(oss.str());
  }

  const Eigen::Index n = m.rows();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(((m + m.adjoint()) * 0.5).eval());
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_eig: eigendecomposition did not converge");

  RealVector values = solver.eigenvalues();
  Matrix vectors = solver.eigenvectors();

  // Phase fix: rotate each column so its largest-modulus entry is real positive.
  // The first index within a 1e-12 relative band wins, so the choice is stable.
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index imax = 0;
    double amax = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = std::abs(vectors(i, k));
      if (a > amax * (1.0 + 1e-12)) {
        amax = a;
        imax = i;
      }
    }
    if (amax > 0.0) vectors.col(k) *= std::conj(vectors(imax, k)) / amax;
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return spectral_less(values, vectors, a, b);
  });

  EigenSystem out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues[k] = values[order[static_cast<std::size_t>(k)]];
    out.eigenvectors.col(k) = vectors.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

Matrix unitary_from_generator(const Matrix& h) {
  const EigenSystem es = hermitian_eig(h);
  const Eigen::Index n = h.rows();
  Vector phases(n);
  for (Eigen::Index k = 0; k < n; ++k)
    phases[k] = std::exp(Complex(0.0, es.eigenvalues[k]));
  return es.eigenvectors * phases.asDiagonal() * es.eigenvectors.adjoint();
}

Matrix support_log2(const Matrix& rho, double floor) {
  const EigenSystem es = hermitian_eig(rho);
  const Eigen::Index n = rho.rows();
  if (n > 0 && es.eigenvalues[n - 1] < -psd_tol) {
    std::ostringstream oss;
    oss << "support_log2: matrix not PSD, min eigenvalue = " << es.eigenvalues[n - 1];
    throw std::invalid_argument(oss.str());
  }

  Vector logs = Vector::Zero(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lambda = std::max(es.eigenvalues[k], 0.0);
    if (lambda > floor) logs[k] = std::log2(lambda);
  }
  Matrix out = es.eigenvectors * logs.asDiagonal() * es.eigenvectors.adjoint();
  return ((out + out.adjoint()) * 0.5).eval();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix partial_trace(const Matrix& m, const BipartiteDims& dims, Subsystem keep) {
  const int da = dims.dim_a;
  const int db = dims.dim_b;
  if (m.rows() != m.cols() || m.rows() != dims.total())
    throw std::invalid_argument("partial_trace: matrix side must equal dim_a*dim_b");

  if (keep == Subsystem::A) {
    Matrix out = Matrix::Zero(da, da);
    for (int a = 0; a < da; ++a)
      for (int ap = 0; ap < da; ++ap)
        for (int b = 0; b < db; ++b)
          out(a, ap) += m(a * db + b, ap * db + b);
    return out;
  }
  Matrix out = Matrix::Zero(db, db);
  for (int b = 0; b < db; ++b)
    for (int bp = 0; bp < db; ++bp)
      for (int a = 0; a < da; ++a)
        out(b, bp) += m(a * db + b, a * db + bp);
  return out;
}

Matrix reshape_ab(const Eigen::Ref<const Vector>& psi, const BipartiteDims& dims) {
  if (psi.size() != dims.total())
    throw std::invalid_argument("reshape_ab: vector length must equal dim_a*dim_b");
  using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return Eigen::Map<const RowMat>(psi.data(), dims.dim_a, dims.dim_b);
}

Matrix partial_trace_b_outer(const Eigen::Ref<const Vector>& x,
                             const Eigen::Ref<const Vector>& y,
                             const BipartiteDims& dims) {
  return reshape_ab(x, dims) * reshape_ab(y, dims).adjoint();
}

}  // namespace eof
