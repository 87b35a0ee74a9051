#include "eof/gradient.hpp"

#include <cmath>
#include <sstream>
#include <utility>
#include <vector>

#include "eof/numerics.hpp"

namespace eof {

namespace {

// Per-state data entering the pairwise entries: the dA x dB reshape of the
// subnormalized state and the support log2 of its *normalized* reduced state.
struct StateTerms {
  Matrix x;    // reshape_ab(psi_i)
  Matrix log;  // log2 of Tr_B |psi_i><psi_i| / p_i, zero matrix for zero weight
  double weight = 0.0;
};

StateTerms state_terms(const Decomposition& dec, int i) {
  StateTerms t;
  t.weight = dec.weight(i);
  t.x = reshape_ab(dec.state(i), dec.dims());
  if (t.weight <= zero_state_tol) {
    t.log = Matrix::Zero(dec.dims().dim_a, dec.dims().dim_a);
    return t;
  }
  const Matrix rho_a = (t.x * t.x.adjoint()) / t.weight;
  t.log = support_log2(rho_a);
  return t;
}

// g_ab for a < b.  Zero-weight states decouple exactly: their rows and
// columns of g vanish, so the minimizer feels no pull from padding states.
Complex pair_entry(const std::vector<StateTerms>& terms, int a, int b) {
  const StateTerms& ta = terms[static_cast<std::size_t>(a)];
  const StateTerms& tb = terms[static_cast<std::size_t>(b)];
  if (ta.weight <= zero_state_tol || tb.weight <= zero_state_tol)
    return Complex(0.0, 0.0);
  const Matrix overlap = ta.x * tb.x.adjoint();  // Tr_B |psi_a><psi_b|
  const Complex tr = trace_of_product(tb.log - ta.log, overlap);
  return Complex(0.0, -1.0) * tr;
}

std::vector<std::pair<int, int>> upper_pairs(int n) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  return pairs;
}

GradientMatrix assemble(const std::vector<std::pair<int, int>>& pairs,
                        const std::vector<Complex>& entries, int n) {
  GradientMatrix g = GradientMatrix::Zero(n, n);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [a, b] = pairs[k];
    g(a, b) = entries[k];
    g(b, a) = std::conj(entries[k]);
  }
  return g;
}

}  // namespace

GradientMatrix gradient_matrix(const Decomposition& dec) {
  const int n = dec.size();
  std::vector<StateTerms> terms(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) terms[static_cast<std::size_t>(i)] = state_terms(dec, i);

  const auto pairs = upper_pairs(n);
  std::vector<Complex> entries(pairs.size());
  const int n_pairs = static_cast<int>(pairs.size());
#pragma omp parallel for schedule(static)
  for (int k = 0; k < n_pairs; ++k) {
    const auto [a, b] = pairs[static_cast<std::size_t>(k)];
    entries[static_cast<std::size_t>(k)] = pair_entry(terms, a, b);
  }
  return assemble(pairs, entries, n);
}

GradientMatrix gradient_matrix_serial(const Decomposition& dec) {
  const int n = dec.size();
  std::vector<StateTerms> terms(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) terms[static_cast<std::size_t>(i)] = state_terms(dec, i);

  const auto pairs = upper_pairs(n);
  std::vector<Complex> entries(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [a, b] = pairs[k];
    entries[k] = pair_entry(terms, a, b);
  }
  return assemble(pairs, entries, n);
}

double directional_derivative(const GradientMatrix& g, const Matrix& theta) {
  if (theta.rows() != g.rows() || theta.cols() != g.cols())
    throw std::invalid_argument("directional_derivative: dimension mismatch");
  const Complex tr = trace_of_product(theta, g);
  if (std::abs(tr.imag()) > 1e-12 * std::max(1.0, std::abs(tr.real()))) {
    std::ostringstream oss;
    oss << "directional_derivative: Tr(theta g) has imaginary part " << tr.imag()
        << "; theta or g is not Hermitian";
    throw std::invalid_argument(oss.str());
  }
  return tr.real();
}

FlatVector flatten(const GradientMatrix& g) {
  const int n = static_cast<int>(g.rows());
  if (g.cols() != n) throw std::invalid_argument("flatten: matrix must be square");
  FlatVector v(static_cast<Eigen::Index>(n) * (n - 1));
  Eigen::Index k = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      v[k++] = 2.0 * g(a, b).real();
      v[k++] = 2.0 * g(a, b).imag();
    }
  return v;
}

Matrix unflatten(const FlatVector& v, int n) {
  if (n < 1 || v.size() != static_cast<Eigen::Index>(n) * (n - 1))
    throw std::invalid_argument("unflatten: vector length must be n(n-1)");
  Matrix theta = Matrix::Zero(n, n);
  Eigen::Index k = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const Complex entry(v[k], v[k + 1]);
      k += 2;
      theta(a, b) = entry;
      theta(b, a) = std::conj(entry);
    }
  return theta;
}

}  // namespace eof
