#include <doctest.h>

#include <cmath>
#include <random>

#include "eof/oracles.hpp"
#include "eof/rng.hpp"

using namespace eof;

namespace {

Vector bell(int which) {  // 0: (|00>+|11>)/sqrt2, 1: (|01>+|10>)/sqrt2
  Vector v = Vector::Zero(4);
  if (which == 0)
    v[0] = v[3] = 1.0 / std::sqrt(2.0);
  else
    v[1] = v[2] = 1.0 / std::sqrt(2.0);
  return v;
}

// Independent route to the Wootters value: eigenvalues of the Hermitian
// sqrt(rho) rho~ sqrt(rho) instead of the non-Hermitian product rho rho~.
double wootters_hermitian_route(const DensityMatrix& rho) {
  Matrix yy = Matrix::Zero(4, 4);
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Matrix tilde = yy * rho.matrix().conjugate() * yy;

  const EigenSystem es = hermitian_eig(rho.matrix());
  Matrix sqrt_rho = Matrix::Zero(4, 4);
  for (int k = 0; k < 4; ++k) {
    const double lam = std::max(0.0, es.eigenvalues[k]);
    sqrt_rho += std::sqrt(lam) * es.eigenvectors.col(k) * es.eigenvectors.col(k).adjoint();
  }

  const EigenSystem prod = hermitian_eig(
      ((sqrt_rho * tilde * sqrt_rho + (sqrt_rho * tilde * sqrt_rho).adjoint()) * 0.5).eval());
  double lams[4];
  for (int k = 0; k < 4; ++k) {
    // same zero-snap as the production route: sqrt turns O(1e-16) eigenvalue
    // noise on rank-deficient products into O(1e-8) otherwise
    const double ev = prod.eigenvalues[k];
    lams[k] = ev <= 1e-13 ? 0.0 : std::sqrt(ev);
  }
  const double c = std::max(0.0, lams[0] - lams[1] - lams[2] - lams[3]);
  return binary_entropy((1.0 + std::sqrt(1.0 - c * c)) / 2.0);
}

}  // namespace

TEST_CASE("binary_entropy: endpoints, peak, symmetry, domain") {
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(binary_entropy(0.3) == doctest::Approx(binary_entropy(0.7)).epsilon(1e-14));
  CHECK_THROWS_AS(binary_entropy(-0.01), std::invalid_argument);
  CHECK_THROWS_AS(binary_entropy(1.01), std::invalid_argument);
}

TEST_CASE("wootters_eof: maximally entangled and product states") {
  const Vector phi = bell(0);
  const DensityMatrix rho_bell(BipartiteDims(2, 2), phi * phi.adjoint());
  CHECK(wootters_eof(rho_bell) == doctest::Approx(1.0).epsilon(1e-12));

  Vector prod = Vector::Zero(4);
  prod[1] = 1.0;  // |01>
  const DensityMatrix rho_prod(BipartiteDims(2, 2), prod * prod.adjoint());
  CHECK(wootters_eof(rho_prod) == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(wootters_eof(random_density_matrix(BipartiteDims(2, 3), 2, 1)),
                  std::invalid_argument);
}

TEST_CASE("wootters_eof: Bell-diagonal concurrence identity") {
  const Vector b0 = bell(0);
  const Vector b1 = bell(1);  // (X (x) I) applied to bell(0)
  const double p = 0.25;
  const DensityMatrix rho(BipartiteDims(2, 2),
                          (1.0 - p) * (b0 * b0.adjoint()) + p * (b1 * b1.adjoint()));
  const double c = std::abs(1.0 - 2.0 * p);  // = 0.5
  const double expected = binary_entropy((1.0 + std::sqrt(1.0 - c * c)) / 2.0);
  CHECK(wootters_eof(rho) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("wootters_eof: agrees with the Hermitian-product route") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const DensityMatrix rho = random_density_matrix(BipartiteDims(2, 2), 2 + (s % 3), 80 + s);
    CHECK(wootters_eof(rho) ==
          doctest::Approx(wootters_hermitian_route(rho)).epsilon(1e-10));
  }
}

TEST_CASE("wootters_eof: invariant under local unitaries") {
  std::mt19937_64 rng(85);
  for (int rep = 0; rep < 4; ++rep) {
    const DensityMatrix rho = random_density_matrix(BipartiteDims(2, 2), 3, 86 + rep);
    const Matrix u = unitary_from_generator(random_hermitian(2, rng));
    const Matrix v = unitary_from_generator(random_hermitian(2, rng));
    const Matrix uv = kron(u, v);
    const DensityMatrix rotated(BipartiteDims(2, 2),
                                (uv * rho.matrix() * uv.adjoint()).eval());
    CHECK(std::abs(wootters_eof(rho) - wootters_eof(rotated)) <= 1e-10);
  }
}

TEST_CASE("wootters_eof: matches pure_state_entanglement on pure states") {
  std::mt19937_64 rng(90);
  for (int rep = 0; rep < 4; ++rep) {
    Vector psi = random_gaussian_matrix(4, 1, rng).col(0);
    psi /= psi.norm();
    const DensityMatrix rho(BipartiteDims(2, 2), psi * psi.adjoint());
    CHECK(std::abs(wootters_eof(rho) -
                   pure_state_entanglement(psi, BipartiteDims(2, 2))) <= 1e-10);
  }
}

TEST_CASE("isotropic_state: pinned spectra and fidelity") {
  // F = 1 is the projector onto |Psi+>
  const DensityMatrix pure = isotropic_state(3, 1.0);
  Vector psi = Vector::Zero(9);
  for (int i = 0; i < 3; ++i) psi[i * 3 + i] = 1.0 / std::sqrt(3.0);
  CHECK((pure.matrix() - psi * psi.adjoint()).cwiseAbs().maxCoeff() < 1e-14);

  // F = 1/d^2 is maximally mixed
  const DensityMatrix mixed = isotropic_state(3, 1.0 / 9.0);
  CHECK((mixed.matrix() - Matrix::Identity(9, 9) / 9.0).cwiseAbs().maxCoeff() < 1e-14);

  // d = 3, F = 0.7: eigenvalue 0.7 once, (1-F)/(d^2-1) = 0.0375 eightfold
  const EigenSystem es = hermitian_eig(isotropic_state(3, 0.7).matrix());
  CHECK(es.eigenvalues[0] == doctest::Approx(0.7).epsilon(1e-13));
  for (int k = 1; k < 9; ++k)
    CHECK(es.eigenvalues[k] == doctest::Approx(0.0375).epsilon(1e-13));

  // <Psi+| rho |Psi+> = F
  const DensityMatrix r = isotropic_state(4, 0.37);
  Vector p4 = Vector::Zero(16);
  for (int i = 0; i < 4; ++i) p4[i * 4 + i] = 0.5;
  CHECK(std::abs((p4.adjoint() * r.matrix() * p4)(0, 0).real() - 0.37) < 1e-12);

  CHECK_THROWS_AS(isotropic_state(3, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(isotropic_state(3, 1.1), std::invalid_argument);
  CHECK_THROWS_AS(isotropic_state(1, 0.5), std::invalid_argument);
}

TEST_CASE("isotropic_eof: boundary values") {
  for (int d = 2; d <= 5; ++d) {
    CHECK(isotropic_eof(d, 1.0 / d) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(isotropic_eof(d, 0.0) == 0.0);  // below threshold
    CHECK(isotropic_eof(d, 1.0) == doctest::Approx(std::log2(d)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(isotropic_eof(3, 1.0 + 1e-9), std::invalid_argument);
  CHECK_THROWS_AS(isotropic_eof(3, -1e-9), std::invalid_argument);
}

TEST_CASE("isotropic_eof: branch continuity at d = 3, F = 8/9") {
  const double f_star = 8.0 / 9.0;  // 4(d-1)/d^2
  const double gamma = 2.0 / 3.0;
  const double expected = binary_entropy(gamma) + (1.0 - gamma) * std::log2(2.0);
  CHECK(isotropic_eof(3, f_star) == doctest::Approx(expected).epsilon(1e-12));

  // the linear branch extrapolated to F = 8/9 gives the same value
  const double linear = (3.0 * std::log2(2.0) / 1.0) * (f_star - 1.0) + std::log2(3.0);
  CHECK(linear == doctest::Approx(expected).epsilon(1e-12));

  // both one-sided limits agree with the value at the breakpoint
  CHECK(std::abs(isotropic_eof(3, f_star - 1e-9) - expected) < 1e-7);
  CHECK(std::abs(isotropic_eof(3, f_star + 1e-9) - expected) < 1e-7);
}

TEST_CASE("isotropic_eof: continuity and monotonicity") {
  for (int d = 2; d <= 4; ++d) {
    // continuity: neighbours 1e-6 apart differ by <= 1e-4
    for (const double f :
         {1.0 / d - 1e-7, 1.0 / d + 1e-7, 0.5, 4.0 * (d - 1) / (d * d) - 1e-7, 0.93}) {
      if (f <= 0.0 || f + 1e-6 >= 1.0) continue;
      CHECK(std::abs(isotropic_eof(d, f + 1e-6) - isotropic_eof(d, f)) <= 1e-4);
    }
    // monotone non-decreasing on [1/d, 1]
    double prev = 0.0;
    for (int k = 0; k <= 200; ++k) {
      const double f = 1.0 / d + (1.0 - 1.0 / d) * k / 200.0;
      const double e = isotropic_eof(d, f);
      CHECK(e >= prev - 1e-12);
      prev = e;
    }
  }
}

TEST_CASE("isotropic_eof: d = 2 agrees with the Wootters formula") {
  for (int k = 0; k <= 100; ++k) {
    const double f = k / 100.0;
    CHECK(std::abs(isotropic_eof(2, f) - wootters_eof(isotropic_state(2, f))) <= 1e-10);
  }
}

TEST_CASE("IsotropicState: bundles state and formula") {
  const IsotropicState iso(3, 0.8);
  CHECK(iso.eof() == doctest::Approx(isotropic_eof(3, 0.8)).epsilon(1e-15));
  CHECK((iso.state().matrix() - isotropic_state(3, 0.8).matrix()).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK_THROWS_AS(IsotropicState(3, 2.0), std::invalid_argument);
}
