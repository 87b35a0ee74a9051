#include "eof/channels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "eof/numerics.hpp"
#include "eof/oracles.hpp"
#include "eof/rng.hpp"

namespace eof {

namespace {

constexpr std::uint64_t kSweepStream = 0x73777065ULL;  // per-point engine seeds

void check_probability(double p, const char* who) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream oss;
    oss << who << ": probability " << p << " outside [0, 1]";
    throw std::invalid_argument(oss.str());
  }
}

// Cyclic raise operator sum_i |i+1 mod d><i|.
Matrix shift_up(int d) {
  Matrix x = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) x((i + 1) % d, i) = 1.0;
  return x;
}

// Clock operator diag(1, w, ..., w^{d-1}), w = exp(2 pi i / d).
Matrix clock(int d) {
  Matrix z = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    z(i, i) = std::exp(Complex(0.0, 2.0 * std::numbers::pi * i / d));
  return z;
}

}  // namespace

KrausChannel::KrausChannel(int d, std::vector<Matrix> operators)
    : d_(d), ops_(std::move(operators)) {
  if (d_ < 2) throw std::invalid_argument("KrausChannel: dimension must be >= 2");
  if (ops_.empty()) throw std::invalid_argument("KrausChannel: needs at least one operator");
  Matrix completeness = Matrix::Zero(d_, d_);
  for (const Matrix& k : ops_) {
    if (k.rows() != d_ || k.cols() != d_)
      throw std::invalid_argument("KrausChannel: operators must be d x d");
    completeness += k.adjoint() * k;
  }
  const double err = (completeness - Matrix::Identity(d_, d_)).cwiseAbs().maxCoeff();
  if (err > 1e-12) {
    std::ostringstream oss;
    oss << "KrausChannel: completeness violated, max |sum K^dag K - I| = " << err;
    throw std::invalid_argument(oss.str());
  }
}

Matrix KrausChannel::apply(const Matrix& rho) const {
  if (rho.rows() != d_ || rho.cols() != d_)
    throw std::invalid_argument("KrausChannel::apply: matrix must be d x d");
  Matrix out = Matrix::Zero(d_, d_);
  for (const Matrix& k : ops_) out += k * rho * k.adjoint();
  return out;
}

Vector psi_plus(int d) {
  if (d < 2) throw std::invalid_argument("psi_plus: dimension must be >= 2");
  Vector psi = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) psi[i * d + i] = amp;
  return psi;
}

KrausChannel bitflip_channel(int d, double p) {
  check_probability(p, "bitflip_channel");
  if (d < 2) throw std::invalid_argument("bitflip_channel: dimension must be >= 2");
  std::vector<Matrix> ops;
  if (p < 1.0) ops.push_back(std::sqrt(1.0 - p) * Matrix::Identity(d, d));
  if (p > 0.0) {
    const Matrix x_up = shift_up(d);
    if (d == 2) {
      // raise and lower coincide; the two sqrt(p/2) operators merge
      ops.push_back(std::sqrt(p) * x_up);
    } else {
      ops.push_back(std::sqrt(p / 2.0) * x_up);
      ops.push_back(std::sqrt(p / 2.0) * x_up.adjoint());
    }
  }
  return KrausChannel(d, std::move(ops));
}

KrausChannel depolarizing_channel(int d, double p) {
  check_probability(p, "depolarizing_channel");
  if (d < 2) throw std::invalid_argument("depolarizing_channel: dimension must be >= 2");
  std::vector<Matrix> ops;
  const double dd = static_cast<double>(d) * d;
  ops.push_back(std::sqrt(1.0 - p * (dd - 1.0) / dd) * Matrix::Identity(d, d));
  if (p > 0.0) {
    const Matrix x_up = shift_up(d);
    const Matrix z = clock(d);
    const double w = std::sqrt(p) / d;
    Matrix xa = Matrix::Identity(d, d);
    for (int a = 0; a < d; ++a) {
      Matrix wab = xa;
      for (int b = 0; b < d; ++b) {
        if (a != 0 || b != 0) ops.push_back(w * wab);
        wab = wab * z;
      }
      xa = x_up * xa;
    }
  }
  return KrausChannel(d, std::move(ops));
}

DensityMatrix apply_local_channel(const DensityMatrix& rho, const KrausChannel& ch) {
  const BipartiteDims& dims = rho.dims();
  if (ch.dim() != dims.dim_a)
    throw std::invalid_argument("apply_local_channel: channel dimension must equal dim_a");
  const Matrix eye_b = Matrix::Identity(dims.dim_b, dims.dim_b);
  Matrix out = Matrix::Zero(dims.total(), dims.total());
  for (const Matrix& k : ch.operators()) {
    const Matrix lifted = kron(k, eye_b);
    out += lifted * rho.matrix() * lifted.adjoint();
  }
  out = ((out + out.adjoint()) * 0.5).eval();
  return DensityMatrix(dims, std::move(out));
}

KrausChannel compose(const KrausChannel& first, const KrausChannel& second) {
  if (first.dim() != second.dim())
    throw std::invalid_argument("compose: channel dimensions differ");
  std::vector<Matrix> ops;
  ops.reserve(first.operators().size() * second.operators().size());
  for (const Matrix& k2 : second.operators())
    for (const Matrix& k1 : first.operators()) ops.push_back(k2 * k1);
  return KrausChannel(first.dim(), std::move(ops));
}

std::vector<SweepRow> channel_sweep(int d, ChannelKind kind, const std::vector<double>& p_grid,
                                    const MinimizerConfig& engine) {
  if (d < 2) throw std::invalid_argument("channel_sweep: dimension must be >= 2");
  const Vector psi = psi_plus(d);
  const BipartiteDims dims(d, d);
  const DensityMatrix pure(dims, psi * psi.adjoint());
  const double log2d = std::log2(static_cast<double>(d));

  std::vector<SweepRow> rows;
  rows.reserve(p_grid.size());
  for (std::size_t k = 0; k < p_grid.size(); ++k) {
    const double p = p_grid[k];
    check_probability(p, "channel_sweep");
    KrausChannel ch = [&] {
      switch (kind) {
        case ChannelKind::bitflip:
          return bitflip_channel(d, p);
        case ChannelKind::depolarizing:
          return depolarizing_channel(d, p);
        case ChannelKind::both:
          return compose(bitflip_channel(d, p), depolarizing_channel(d, p));
      }
      throw std::invalid_argument("channel_sweep: unknown channel kind");
    }();
    const DensityMatrix decohered = apply_local_channel(pure, ch);

    double e_f;
    bool certified = true;
    if (d == 2) {
      e_f = wootters_eof(decohered);
    } else {
      MinimizerConfig cfg = engine;
      cfg.seed = derive_seed(engine.seed, kSweepStream + static_cast<std::uint64_t>(k));
      const MinimizationResult res = minimize_average_entanglement(decohered, cfg);
      e_f = res.e_f;
      certified = res.certified;
    }
    rows.push_back({p, e_f, e_f / log2d, certified});
  }
  return rows;
}

}  // namespace eof
