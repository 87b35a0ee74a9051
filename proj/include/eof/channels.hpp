#pragma once

#include <vector>

#include "eof/optimizer.hpp"
#include "eof/states.hpp"
#include "eof/types.hpp"

namespace eof {

// Quantum channel in operator-sum form: rho -> sum_m K_m rho K_m†.
class KrausChannel {
 public:
  KrausChannel(int d, std::vector<Matrix> operators);  // checks completeness

  int dim() const { return d_; }
  const std::vector<Matrix>& operators() const { return ops_; }

  // Action on a d x d matrix (single subsystem).
  Matrix apply(const Matrix& rho) const;

 private:
  int d_;
  std::vector<Matrix> ops_;
};

// |Psi+> = (1/sqrt d) sum_i |ii>, A-major indexing.
Vector psi_plus(int d);

// {sqrt(1-p) I, sqrt(p/2) X_up, sqrt(p/2) X_down} with cyclic raise/lower;
// for d = 2 the raise and lower operators coincide and merge into sqrt(p) X.
KrausChannel bitflip_channel(int d, double p);

// Weyl-operator representation of rho -> (1-p) rho + p I/d.
KrausChannel depolarizing_channel(int d, double p);

// (K_m ⊗ I_B) rho (K_m ⊗ I_B)†; the channel acts on subsystem A only.
DensityMatrix apply_local_channel(const DensityMatrix& rho, const KrausChannel& ch);

// Apply `first`, then `second`: operators {K2_m K1_k}.
KrausChannel compose(const KrausChannel& first, const KrausChannel& second);

enum class ChannelKind { bitflip, depolarizing, both };

struct SweepRow {
  double p;
  double eof_ebits;
  double eof_normalized;  // divided by log2(d)
  bool certified;
};

// For each p: decohere |Psi+><Psi+| through the channel on side A and compute
// E_F — closed-form Wootters for d = 2, the CG minimizer for d >= 3 (seeded
// per point from engine.seed and the grid index).
std::vector<SweepRow> channel_sweep(int d, ChannelKind kind, const std::vector<double>& p_grid,
                                    const MinimizerConfig& engine);

}  // namespace eof
