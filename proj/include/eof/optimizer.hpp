#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "eof/gradient.hpp"
#include "eof/states.hpp"
#include "eof/types.hpp"

namespace eof {

struct MinimizerConfig {
  double tol_ftol = 1e-12;      // relative E_av improvement stop threshold
  double tol_grad = 1e-10;      // flat-gradient sup-norm stop threshold
  int max_iters = 20000;
  int restart_interval = 0;     // CG reset period; 0 = auto (n(n-1))
  bool perturb_on_stall = true;
  double perturb_magnitude = 1e-2;  // Frobenius norm of random kick generators
  int perturb_count = 5;            // kicks per stall
  int mc_trials = 2000;             // certification directions
  int mc_steps = 17;                // step sizes per direction
  double mc_step_min = 1e-8;
  double mc_step_max = 1.0;
  double cert_tol = 1e-10;      // certification decrease threshold
  std::uint64_t seed = 0;
  int n_states = 0;             // decomposition size; 0 = numerical rank
  bool initial_perturb = false; // random kick before the first iteration
  int global_probes = 2;        // padded-restart attempts per probe size; 0 disables
  double probe_magnitude = 1.5; // Frobenius norm of a probe's starting rotation

  void validate() const;  // throws std::invalid_argument on nonsense values
};

struct TraceRecord {
  int iteration;
  double e_av;        // ebits, after this step
  double grad_norm;   // flat-gradient sup-norm, after this step
  double step_alpha;  // accepted line-search step (0 for the initial record)
  bool perturbation;  // true for random-kick rows, exempt from monotonicity
};

using ConvergenceTrace = std::vector<TraceRecord>;

struct MinimizationResult {
  double e_f;                  // ebits
  Decomposition decomposition; // optimal decomposition found
  Matrix cumulative_unitary;   // maps the eigenstate decomposition to the optimal one
  ConvergenceTrace trace;
  bool certified;
  int restarts_used;           // perturb-and-resume rounds taken
  int iterations;              // line minimizations performed
};

struct LineMinResult {
  double alpha;
  Decomposition decomposition;  // exp(i alpha D) applied
  double e_av;
  Matrix rotation;              // the applied exp(i alpha D)
};

struct CertificationResult {
  bool passed;
  double best_decrease;             // largest E_av drop found by sampling
  std::optional<Matrix> witness;    // direction achieving it, when failed
  double witness_alpha = 0.0;
};

// Signalled by line_minimize when dE/dalpha >= 0 at alpha = 0; the caller is
// expected to fall back to steepest descent.
class NotDescentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Minimize E_av along the one-parameter flow exp(i alpha D) starting from dec.
// Brackets by golden-ratio expansion from the initial step 1/||D||_F, then
// runs a derivative-aware Brent search; the derivative dE/dalpha is exact
// because exp(i alpha D) commutes with D.
LineMinResult line_minimize(const Decomposition& dec, const Matrix& direction);

// Conjugate-gradient descent from the eigenstate decomposition, with
// certification and perturb-and-resume rounds on failure.  A certified stop can
// still sit in a non-global basin: rank-sized orbits of some separable and
// convex-roof-flat states hide the optimum behind a barrier wider than any
// single certification move.  When perturb_on_stall is set, the converged
// result is therefore challenged by deterministic "globality probes" — fresh
// descents in a one-state-larger orbit from a large random rotation — and a
// probe replaces the result only when it lands strictly lower; probing then
// advances to the next size while each size keeps delivering a meaningful
// improvement.
MinimizationResult minimize_average_entanglement(const DensityMatrix& rho,
                                                 const MinimizerConfig& config);

// Monte Carlo stationarity check: random unit-Frobenius Hermitian directions,
// step sizes log-spaced over [mc_step_min, mc_step_max].  Heuristic by design;
// a pass does not prove global optimality.
CertificationResult certify_minimum(const Decomposition& dec, const MinimizerConfig& config);

Decomposition perturb_random(const Decomposition& dec, double magnitude, std::uint64_t seed);

}  // namespace eof
