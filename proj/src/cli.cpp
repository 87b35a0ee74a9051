#include "eof/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "eof/channels.hpp"
#include "eof/optimizer.hpp"
#include "eof/oracles.hpp"
#include "eof/rng.hpp"
#include "eof/state_io.hpp"

namespace eof {

namespace {

constexpr std::uint64_t kIsotropicStream = 0x69736fULL;  // per-fidelity engine seeds

std::string fmt(double v, int sig_digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", sig_digits, v);
  return buf;
}

// Engine flags shared by every command that runs the minimizer.
void add_engine_options(CLI::App& cmd, MinimizerConfig& cfg, bool& no_stall_perturb) {
  cmd.add_option("--seed", cfg.seed, "Master seed (default 0)")->envname("EOF_SOLVER_SEED");
  cmd.add_option("--max-iters", cfg.max_iters, "Iteration cap");
  cmd.add_option("--tol-grad", cfg.tol_grad, "Gradient sup-norm stop threshold");
  cmd.add_option("--tol-ftol", cfg.tol_ftol, "Relative improvement stop threshold");
  cmd.add_option("--mc-trials", cfg.mc_trials, "Certification directions");
  cmd.add_option("--mc-steps", cfg.mc_steps, "Certification step sizes per direction");
  cmd.add_option("--cert-tol", cfg.cert_tol, "Certification decrease threshold");
  cmd.add_option("--n-states", cfg.n_states, "Decomposition size (0 = rank)");
  cmd.add_flag("--initial-perturb", cfg.initial_perturb,
               "Random kick before the first iteration");
  cmd.add_flag("--no-stall-perturb", no_stall_perturb,
               "Give up instead of perturbing when certification fails");
}

void write_trace_csv(const std::string& path, const ConvergenceTrace& trace) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open trace file: " + path);
  f << "iteration,e_av,grad_norm,step_alpha,perturbation\n";
  for (const TraceRecord& r : trace)
    f << r.iteration << ',' << fmt(r.e_av, 12) << ',' << fmt(r.grad_norm, 12) << ','
      << fmt(r.step_alpha, 12) << ',' << (r.perturbation ? 1 : 0) << '\n';
  if (!f) throw std::runtime_error("write failed: " + path);
}

int run_compute(const std::string& state_path, const std::string& trace_path,
                const std::string& oracle, const MinimizerConfig& cfg, std::ostream& out) {
  const DensityMatrix rho = read_state_file(state_path);
  if (oracle == "wootters" && (rho.dims().dim_a != 2 || rho.dims().dim_b != 2))
    throw std::runtime_error("--oracle wootters needs a two-qubit state");

  const MinimizationResult res = minimize_average_entanglement(rho, cfg);
  out << "E_F = " << fmt(res.e_f, 15) << " ebits\n"
      << "certified: " << (res.certified ? "yes" : "no") << '\n'
      << "iterations: " << res.iterations << '\n'
      << "restarts: " << res.restarts_used << '\n';
  if (oracle == "wootters") {
    const double w = wootters_eof(rho);
    out << "wootters E_F = " << fmt(w, 15) << " ebits\n"
        << "|difference| = " << fmt(std::abs(res.e_f - w), 15) << '\n';
  }
  if (!trace_path.empty()) write_trace_csv(trace_path, res.trace);
  return res.certified ? 0 : 2;
}

int run_sweep(int d, ChannelKind kind, double p_start, double p_end, int p_steps,
              const std::string& out_path, const MinimizerConfig& cfg) {
  if (p_steps < 1) throw std::runtime_error("--p-steps must be >= 1");
  if (p_start > p_end) throw std::runtime_error("--p-start must not exceed --p-end");
  std::vector<double> grid(static_cast<std::size_t>(p_steps));
  for (int k = 0; k < p_steps; ++k)
    grid[static_cast<std::size_t>(k)] =
        p_steps == 1 ? p_start : p_start + (p_end - p_start) * k / (p_steps - 1);

  const std::vector<SweepRow> rows = channel_sweep(d, kind, grid, cfg);

  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("cannot open output file: " + out_path);
  f << "p,eof_ebits,eof_normalized,certified\n";
  bool all_certified = true;
  for (const SweepRow& r : rows) {
    f << fmt(r.p, 12) << ',' << fmt(r.eof_ebits, 12) << ',' << fmt(r.eof_normalized, 12)
      << ',' << (r.certified ? "true" : "false") << '\n';
    all_certified = all_certified && r.certified;
  }
  if (!f) throw std::runtime_error("write failed: " + out_path);
  return all_certified ? 0 : 2;
}

int run_isotropic(int d, const std::vector<double>& f_grid, bool compare_engine,
                  const std::string& out_path, const MinimizerConfig& cfg, std::ostream& out) {
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot open output file: " + out_path);
  }
  std::ostream& os = out_path.empty() ? out : file;

  os << (compare_engine ? "F,eof_formula,eof_engine,abs_diff\n" : "F,eof_formula\n");
  bool all_certified = true;
  for (std::size_t k = 0; k < f_grid.size(); ++k) {
    const double fidelity = f_grid[k];
    const double formula = isotropic_eof(d, fidelity);
    if (!compare_engine) {
      os << fmt(fidelity, 12) << ',' << fmt(formula, 12) << '\n';
      continue;
    }
    MinimizerConfig point_cfg = cfg;
    point_cfg.seed = derive_seed(cfg.seed, kIsotropicStream + static_cast<std::uint64_t>(k));
    // the qubit isotropic eigenstate decomposition is a non-minimal stationary
    // point; start the engine off it
    if (d == 2) point_cfg.initial_perturb = true;
    const MinimizationResult res = minimize_average_entanglement(isotropic_state(d, fidelity), point_cfg);
    all_certified = all_certified && res.certified;
    os << fmt(fidelity, 12) << ',' << fmt(formula, 12) << ',' << fmt(res.e_f, 12) << ','
       << fmt(std::abs(res.e_f - formula), 12) << '\n';
  }
  if (!os) throw std::runtime_error("isotropic output write failed");
  return all_certified ? 0 : 2;
}

int run_random(int da, int db, int rank, std::uint64_t seed, const std::string& out_path) {
  const DensityMatrix rho = random_density_matrix(BipartiteDims(da, db), rank, seed);
  write_state_file(out_path, rho);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement of formation of bipartite mixed states by conjugate-gradient "
               "minimization over pure-state decompositions"};
  app.require_subcommand(1);

  MinimizerConfig cfg;
  bool no_stall_perturb = false;

  // compute
  CLI::App* compute = app.add_subcommand("compute", "E_F of a density matrix from a state file");
  std::string state_path, trace_path, oracle;
  compute->add_option("state", state_path, "State file (line 1: dA dB; then re/im pairs)")
      ->required();
  compute->add_option("--trace", trace_path, "Write the convergence trace to a CSV");
  compute->add_option("--oracle", oracle, "Print a closed-form reference value")
      ->check(CLI::IsMember({"wootters"}));
  add_engine_options(*compute, cfg, no_stall_perturb);

  // sweep
  CLI::App* sweep = app.add_subcommand("sweep", "E_F of a locally decohered |Psi+> vs p");
  int sweep_d = 3;
  ChannelKind kind = ChannelKind::depolarizing;
  const std::map<std::string, ChannelKind> kind_names{
      {"bitflip", ChannelKind::bitflip},
      {"depolarizing", ChannelKind::depolarizing},
      {"both", ChannelKind::both}};
  double p_start = 0.0, p_end = 1.0;
  int p_steps = 11;
  std::string sweep_out;
  sweep->add_option("--d", sweep_d, "Qudit dimension")->check(CLI::Range(2, 64));
  sweep->add_option("--channel", kind, "Decoherence channel")
      ->transform(CLI::CheckedTransformer(kind_names))
      ->required();
  sweep->add_option("--p-start", p_start, "First probability");
  sweep->add_option("--p-end", p_end, "Last probability");
  sweep->add_option("--p-steps", p_steps, "Grid size");
  sweep->add_option("--out", sweep_out, "Output CSV path")->required();
  add_engine_options(*sweep, cfg, no_stall_perturb);

  // isotropic
  CLI::App* isotropic = app.add_subcommand("isotropic", "Closed-form isotropic-state E_F, "
                                                        "optionally checked against the engine");
  int iso_d = 3;
  std::vector<double> f_grid;
  bool compare_engine = false;
  std::string iso_out;
  isotropic->add_option("--d", iso_d, "Qudit dimension")->check(CLI::Range(2, 64));
  isotropic->add_option("--F-grid", f_grid, "Comma-separated fidelities in [0, 1]")
      ->required()
      ->delimiter(',');
  isotropic->add_flag("--compare-engine", compare_engine,
                      "Also minimize numerically and report the difference");
  isotropic->add_option("--out", iso_out, "Output CSV path (default stdout)");
  add_engine_options(*isotropic, cfg, no_stall_perturb);

  // random
  CLI::App* random = app.add_subcommand("random", "Write a seeded random density matrix");
  int rnd_da = 2, rnd_db = 2, rnd_rank = 1;
  std::uint64_t rnd_seed = 0;
  std::string rnd_out;
  random->add_option("--dA", rnd_da, "Subsystem A dimension")->check(CLI::Range(2, 64));
  random->add_option("--dB", rnd_db, "Subsystem B dimension")->check(CLI::Range(2, 64));
  random->add_option("--rank", rnd_rank, "Rank of the generated state")->required();
  random->add_option("--seed", rnd_seed, "Generator seed")->envname("EOF_SOLVER_SEED");
  random->add_option("--out", rnd_out, "Output state-file path")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  cfg.perturb_on_stall = !no_stall_perturb;
  try {
    if (compute->parsed()) return run_compute(state_path, trace_path, oracle, cfg, out);
    if (sweep->parsed()) return run_sweep(sweep_d, kind, p_start, p_end, p_steps, sweep_out, cfg);
    if (isotropic->parsed())
      return run_isotropic(iso_d, f_grid, compare_engine, iso_out, cfg, out);
    if (random->parsed()) return run_random(rnd_da, rnd_db, rnd_rank, rnd_seed, rnd_out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  err << "error: no command given\n";
  return 1;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(static_cast<std::size_t>(argc > 0 ? argc - 1 : 0));
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace eof
