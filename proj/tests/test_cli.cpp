#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "eof/cli.hpp"
#include "eof/oracles.hpp"
#include "eof/state_io.hpp"

using namespace eof;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double parse_ef(const std::string& out) {
  const auto pos = out.find("E_F = ");
  REQUIRE(pos != std::string::npos);
  return std::stod(out.substr(pos + 6));
}

}  // namespace

TEST_CASE("cli: no subcommand or bad flags exit 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"compute"}).code == 1);                        // missing state path
  CHECK(run({"compute", "/tmp/x", "--bogus-flag"}).code == 1);
  CHECK(run({"sweep", "--d", "2", "--channel", "warp", "--out", "/tmp/x.csv"}).code == 1);
}

TEST_CASE("cli: help exits 0") {
  const CliRun r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("compute") != std::string::npos);
}

TEST_CASE("cli compute: Bell state file") {
  Vector phi = Vector::Zero(4);
  phi[0] = phi[3] = 1.0 / std::sqrt(2.0);
  write_state_file("/tmp/eof_cli_bell.txt",
                   DensityMatrix(BipartiteDims(2, 2), phi * phi.adjoint()));

  const CliRun r = run({"compute", "/tmp/eof_cli_bell.txt"});
  CHECK(r.code == 0);
  CHECK(parse_ef(r.out) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.out.find("certified: yes") != std::string::npos);
}

TEST_CASE("cli compute: maximally mixed two-qubit file, oracle column") {
  write_state_file("/tmp/eof_cli_mixed.txt",
                   DensityMatrix(BipartiteDims(2, 2), 0.25 * Matrix::Identity(4, 4)));

  const CliRun r = run({"compute", "/tmp/eof_cli_mixed.txt", "--oracle", "wootters"});
  CHECK(r.code == 0);
  CHECK(parse_ef(r.out) < 1e-9);
  CHECK(r.out.find("wootters") != std::string::npos);

  // oracle flag on a non-two-qubit state is an input error
  const CliRun r33 = run({"random", "--dA", "3", "--dB", "3", "--rank", "2", "--seed", "7",
                          "--out", "/tmp/eof_cli_q3.txt"});
  REQUIRE(r33.code == 0);
  CHECK(run({"compute", "/tmp/eof_cli_q3.txt", "--oracle", "wootters"}).code == 1);
}

TEST_CASE("cli compute: trace CSV") {
  const CliRun gen = run({"random", "--dA", "2", "--dB", "2", "--rank", "3", "--seed", "11",
                          "--out", "/tmp/eof_cli_r22.txt"});
  REQUIRE(gen.code == 0);

  const CliRun r = run({"compute", "/tmp/eof_cli_r22.txt", "--trace",
                        "/tmp/eof_cli_trace.csv", "--seed", "1"});
  CHECK(r.code == 0);
  const std::string csv = slurp("/tmp/eof_cli_trace.csv");
  CHECK(csv.rfind("iteration,e_av,grad_norm,step_alpha,perturbation", 0) == 0);
  CHECK(csv.find("\n0,") != std::string::npos);  // initial record present
}

TEST_CASE("cli compute: seed-independent value on a two-qutrit file") {
  const CliRun gen = run({"random", "--dA", "3", "--dB", "3", "--rank", "2", "--seed", "3",
                          "--out", "/tmp/eof_cli_q33.txt"});
  REQUIRE(gen.code == 0);

  const CliRun a = run({"compute", "/tmp/eof_cli_q33.txt", "--seed", "1"});
  const CliRun b = run({"compute", "/tmp/eof_cli_q33.txt", "--seed", "2"});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(std::abs(parse_ef(a.out) - parse_ef(b.out)) <= 1e-7);
}

TEST_CASE("cli compute: malformed file and uncertified runs") {
  {
    std::ofstream bad("/tmp/eof_cli_bad.txt");
    bad << "2 2\nnot a matrix\n";
  }
  CHECK(run({"compute", "/tmp/eof_cli_bad.txt"}).code == 1);
  CHECK(run({"compute", "/tmp/eof_cli_does_not_exist.txt"}).code == 1);

  // the isotropic eigenstate stationary point with stall-perturbation disabled
  // terminates uncertified -> exit 2
  write_state_file("/tmp/eof_cli_iso.txt", isotropic_state(2, 0.9));
  const CliRun r = run({"compute", "/tmp/eof_cli_iso.txt", "--no-stall-perturb"});
  CHECK(r.code == 2);
  CHECK(r.out.find("certified: no") != std::string::npos);
}

TEST_CASE("cli sweep: qubit depolarizing against closed forms, byte-stable") {
  const std::vector<std::string> args{"sweep", "--d",       "2",   "--channel",
                                      "depolarizing",       "--p-start", "0",
                                      "--p-end", "1",       "--p-steps", "3",
                                      "--out", "/tmp/eof_cli_sweep.csv", "--seed", "4"};
  const CliRun r = run(args);
  CHECK(r.code == 0);
  const std::string csv = slurp("/tmp/eof_cli_sweep.csv");
  CHECK(csv.rfind("p,eof_ebits,eof_normalized,certified", 0) == 0);

  // three rows: p = 0, 0.5, 1
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  std::vector<double> ps, es;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    double p = 0.0, e = 0.0;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf", &p, &e) == 2);
    ps.push_back(p);
    es.push_back(e);
    CHECK(line.find("true") != std::string::npos);
  }
  REQUIRE(ps.size() == 3);
  CHECK(ps[0] == 0.0);
  CHECK(ps[1] == 0.5);
  CHECK(ps[2] == 1.0);
  for (std::size_t k = 0; k < 3; ++k) {
    const double f = 1.0 - ps[k] + ps[k] / 4.0;
    const double c = std::max(0.0, 2.0 * f - 1.0);
    const double expected = binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - c * c)));
    CHECK(es[k] == doctest::Approx(expected).epsilon(1e-9));
  }
  CHECK(es[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(es[2] == 0.0);

  // rerun produces a byte-identical file
  const CliRun again = run(args);
  CHECK(again.code == 0);
  CHECK(slurp("/tmp/eof_cli_sweep.csv") == csv);
}

TEST_CASE("cli sweep: single-point grid") {
  const CliRun r = run({"sweep", "--d", "2", "--channel", "bitflip", "--p-start", "0",
                        "--p-end", "0", "--p-steps", "1", "--out", "/tmp/eof_cli_one.csv"});
  CHECK(r.code == 0);
  const std::string csv = slurp("/tmp/eof_cli_one.csv");
  std::istringstream lines(csv);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  CHECK(row.rfind("0,1,1,true", 0) == 0);
}

TEST_CASE("cli isotropic: formula column and d = 2 engine comparison") {
  const CliRun r = run({"isotropic", "--d", "3", "--F-grid", "0.3333333333333333,1.0",
                        "--out", "/tmp/eof_cli_isoF.csv"});
  CHECK(r.code == 0);
  const std::string csv = slurp("/tmp/eof_cli_isoF.csv");
  CHECK(csv.rfind("F,eof_formula", 0) == 0);
  CHECK(csv.find("eof_engine") == std::string::npos);  // engine column is opt-in

  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  std::getline(lines, line);
  double f = 0.0, e = -1.0;
  REQUIRE(std::sscanf(line.c_str(), "%lf,%lf", &f, &e) == 2);
  CHECK(e == doctest::Approx(0.0).epsilon(1e-12));  // threshold point
  std::getline(lines, line);
  REQUIRE(std::sscanf(line.c_str(), "%lf,%lf", &f, &e) == 2);
  CHECK(e == doctest::Approx(std::log2(3.0)).epsilon(1e-12));

  // d = 2 engine path auto-escapes the eigenstate stationary point
  const CliRun r2 = run({"isotropic", "--d", "2", "--F-grid", "0.9", "--compare-engine",
                         "--out", "/tmp/eof_cli_isoE.csv", "--seed", "5"});
  CHECK(r2.code == 0);
  const std::string csv2 = slurp("/tmp/eof_cli_isoE.csv");
  CHECK(csv2.rfind("F,eof_formula,eof_engine,abs_diff", 0) == 0);
  std::istringstream lines2(csv2);
  std::getline(lines2, line);
  std::getline(lines2, line);
  double ef = 0.0, engine = 0.0, diff = 1.0;
  REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &f, &ef, &engine, &diff) == 4);
  CHECK(ef == doctest::Approx(isotropic_eof(2, 0.9)).epsilon(1e-12));
  CHECK(diff <= 1e-6);
}

TEST_CASE("cli random: determinism, env seed, rank") {
  const std::vector<std::string> args{"random", "--dA", "2", "--dB", "3", "--rank", "2",
                                      "--seed", "21", "--out", "/tmp/eof_cli_rnd_a.txt"};
  REQUIRE(run(args).code == 0);
  const std::string first = slurp("/tmp/eof_cli_rnd_a.txt");
  REQUIRE(run(args).code == 0);
  CHECK(slurp("/tmp/eof_cli_rnd_a.txt") == first);

  // file parses and has the requested rank
  const DensityMatrix rho = read_state_file("/tmp/eof_cli_rnd_a.txt");
  const EigenSystem es = hermitian_eig(rho.matrix());
  int above = 0;
  for (int k = 0; k < 6; ++k)
    if (es.eigenvalues[k] > 1e-12) ++above;
  CHECK(above == 2);

  // environment variable supplies the seed; explicit flag wins over it
  setenv("EOF_SOLVER_SEED", "21", 1);
  REQUIRE(run({"random", "--dA", "2", "--dB", "3", "--rank", "2", "--out",
               "/tmp/eof_cli_rnd_b.txt"})
              .code == 0);
  CHECK(slurp("/tmp/eof_cli_rnd_b.txt") == first);

  setenv("EOF_SOLVER_SEED", "99", 1);
  REQUIRE(run({"random", "--dA", "2", "--dB", "3", "--rank", "2", "--seed", "21", "--out",
               "/tmp/eof_cli_rnd_c.txt"})
              .code == 0);
  CHECK(slurp("/tmp/eof_cli_rnd_c.txt") == first);
  unsetenv("EOF_SOLVER_SEED");

  // rank 1 parses to a pure state
  REQUIRE(run({"random", "--dA", "2", "--dB", "2", "--rank", "1", "--seed", "8", "--out",
               "/tmp/eof_cli_rnd_pure.txt"})
              .code == 0);
  const EigenSystem pure = hermitian_eig(read_state_file("/tmp/eof_cli_rnd_pure.txt").matrix());
  CHECK(pure.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));

  // unwritable path
  CHECK(run({"random", "--dA", "2", "--dB", "2", "--rank", "1", "--seed", "8", "--out",
             "/tmp/no_such_dir_xyz/out.txt"})
            .code == 1);
}
