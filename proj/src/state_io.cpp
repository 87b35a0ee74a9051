#include "eof/state_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace eof {

namespace {

// All whitespace-separated tokens outside `#` comment lines.
std::vector<std::string> read_tokens(std::istream& in) {
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      if (tok[0] == '#') break;  // rest of the line is a comment
      tokens.push_back(tok);
    }
  }
  return tokens;
}

int parse_dim(const std::string& tok, const char* which) {
  std::size_t pos = 0;
  int value = 0;
  try {
    value = std::stoi(tok, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != tok.size())
    throw std::runtime_error(std::string("state file: bad ") + which + " '" + tok + "'");
  return value;
}

double parse_entry(const std::string& tok, std::size_t index) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(tok, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != tok.size()) {
    std::ostringstream oss;
    oss << "state file: bad numeric token '" << tok << "' at entry " << index;
    throw std::runtime_error(oss.str());
  }
  return value;
}

}  // namespace

DensityMatrix read_state_stream(std::istream& in) {
  const std::vector<std::string> tokens = read_tokens(in);
  if (tokens.size() < 2) throw std::runtime_error("state file: missing dimension header");

  const int da = parse_dim(tokens[0], "dA");
  const int db = parse_dim(tokens[1], "dB");
  if (da < 2 || db < 2) throw std::runtime_error("state file: dimensions must be >= 2");

  const std::size_t n = static_cast<std::size_t>(da) * static_cast<std::size_t>(db);
  const std::size_t expected = 2 + 2 * n * n;
  if (tokens.size() != expected) {
    std::ostringstream oss;
    oss << "state file: expected " << expected - 2 << " numbers for a " << n << "x" << n
        << " matrix, found " << tokens.size() - 2;
    throw std::runtime_error(oss.str());
  }

  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::size_t t = 2;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double re = parse_entry(tokens[t], t - 2);
      const double im = parse_entry(tokens[t + 1], t - 1);
      t += 2;
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = Complex(re, im);
    }

  try {
    return DensityMatrix(BipartiteDims(da, db), std::move(m));
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("state file: ") + e.what());
  }
}

DensityMatrix read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open state file: " + path);
  return read_state_stream(in);
}

void write_state_stream(std::ostream& out, const DensityMatrix& rho) {
  const Eigen::Index n = rho.matrix().rows();
  out << rho.dims().dim_a << ' ' << rho.dims().dim_b << '\n';
  char buf[64];
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const Complex v = rho.matrix()(i, j);
      std::snprintf(buf, sizeof buf, "%.17g %.17g", v.real(), v.imag());
      if (j > 0) out << ' ';
      out << buf;
    }
    out << '\n';
  }
}

void write_state_file(const std::string& path, const DensityMatrix& rho) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  write_state_stream(out, rho);
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace eof
