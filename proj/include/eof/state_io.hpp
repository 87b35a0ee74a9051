#pragma once

#include <iosfwd>
#include <string>

#include "eof/states.hpp"

namespace eof {

// Plain-text density-matrix format. Line 1: `dA dB`. Then dA*dB rows, each
// holding dA*dB entries as `re im` pairs (row-major, A-major composite
// indexing), written with 17 significant digits so parsing reproduces every
// double bit-exactly. Lines starting with `#` are comments.
DensityMatrix read_state_stream(std::istream& in);
DensityMatrix read_state_file(const std::string& path);

void write_state_stream(std::ostream& out, const DensityMatrix& rho);
void write_state_file(const std::string& path, const DensityMatrix& rho);

}  // namespace eof
