#pragma once

#include "fpaccel/tyler.hpp"

#include <string>

namespace fpaccel {

// Data matrix CSV: a literal "p,n" header line, a dimensions line, then the
// p x n matrix row-major with one row per line. Values round-trip exactly
// (17 significant digits).
void write_tyler_csv(const std::string& path, const TylerProblem& prob);
TylerProblem read_tyler_csv(const std::string& path);

}  // namespace fpaccel
