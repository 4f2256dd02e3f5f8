#include "fpaccel/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fpaccel {

namespace {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_tyler_csv(const std::string& path, const TylerProblem& prob) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "p,n\n" << prob.p() << "," << prob.n() << "\n";
  for (Index i = 0; i < prob.p(); ++i) {
    for (Index j = 0; j < prob.n(); ++j) {
      if (j) out << ",";
      out << format_value(prob.X(i, j));
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

TylerProblem read_tyler_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  std::string line;
  if (!std::getline(in, line) || line != "p,n") {
    throw std::runtime_error("missing p,n header in " + path);
  }
  if (!std::getline(in, line)) throw std::runtime_error("missing dimensions in " + path);
  Index p = 0, n = 0;
  {
    std::istringstream dims(line);
    char comma = 0;
    if (!(dims >> p >> comma >> n) || comma != ',' || p < 1 || n < 1) {
      throw std::runtime_error("bad dimensions line in " + path);
    }
  }

  Matrix X(p, n);
  for (Index i = 0; i < p; ++i) {
    if (!std::getline(in, line)) throw std::runtime_error("truncated matrix in " + path);
    std::istringstream row(line);
    std::string cell;
    for (Index j = 0; j < n; ++j) {
      if (!std::getline(row, cell, ',')) throw std::runtime_error("short row in " + path);
      X(i, j) = std::stod(cell);
    }
  }
  return TylerProblem(std::move(X));
}

}  // namespace fpaccel
