#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace expcli {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::string& header)
    : out_(path), path_(path) {
  if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
  out_ << header << "\n";
}

CsvWriter::~CsvWriter() = default;

void CsvWriter::row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ",";
    out_ << cells[i];
  }
  out_ << "\n";
  if (!out_) throw std::runtime_error("write failed: " + path_);
}

void write_summary(const std::string& path, const nlohmann::json& summary) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << summary.dump(2) << "\n";
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty list");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace expcli
