#pragma once

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace expcli {

std::string format_double(double v);

// Line-oriented CSV writer with a fixed header; doubles are written with 17
// significant digits so replays are byte-identical.
class CsvWriter {
public:
  CsvWriter(const std::string& path, const std::string& header);
  ~CsvWriter();

  void row(const std::vector<std::string>& cells);

  static std::string cell(double v) { return format_double(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::uint64_t v) { return std::to_string(v); }
  static std::string cell(bool v) { return v ? "1" : "0"; }
  static std::string cell(const std::string& v) { return v; }

private:
  std::ofstream out_;
  std::string path_;
};

void write_summary(const std::string& path, const nlohmann::json& summary);

double median(std::vector<double> values);

}  // namespace expcli
