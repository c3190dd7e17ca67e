#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rplap/discrete_operator.hpp"
#include "rplap/stability.hpp"

namespace rplap {

/// Shortest exact round-trip form, '.' separator; "inf", "-inf", "nan" otherwise.
std::string format_double(double x);

/// Shortest round-trip form, used in file names (profile_<lambda>.csv).
std::string format_label(double x);

/// Accumulates a CSV table in memory.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row(const std::vector<double>& values);
  /// Pre-formatted cells (for booleans and labels).
  CsvTable& row_cells(const std::vector<std::string>& cells);

  std::string str() const;

 private:
  std::size_t columns_;
  std::string text_;
};

/// Writes to a temporary sibling then renames over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// r,u,u_r
std::string profile_csv(const SolutionProfile& profile);

/// {"threshold","regime","q0","q1","alpha_max", ...}; +inf written as "inf".
std::string exponents_json(const ExponentReport& report);

}  // namespace rplap
