#include "rplap/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>

#include "rplap/errors.hpp"

namespace rplap {

namespace {

std::string non_finite(double x) {
  if (std::isnan(x)) return "nan";
  return x > 0.0 ? "inf" : "-inf";
}

}  // namespace

std::string format_double(double x) {
  if (!std::isfinite(x)) return non_finite(x);
  char buffer[64];
  // shortest representation that round-trips exactly
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, x);
  return std::string(buffer, result.ptr);
}

std::string format_label(double x) { return format_double(x); }

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) { row_cells(header); }

CsvTable& CsvTable::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  return row_cells(cells);
}

CsvTable& CsvTable::row_cells(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw PreconditionError("csv row has the wrong number of cells");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
  return *this;
}

std::string CsvTable::str() const { return text_; }

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw NumericalError("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw NumericalError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string profile_csv(const SolutionProfile& profile) {
  CsvTable table({"r", "u", "u_r"});
  for (Eigen::Index i = 0; i < profile.size(); ++i) {
    table.row({profile.grid->node(i), profile.u(i), profile.derivative(i)});
  }
  return table.str();
}

std::string exponents_json(const ExponentReport& report) {
  auto value = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(non_finite(x)); };
  nlohmann::ordered_json doc;
  doc["N"] = report.N;
  doc["p"] = report.p;
  doc["threshold"] = report.threshold;
  doc["regime"] = to_string(report.regime);
  doc["q0"] = value(report.q0);
  doc["q1"] = value(report.q1);
  doc["alpha_max"] = report.alpha_max;
  return doc.dump(2) + "\n";
}

}  // namespace rplap
