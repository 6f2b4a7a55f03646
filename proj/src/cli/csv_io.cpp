#include "covadmm/csv_io.hpp"

#include "covadmm/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string_view>
#include <vector>

namespace covadmm {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_cell(std::string_view cell) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

DataMatrix read_csv_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());

  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    std::vector<double> values;
    values.reserve(cells.size());
    std::size_t numeric = 0;
    for (auto c : cells) {
      if (auto v = parse_cell(c)) {
        values.push_back(*v);
        ++numeric;
      }
    }
    if (first) {
      first = false;
      if (numeric == 0) {  // header
        width = cells.size();
        continue;
      }
    }
    if (numeric != cells.size())
      throw InvalidInput(path.string() + ": line " + std::to_string(line_no) +
                         ": non-numeric or empty cell");
    if (width == 0) width = cells.size();
    if (cells.size() != width)
      throw InvalidInput(path.string() + ": line " + std::to_string(line_no) + ": expected " +
                         std::to_string(width) + " columns, found " + std::to_string(cells.size()));
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw InvalidInput(path.string() + ": no data rows");

  DataMatrix m(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
  return m;
}

SymMatrix read_covariance_csv(const std::filesystem::path& path) {
  DataMatrix m = read_csv_matrix(path);
  if (m.rows() != m.cols())
    throw InvalidInput(path.string() + ": covariance must be square, got " +
                       std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  return SymMatrix(std::move(m));
}

std::string format_double(double v) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(len));
}

void write_csv_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path.string());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
  if (!out) throw InvalidInput("write failed for " + path.string());
}

}  // namespace covadmm
