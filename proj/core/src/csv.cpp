#include "matreg/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace matreg {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    // trim surrounding whitespace
    size_t b = cell.find_first_not_of(" \t\r");
    size_t e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool parses_as_number(const std::string& cell) {
  if (cell.empty()) return true;  // missing values impute to zero
  char* end = nullptr;
  std::strtod(cell.c_str(), &end);
  return end == cell.c_str() + cell.size();
}

}  // namespace

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_csv: cannot open '" + path + "'");
  CsvTable table;
  std::string line;
  bool first = true;
  size_t line_no = 0;
  size_t expected_cols = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells = split_line(line);
    if (first) {
      first = false;
      bool header = false;
      for (const auto& c : cells)
        if (!parses_as_number(c)) header = true;
      if (header) {
        table.header = std::move(cells);
        expected_cols = table.header.size();
        continue;
      }
      expected_cols = cells.size();
    }
    if (cells.size() != expected_cols)
      throw std::runtime_error("read_csv: '" + path + "' line " + std::to_string(line_no) +
                               " has " + std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(expected_cols));
    table.rows.push_back(std::move(cells));
  }
  return table;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open '" + path + "' for writing");
  const auto emit_row = [&](const std::vector<std::string>& row) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << '\n';
  };
  if (!table.header.empty()) emit_row(table.header);
  for (const auto& row : table.rows) emit_row(row);
  if (!out) throw std::runtime_error("write_csv: write to '" + path + "' failed");
}

Matrix csv_to_matrix(const CsvTable& table, const std::string& path) {
  Matrix m(table.n_rows(), table.n_cols());
  for (Index i = 0; i < table.n_rows(); ++i) {
    const auto& row = table.rows[static_cast<size_t>(i)];
    for (Index j = 0; j < table.n_cols(); ++j) {
      const std::string& cell = row[static_cast<size_t>(j)];
      if (cell.empty()) {
        m(i, j) = 0.0;  // imputation rule for missing cells
        continue;
      }
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end != cell.c_str() + cell.size())
        throw std::runtime_error("csv_to_matrix: '" + path + "' row " + std::to_string(i + 1) +
                                 " column " + std::to_string(j + 1) + ": cannot parse '" + cell +
                                 "'");
      m(i, j) = v;
    }
  }
  return m;
}

}  // namespace matreg
