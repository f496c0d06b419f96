#pragma once

#include "matreg/types.hpp"

#include <string>
#include <vector>

namespace matreg {

/// Parsed CSV content: optional header row plus string cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  Index n_rows() const { return static_cast<Index>(rows.size()); }
  Index n_cols() const { return rows.empty() ? static_cast<Index>(header.size())
                                             : static_cast<Index>(rows.front().size()); }
};

/// Read a comma-separated UTF-8 file. A first row containing any non-numeric,
/// non-empty cell is treated as a header. Throws with the path on failure.
CsvTable read_csv(const std::string& path);

void write_csv(const std::string& path, const CsvTable& table);

/// Numeric view of a table; empty/missing cells impute to 0. Parse failures
/// report the path, row, and column.
Matrix csv_to_matrix(const CsvTable& table, const std::string& path);

}  // namespace matreg
