#pragma once

#include <string>
#include <vector>

namespace pdc {

// Minimal RFC-4180 CSV: header row + data rows; cells containing comma,
// quote, or newline are quoted on write and unquoted on read. Numeric cells
// use 17 significant digits so write/read round-trips doubles exactly.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string format_double(double v);

void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

}  // namespace pdc
