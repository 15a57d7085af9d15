#include "pdc/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace pdc {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

static bool needs_quoting(const std::string& cell) {
  return cell.find_first_of(",\"\n\r") != std::string::npos;
}

static void write_cell(std::ofstream& out, const std::string& cell) {
  if (!needs_quoting(cell)) {
    out << cell;
    return;
  }
  out << '"';
  for (char ch : cell) {
    if (ch == '"') out << '"';
    out << ch;
  }
  out << '"';
}

static void write_row(std::ofstream& out, const std::vector<std::string>& row) {
  for (size_t i = 0; i < row.size(); ++i) {
    if (i) out << ',';
    write_cell(out, row[i]);
  }
  out << '\n';
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  for (const auto& row : table.rows)
    if (row.size() != table.header.size())
      throw std::invalid_argument("csv row width does not match header");
  write_row(out, table.header);
  for (const auto& row : table.rows) write_row(out, row);
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  bool cell_started = false;
  size_t i = 0;
  auto end_cell = [&] {
    row.push_back(cell);
    cell.clear();
    quoted = false;
    cell_started = false;
  };
  auto end_row = [&] {
    end_cell();
    rows.push_back(std::move(row));
    row.clear();
  };
  while (i < text.size()) {
    char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += ch;
      }
      ++i;
      continue;
    }
    if (ch == '"' && !cell_started) {
      quoted = true;
      cell_started = true;
    } else if (ch == ',') {
      end_cell();
    } else if (ch == '\n' || ch == '\r') {
      if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_row();
    } else {
      cell += ch;
      cell_started = true;
    }
    ++i;
  }
  if (quoted) throw std::runtime_error("unterminated quoted cell in '" + path + "'");
  if (cell_started || !row.empty()) end_row();

  if (rows.empty()) throw std::runtime_error("'" + path + "' has no header row");
  CsvTable table;
  table.header = std::move(rows.front());
  table.rows.assign(std::make_move_iterator(rows.begin() + 1), std::make_move_iterator(rows.end()));
  for (const auto& r : table.rows)
    if (r.size() != table.header.size())
      throw std::runtime_error("ragged row in '" + path + "'");
  return table;
}

}  // namespace pdc
