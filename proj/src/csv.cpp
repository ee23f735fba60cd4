#include "fiv/csv.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace fiv {

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CsvTable parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;

  auto end_field = [&]() {
    record.push_back(field);
    field.clear();
    field_started = false;
  };
  auto end_record = [&]() {
    end_field();
    records.push_back(record);
    record.clear();
  };

  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field_started && field.empty()) {
          quoted = true;
          field_started = true;
        } else {
          field += c;
        }
        break;
      case ',': end_field(); field_started = false; break;
      case '\r':
        break;  // tolerate CRLF input
      case '\n': end_record(); break;
      default:
        field += c;
        field_started = true;
        break;
    }
  }
  if (quoted) throw InvalidInputError("csv: unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) end_record();

  if (records.empty()) throw InvalidInputError("csv: empty file (header row required)");
  CsvTable table;
  table.headers = records.front();
  const size_t width = table.headers.size();
  for (size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() == 1 && records[r][0].empty()) continue;  // blank trailing line
    if (records[r].size() != width)
      throw InvalidInputError("csv: row " + std::to_string(r + 1) + " has " +
                              std::to_string(records[r].size()) + " fields, expected " +
                              std::to_string(width));
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

CsvTable read_csv(const std::string& path) { return parse_csv(read_file(path)); }

std::string render_csv(const CsvTable& table) {
  std::string out;
  auto append_row = [&](const std::vector<std::string>& row) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(row[i]);
    }
    out += '\n';
  };
  append_row(table.headers);
  for (const auto& row : table.rows) append_row(row);
  return out;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot write file: " + path);
  out << render_csv(table);
}

namespace {

bool parse_number(const std::string& cell, double& out) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end > begin && (end[-1] == ' ' || end[-1] == '\t')) --end;
  if (begin == end) return false;
  auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end;
}

}  // namespace

NumericTable to_numeric(const CsvTable& table) {
  if (table.headers.empty()) throw InvalidInputError("csv: no columns");
  const size_t ncol = table.headers.size();
  const size_t nrow = table.rows.size();
  if (nrow == 0) throw InvalidInputError("csv: no data rows");

  // Leading date column: excluded when any of its cells is non-numeric.
  size_t first = 0;
  double tmp;
  for (const auto& row : table.rows) {
    if (!parse_number(row[0], tmp)) {
      first = 1;
      break;
    }
  }
  if (first == 1 && ncol < 2) throw InvalidInputError("csv: only a date column present");

  NumericTable out;
  if (first == 1) {
    out.date_header = table.headers[0];
    out.dates.reserve(nrow);
    for (const auto& row : table.rows) out.dates.push_back(row[0]);
  }
  out.headers.assign(table.headers.begin() + static_cast<long>(first), table.headers.end());
  out.values.resize(static_cast<long>(nrow), static_cast<long>(ncol - first));
  for (size_t r = 0; r < nrow; ++r) {
    for (size_t c = first; c < ncol; ++c) {
      const std::string& cell = table.rows[r][c];
      double v;
      if (!parse_number(cell, v)) {
        std::string what = cell.empty() ? "missing value" : "non-numeric value '" + cell + "'";
        throw InvalidInputError("csv: " + what + " at row " + std::to_string(r + 2) +
                                ", column " + table.headers[c]);
      }
      out.values(static_cast<long>(r), static_cast<long>(c - first)) = v;
    }
  }
  return out;
}

NumericTable load_numeric_csv(const std::string& path) { return to_numeric(read_csv(path)); }

Dataset make_dataset(const NumericTable& table, const std::string& outcome) {
  long ycol = -1;
  for (size_t i = 0; i < table.headers.size(); ++i)
    if (table.headers[i] == outcome) {
      ycol = static_cast<long>(i);
      break;
    }
  if (ycol < 0) throw InvalidInputError("outcome column not found: " + outcome);
  const long K = table.values.cols() - 1;
  if (K < 1) throw InvalidInputError("no regressor columns besides the outcome");

  MatrixXd X(table.values.rows(), K);
  std::vector<std::string> labels;
  long k = 0;
  for (long c = 0; c < table.values.cols(); ++c) {
    if (c == ycol) continue;
    X.col(k++) = table.values.col(c);
    labels.push_back(table.headers[static_cast<size_t>(c)]);
  }
  return Dataset(X, table.values.col(ycol), labels);
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  static const char* digits = "0123456789abcdef";
  for (int i = 15; i >= 0; --i) {
    buf[i] = digits[h & 0xf];
    h >>= 4;
  }
  buf[16] = '\0';
  return std::string(buf, 16);
}

}  // namespace fiv
