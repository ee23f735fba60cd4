#ifndef FIV_CSV_HPP
#define FIV_CSV_HPP

#include <string>
#include <vector>

#include "fiv/types.hpp"

namespace fiv {

/// Shortest round-trip decimal representation of a double ('.' separator).
std::string format_double(double v);

/// RFC 4180 quoting: fields containing commas, quotes or newlines are quoted,
/// embedded quotes doubled.
std::string csv_escape(const std::string& field);

struct CsvTable {
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> rows;
};

/// Parses an RFC 4180 file (header row mandatory, CRLF tolerated on input).
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

/// Writes with LF line endings and the escaping above.
void write_csv(const std::string& path, const CsvTable& table);
std::string render_csv(const CsvTable& table);

/// A CSV parsed into numbers, with an optional leading date column detected
/// by non-numeric content and kept out of the math.
struct NumericTable {
  std::vector<std::string> headers;  // numeric columns only
  MatrixXd values;
  std::string date_header;           // empty when no date column
  std::vector<std::string> dates;
};

/// Throws InvalidInputError naming the 1-based row and the column for missing
/// or non-numeric cells.
NumericTable to_numeric(const CsvTable& table);
NumericTable load_numeric_csv(const std::string& path);

/// Splits off the named outcome column; remaining columns become regressors.
Dataset make_dataset(const NumericTable& table, const std::string& outcome);

/// FNV-1a 64-bit digest of a byte string, as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& bytes);

/// Reads a whole file (binary); throws InvalidInputError when unreadable.
std::string read_file(const std::string& path);

}  // namespace fiv

#endif  // FIV_CSV_HPP
