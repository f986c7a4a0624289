#ifndef SMASH_CSV_HPP
#define SMASH_CSV_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "smash/types.hpp"

namespace smash::io {

/// Minimal CSV table: comma separated, header row required, no quoting
/// (fields here are numbers and plain identifiers).
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column position, or -1 when absent.
  int column(const std::string& name) const;
};

Table read_csv(std::istream& in);
Table read_csv_file(const std::string& path);

/// Strict numeric parsing; throws smash::Error on any trailing garbage.
double parse_double(const std::string& field);
std::int64_t parse_int(const std::string& field);

/// Shortest round-trip decimal representation (std::to_chars), locale-free.
std::string format_double(double v);

std::vector<double> numeric_column(const Table& t, const std::string& name);

}  // namespace smash::io

#endif
