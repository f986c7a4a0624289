#include "smash/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace smash::io {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

int Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return static_cast<int>(i);
  return -1;
}

Table read_csv(std::istream& in) {
  Table t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto fields = split_line(line);
    for (auto& f : fields) f = trimmed(f);
    if (!have_header) {
      t.header = std::move(fields);
      have_header = true;
    } else {
      if (fields.size() != t.header.size())
        throw Error("csv row has " + std::to_string(fields.size()) + " fields, header has " +
                    std::to_string(t.header.size()));
      t.rows.push_back(std::move(fields));
    }
  }
  if (!have_header) throw Error("csv input is empty (header row required)");
  return t;
}

Table read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);
  return read_csv(in);
}

double parse_double(const std::string& field) {
  double v = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    throw Error("not a number: '" + field + "'");
  return v;
}

std::int64_t parse_int(const std::string& field) {
  std::int64_t v = 0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    throw Error("not an integer: '" + field + "'");
  return v;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<double> numeric_column(const Table& t, const std::string& name) {
  const int c = t.column(name);
  if (c < 0) throw Error("missing csv column: " + name);
  std::vector<double> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) out.push_back(parse_double(row[static_cast<std::size_t>(c)]));
  return out;
}

}  // namespace smash::io
