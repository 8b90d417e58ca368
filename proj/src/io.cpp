#include "strips/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "strips/util.hpp"

namespace strips::io {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open for write: " + tmp);
    os << content;
    if (!os) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed: " + path);
}

void write_csv(const Table& table, const std::string& path) {
  std::ostringstream os;
  os << table.header << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ",";
      os << format_g17(row[c]);
    }
    os << "\n";
  }
  write_text_atomic(path, os.str());
}

Table read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path);
  Table tab;
  if (!std::getline(is, tab.header)) throw std::runtime_error("csv: missing header: " + path);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    const char* p = line.c_str();
    char* end = nullptr;
    while (true) {
      row.push_back(std::strtod(p, &end));
      if (end == p) throw std::runtime_error("csv: parse error in " + path + ": " + line);
      p = end;
      if (*p == ',') {
        ++p;
        continue;
      }
      break;
    }
    tab.rows.push_back(std::move(row));
  }
  return tab;
}

void write_dat(const Table& table, const std::string& path) {
  std::ostringstream os;
  os << "# ";
  for (char ch : table.header) os << (ch == ',' ? ' ' : ch);
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << " ";
      os << format_g17(row[c]);
    }
    os << "\n";
  }
  write_text_atomic(path, os.str());
}

std::uint64_t file_digest(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  const std::string s = ss.str();
  return fnv1a64(s.data(), s.size());
}

}  // namespace strips::io
