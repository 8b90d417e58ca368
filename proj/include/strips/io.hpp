#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace strips::io {

// Shortest round-trip decimal for a double (17 significant digits).
std::string format_g17(double v);

// Write via temp file + rename so readers never observe partial output.
void write_text_atomic(const std::string& path, const std::string& content);

struct Table {
  std::string header;  // comma-separated column names
  std::vector<std::vector<double>> rows;
};

void write_csv(const Table& table, const std::string& path);
Table read_csv(const std::string& path);

// gnuplot-ready twin of a CSV table: "# " header, space-separated columns.
void write_dat(const Table& table, const std::string& path);

std::uint64_t file_digest(const std::string& path);

}  // namespace strips::io
