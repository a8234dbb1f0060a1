#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace kpo {

// Shortest decimal representation that parses back to the identical double;
// "nan", "inf", "-inf" for non-finite values. Locale independent.
std::string format_number(double value);

// Strict locale-independent parse of a full token; throws InvalidArgument.
double parse_number(std::string_view token);

// Minimal CSV table builder: optional '#' comment lines, a header row, then
// rows. Fields are numeric or plain identifiers, so no quoting is needed.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_comment(const std::string& line);
  void add_row(const std::vector<double>& values);
  void add_row(const std::vector<std::string>& fields);

  std::string str() const;

 private:
  std::vector<std::string> comments_;
  std::vector<std::string> header_;
  std::vector<std::string> rows_;
};

// Writes content to path.tmp and renames it over path. Creates parent
// directories as needed.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace kpo
