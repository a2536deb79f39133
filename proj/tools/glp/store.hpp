#pragma once

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

namespace glpcli {

std::uint64_t fnv1a64(const std::string& text);
std::string hex64(std::uint64_t value);

// %.17g, with "inf", "-inf" and "nan" spelled out.
std::string format_number(double x);

std::string read_file(const std::filesystem::path& path);
// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> lines;  // source line of each row
};

// Comma-separated, no quoting; every row must match the header width.
CsvTable read_csv(const std::filesystem::path& path);
std::string csv_line(const std::vector<std::string>& fields);

// Appends rows, creating the file with its header first if needed. The
// existing header must match.
void append_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows);

// manifest.json at the output root: one entry per written file, keyed by the
// path relative to the root.
class Manifest {
public:
  explicit Manifest(std::filesystem::path root);

  // Entry for a file, or nullptr.
  const nlohmann::json* find(const std::string& relative_path) const;
  void record(const std::string& relative_path, nlohmann::json entry);
  void save() const;

private:
  std::filesystem::path path_;
  nlohmann::json data_;
};

}  // namespace glpcli
