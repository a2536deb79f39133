#pragma once

#include <map>
#include <string>
#include <vector>

namespace glpcli {

struct ConfigEntry {
  std::string key;  // normalized: lower case, '_' replaced by '-'
  std::string value;
  int line = 0;
};

struct ConfigFile {
  std::string path;
  std::vector<ConfigEntry> entries;
};

// Flat "key = value" file; '#' starts a comment. Throws std::runtime_error
// with "path:line:" diagnostics for malformed lines and repeated keys.
ConfigFile read_config(const std::string& path);

std::string normalize_key(std::string key);

// Splits "8,10,12" into trimmed, nonempty items.
std::vector<std::string> split_list(const std::string& text);
std::vector<int> parse_int_list(const std::string& text, const std::string& what);
std::vector<double> parse_double_list(const std::string& text, const std::string& what);
double parse_number(const std::string& text, const std::string& what);

}  // namespace glpcli
