#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace glpcli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string normalize_key(std::string key) {
  for (auto& c : key) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (c == '_') c = '-';
  }
  return key;
}

ConfigFile read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open config file");
  ConfigFile cfg;
  cfg.path = path;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    const std::string where = path + ":" + std::to_string(line) + ": ";
    if (eq == std::string::npos) throw std::runtime_error(where + "expected 'key = value', got '" + text + "'");
    ConfigEntry e{normalize_key(trim(text.substr(0, eq))), trim(text.substr(eq + 1)), line};
    if (e.key.empty()) throw std::runtime_error(where + "missing key before '='");
    if (e.value.empty()) throw std::runtime_error(where + "missing value for '" + e.key + "'");
    for (const auto& prev : cfg.entries) {
      if (prev.key == e.key) {
        throw std::runtime_error(where + "'" + e.key + "' already set on line " + std::to_string(prev.line));
      }
    }
    cfg.entries.push_back(std::move(e));
  }
  return cfg;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string::npos ? text.size() : comma;
    const std::string item = trim(text.substr(start, end - start));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf" || t == "infinity") return INFINITY;
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || std::isnan(v)) {
    throw std::runtime_error(what + ": '" + text + "' is not a number");
  }
  return v;
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<int> out;
  for (const auto& item : split_list(text)) {
    const double v = parse_number(item, what);
    if (v != std::floor(v) || std::fabs(v) > 1e9) throw std::runtime_error(what + ": '" + item + "' is not an integer");
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw std::runtime_error(what + ": empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(parse_number(item, what));
  if (out.empty()) throw std::runtime_error(what + ": empty list");
  return out;
}

}  // namespace glpcli
