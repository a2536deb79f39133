#include "store.hpp"

#include <greedylattice/greedylattice.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace glpcli {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(tmp.string() + ": cannot write");
    out << content;
    out.flush();
    if (!out) throw std::runtime_error(tmp.string() + ": write failed");
  }
  fs::rename(tmp, path);
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path.string() + ": cannot open");
  CsvTable t;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_fields(line);
    if (t.header.empty()) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(number) + ": expected " +
                               std::to_string(t.header.size()) + " fields, found " + std::to_string(fields.size()));
    }
    t.rows.push_back(std::move(fields));
    t.lines.push_back(number);
  }
  return t;
}

std::string csv_line(const std::vector<std::string>& fields) {
  std::string s;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) s += ',';
    s += fields[i];
  }
  s += '\n';
  return s;
}

void append_csv(const fs::path& path, const std::vector<std::string>& header,
                const std::vector<std::vector<std::string>>& rows) {
  const bool exists = fs::exists(path);
  if (exists) {
    const CsvTable t = read_csv(path);
    if (!t.header.empty() && t.header != header) {
      throw std::runtime_error(path.string() + ": existing header does not match this schema");
    }
  } else if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error(path.string() + ": cannot append");
  if (!exists) out << csv_line(header);
  for (const auto& r : rows) out << csv_line(r);
  out.flush();
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

Manifest::Manifest(fs::path root) : path_(std::move(root) / "manifest.json") {
  if (fs::exists(path_)) {
    try {
      data_ = nlohmann::json::parse(read_file(path_));
    } catch (const nlohmann::json::parse_error& e) {
      throw std::runtime_error(path_.string() + ": not valid JSON: " + e.what());
    }
  }
  if (!data_.is_object()) data_ = nlohmann::json::object();
  data_["tool"] = "glp";
  data_["version"] = glp_version();
  if (!data_.contains("files") || !data_["files"].is_object()) data_["files"] = nlohmann::json::object();
}

const nlohmann::json* Manifest::find(const std::string& relative_path) const {
  const auto& files = data_["files"];
  const auto it = files.find(relative_path);
  return it == files.end() ? nullptr : &*it;
}

void Manifest::record(const std::string& relative_path, nlohmann::json entry) {
  data_["files"][relative_path] = std::move(entry);
}

void Manifest::save() const { write_file_atomic(path_, data_.dump(2) + "\n"); }

}  // namespace glpcli
