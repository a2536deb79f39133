#pragma once

#include <greedylattice/greedylattice.h>

#include <memory>
#include <stdexcept>
#include <string>

namespace glpcli {

class ApiError : public std::runtime_error {
public:
  ApiError(glp_status status, const std::string& what) : std::runtime_error(what), status_(status) {}
  glp_status status() const noexcept { return status_; }

private:
  glp_status status_;
};

inline void check(glp_status s) {
  if (s != GLP_OK) throw ApiError(s, std::string(glp_status_name(s)) + ": " + glp_last_error());
}

struct FieldDeleter {
  void operator()(glp_field* f) const noexcept { glp_field_destroy(f); }
};
struct SolutionDeleter {
  void operator()(glp_solution* s) const noexcept { glp_solution_destroy(s); }
};
struct StringDeleter {
  void operator()(char* s) const noexcept { glp_string_free(s); }
};

using Field = std::unique_ptr<glp_field, FieldDeleter>;
using Solution = std::unique_ptr<glp_solution, SolutionDeleter>;

// Takes ownership of a string returned by the library.
inline std::string take_string(char* raw) {
  std::unique_ptr<char, StringDeleter> guard(raw);
  return raw != nullptr ? std::string(raw) : std::string();
}

}  // namespace glpcli
