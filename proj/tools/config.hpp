#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "regext/model.hpp"

namespace regext::cli {

// Malformed or schema-violating configuration. `offset` is the byte position
// of a syntax error, or npos for schema problems.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::size_t offset = npos)
      : std::runtime_error(what), offset_(offset) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Reads {"rho", "sigma1", "sigma2", "lambda1", "lambda2", "c", "cost"} with
// cost {"type": "exp", "gamma"} or {"type": "quad", "alpha", "beta"}.
// Unknown keys are rejected so that typos do not fall back to defaults.
ParamBundle parse_config(std::string_view text);

// 64-bit FNV-1a, printed as 16 hex digits in manifests.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t v);

}  // namespace regext::cli
