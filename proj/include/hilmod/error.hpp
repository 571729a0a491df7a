#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hilmod {

enum class ErrorKind {
  NotHermitian,
  NotPositive,
  Singular,
  ShapeMismatch,
  ZeroElement,
  NotLinear,
  NotFull,
  NotSesquilinear,
  NotPositiveOperator,
  SingularOperator,
  ResidualTooLarge,
  NotNested,
  LevelCertificateFailed,
  ParseError,
  ValidationError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Single exception type for the library. `index` carries the offending block,
// level or missing dimension when the error kind has one; `path` carries the
// JSON field path for scenario validation errors.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what,
        std::optional<std::size_t> index = std::nullopt, std::string path = {})
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind),
        index_(index),
        path_(std::move(path)) {}

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> index() const noexcept { return index_; }
  const std::string& path() const noexcept { return path_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> index_;
  std::string path_;
};

}  // namespace hilmod
