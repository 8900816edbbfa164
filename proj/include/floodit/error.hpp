#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace floodit {

// Bad arguments to an operation (out-of-range vertex, invalid cover, ...).
class input_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Malformed board or graph text. Carries the 1-based line number.
class parse_error : public std::runtime_error {
public:
  parse_error(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

// A solver refused or gave up: palette over the cap, table or state budget exhausted.
class capacity_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A constructed move sequence failed replay validation.
class construction_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace floodit
