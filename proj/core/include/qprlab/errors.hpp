#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qprlab {

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Decode failure; carries the index of the offending gate (or npos for
// payload-level problems such as a bad length).
struct ParseError : std::runtime_error {
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  ParseError(const std::string& what, std::size_t gate_index = npos)
      : std::runtime_error(what), gate_index(gate_index) {}

  std::size_t gate_index;
};

}  // namespace qprlab
