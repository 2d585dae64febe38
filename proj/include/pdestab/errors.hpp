#pragma once

#include <stdexcept>
#include <string>

namespace pdestab {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Shape disagreement between operands (matrix products, equate, grids).
struct DimensionError : Error {
  explicit DimensionError(const std::string& what) : Error(what) {}
};

// A product of two decision-bearing operands would leave the linear regime.
struct BilinearityError : Error {
  explicit BilinearityError(const std::string& what) : Error(what) {}
};

// Malformed or inconsistent model document.
struct SchemaError : Error {
  explicit SchemaError(const std::string& what) : Error(what) {}
};

}  // namespace pdestab
