#pragma once

#include <functional>
#include <string>

#include "srrk/types.hpp"

namespace srrk {

// Scalar function f lifted to matrices through the Schur form. `in_domain`
// guards branch cuts and poles; leaving it empty means f is entire.
struct ScalarFunction {
  std::string name;
  std::function<Complex(Complex)> eval;
  std::function<bool(Complex)> in_domain;

  bool defined_at(Complex z) const { return !in_domain || in_domain(z); }
};

}  // namespace srrk
