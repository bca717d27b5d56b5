#pragma once

#include <functional>
#include <span>

#include "srrk/types.hpp"

namespace srrk {

// Matrix-free contract: algorithms see A only through matvecs. Operators hold
// immutable data, so concurrent applies are safe.
struct LinearOperator {
  std::size_t n = 0;
  std::function<void(std::span<const Complex>, std::span<Complex>)> apply;
  std::function<void(std::span<const Complex>, std::span<Complex>)> apply_adjoint;  // optional
  bool hermitian = false;  // structural hint set by generators

  Vector operator()(std::span<const Complex> x) const {
    Vector y(n);
    apply(x, y);
    return y;
  }
};

}  // namespace srrk
