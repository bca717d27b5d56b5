#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace srrk {

using Complex = std::complex<double>;
using Vector = std::vector<Complex>;

// Unit roundoff of IEEE double (2^-53).
inline constexpr double unit_roundoff = std::numeric_limits<double>::epsilon() / 2.0;

inline Complex dot(std::span<const Complex> x, std::span<const Complex> y) {
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

inline double norm2(std::span<const Complex> x) {
  double s = 0.0;
  for (const Complex& v : x) s += std::norm(v);
  return std::sqrt(s);
}

// y += alpha * x
inline void axpy(Complex alpha, std::span<const Complex> x, std::span<Complex> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scal(Complex alpha, std::span<Complex> x) {
  for (Complex& v : x) v *= alpha;
}

inline Vector zeros(std::size_t n) { return Vector(n, Complex{0.0, 0.0}); }

inline Vector unit_vector(std::size_t n, std::size_t j) {
  Vector e(n, Complex{0.0, 0.0});
  e[j] = 1.0;
  return e;
}

}  // namespace srrk
