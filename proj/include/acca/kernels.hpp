#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Double-precision vector kernels behind a runtime-dispatched function table.
// The scalar table is the reference semantics; SIMD tables must match it
// within reduction-order rounding and are equivalence-tested against it.

namespace acca::kernels {

struct Backend {
  const char* name;
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // x *= a
  void (*scal)(double a, double* x, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  // sum of squares
  double (*sqnorm)(const double* x, std::size_t n);
  // sum of squared differences
  double (*sqdiff)(const double* x, const double* y, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
};

const Backend& scalar_backend();

// All tables compiled into this binary; scalar first, then ISA variants
// usable on this machine.
std::span<const Backend* const> backends();

// Table picked at startup: best ISA variant the CPU supports.
const Backend& active();

// Override the active table ("scalar", "avx2", "auto"). Returns false if the
// named table is unavailable. Intended for tests.
bool select(std::string_view name);

inline double dot(const double* x, const double* y, std::size_t n) {
  return active().dot(x, y, n);
}
inline void axpy(double a, const double* x, double* y, std::size_t n) {
  active().axpy(a, x, y, n);
}
inline void scal(double a, double* x, std::size_t n) { active().scal(a, x, n); }
inline double sum(const double* x, std::size_t n) { return active().sum(x, n); }
inline double sqnorm(const double* x, std::size_t n) { return active().sqnorm(x, n); }
inline double sqdiff(const double* x, const double* y, std::size_t n) {
  return active().sqdiff(x, y, n);
}
inline double max_abs(const double* x, std::size_t n) { return active().max_abs(x, n); }

}  // namespace acca::kernels
