#pragma once

// Seeded deterministic randomness for checks and fixtures.  Uniforms are
// derived from raw mt19937_64 bits (not std::uniform_real_distribution,
// whose output is implementation defined), so a given seed reproduces the
// same stream everywhere.

#include <cmath>
#include <cstdint>
#include <random>

#include "bicarleman/linalg.hpp"

namespace bicarleman {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  Complex complex_uniform() { return Complex{uniform(-1.0, 1.0), uniform(-1.0, 1.0)}; }

  ComplexVector vector(std::size_t n) {
    ComplexVector v(n);
    for (auto& z : v) z = complex_uniform();
    return v;
  }

  ComplexVector unit_vector(std::size_t n) {
    ComplexVector v = vector(n);
    double nn = norm(v);
    while (nn < 1e-3) {  // virtually never loops
      v = vector(n);
      nn = norm(v);
    }
    for (auto& z : v) z /= nn;
    return v;
  }

  ComplexMatrix matrix(std::size_t rows, std::size_t cols) {
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = complex_uniform();
    return m;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace bicarleman
