#pragma once

#include <cstdint>

namespace sphstat {

// Radical-inverse (van der Corput) value of index i >= 1 in the given base.
inline double radical_inverse(std::uint64_t i, unsigned base) {
  double inv = 1.0 / base, scale = inv, v = 0.0;
  while (i > 0) {
    v += double(i % base) * scale;
    i /= base;
    scale *= inv;
  }
  return v;
}

inline constexpr unsigned kHaltonPrimes[8] = {2, 3, 5, 7, 11, 13, 17, 19};

// Halton point component d (prime base) of index i, shifted modulo 1.
inline double halton_shifted(std::uint64_t i, unsigned dim_index, double shift) {
  double v = radical_inverse(i, kHaltonPrimes[dim_index]) + shift;
  return v < 1.0 ? v : v - 1.0;
}

}  // namespace sphstat
