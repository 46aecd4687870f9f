#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sphstat {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// mt19937_64 with hand-rolled variate transforms. The standard specifies the
// engine's output sequence but not the distribution adaptors, so all sampling
// goes through these fixed transforms to keep results identical across
// toolchains.
struct Rng {
  std::mt19937_64 gen;

  explicit Rng(std::uint64_t seed) : gen(seed) {}

  // Stream derivation for replication r of a run seeded with `base`.
  static std::uint64_t derive(std::uint64_t base, std::uint64_t stream) {
    return splitmix64(base + stream);
  }

  std::uint64_t raw() { return gen(); }

  // uniform on [0,1), 53-bit resolution
  double u01() { return double(gen() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * u01(); }

  double expo(double rate) { return -std::log1p(-u01()) / rate; }

  // Exact Poisson sampling by multiplication, chunked so the running product
  // never underflows for large means.
  std::uint64_t poisson(double lambda) {
    std::uint64_t total = 0;
    while (lambda > 0) {
      double chunk = lambda > 20.0 ? 20.0 : lambda;
      lambda -= chunk;
      double limit = std::exp(-chunk);
      std::uint64_t k = 0;
      double p = 1.0;
      do {
        ++k;
        p *= u01();
      } while (p > limit);
      total += k - 1;
    }
    return total;
  }
};

}  // namespace sphstat
