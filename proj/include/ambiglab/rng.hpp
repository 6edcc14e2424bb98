#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ambiglab {

/// SplitMix64 finalizer. Used to derive independent stream seeds from a
/// master seed and a counter, so work items can be generated in any order.
std::uint64_t splitmix64(std::uint64_t x);

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  double normal() { return normal_(engine_); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  bool coin() { return uniform_int(0, 1) == 1; }
  std::uint64_t next() { return engine_(); }

  /// Standard normal draw with |value| >= margin.
  double normal_away_from_zero(double margin) {
    double v = normal();
    while (std::abs(v) < margin) v = normal();
    return v;
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace ambiglab
