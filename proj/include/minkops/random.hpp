#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace minkops {

/// Seeded generator with platform-independent variate transforms.
///
/// The engine is std::mt19937_64; the uniform and normal transforms are
/// written out here because the standard distributions are
/// implementation-defined and corpora must regenerate bit-identically.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  /// Standard normal via Box-Muller.
  double normal();
  Eigen::VectorXd gaussian_vector(int n);
  Eigen::VectorXd unit_vector(int n);
  /// Derives an independent child seed (splitmix64 of the next draw).
  std::uint64_t fork_seed();

 private:
  std::mt19937_64 engine_;
};

}  // namespace minkops
