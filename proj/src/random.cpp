#include "minkops/random.hpp"

#include <cmath>
#include <numbers>

namespace minkops {

double Rng::normal() {
  // 1 - uniform() lies in (0, 1], so the logarithm is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Eigen::VectorXd Rng::gaussian_vector(int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = normal();
  return v;
}

Eigen::VectorXd Rng::unit_vector(int n) {
  while (true) {
    Eigen::VectorXd v = gaussian_vector(n);
    const double len = v.norm();
    if (len > 1e-8) return v / len;
  }
}

std::uint64_t Rng::fork_seed() {
  std::uint64_t z = engine_() + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace minkops
