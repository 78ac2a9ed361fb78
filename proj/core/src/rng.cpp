#include "dwlab/rng.hpp"

#include <cmath>
#include <numbers>

namespace dwlab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t CounterRng::next_u64() {
  // Mix stream and counter into the seed; each (seed,stream,counter) triple
  // yields an independent word.
  std::uint64_t word = splitmix64(seed_ ^ splitmix64(stream_ ^ splitmix64(counter_)));
  ++counter_;
  return word;
}

double CounterRng::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 shifted away from 0 so the log stays finite.
  double u1 = next_uniform();
  double u2 = next_uniform();
  u1 = std::max(u1, 0x1.0p-53);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  have_spare_ = true;
  return r * std::cos(phi);
}

Eigen::VectorXd CounterRng::gaussian_vector(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = next_gaussian();
  return v;
}

Eigen::VectorXd CounterRng::uniform_vector(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = next_uniform();
  return v;
}

}  // namespace dwlab
