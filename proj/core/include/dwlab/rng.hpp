// Counter-based deterministic random numbers for reproducible experiments.
#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace dwlab {

// Stateless counter generator ("splitmix64-counter"): output k depends only on
// (seed, stream, k), so runs are byte-reproducible across platforms and the
// draw order can be parallelized without coordination. Gaussians come from
// Box-Muller on the raw uniforms; std::normal_distribution is
// implementation-defined and is deliberately not used.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64();
  // Uniform in [0, 1), 53-bit resolution.
  double next_uniform();
  // Standard normal.
  double next_gaussian();

  Eigen::VectorXd gaussian_vector(Eigen::Index n);
  Eigen::VectorXd uniform_vector(Eigen::Index n);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  static constexpr const char* kGeneratorName = "splitmix64-counter";

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dwlab
