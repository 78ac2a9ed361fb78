#include <doctest.h>

#include <cmath>

#include "dwlab/rng.hpp"

using namespace dwlab;

TEST_SUITE("rng") {
  TEST_CASE("counter generator is reproducible and stream-separated") {
    CounterRng a(123, 0), b(123, 0), c(123, 1);
    for (int i = 0; i < 32; ++i) {
      const auto va = a.next_u64();
      CHECK(va == b.next_u64());
      CHECK(va != c.next_u64());
    }
  }

  TEST_CASE("uniforms are in [0,1) with sane moments") {
    CounterRng rng(7, 0);
    double sum = 0, sumsq = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      const double u = rng.next_uniform();
      CHECK(u >= 0.0);
      CHECK(u < 1.0);
      sum += u;
      sumsq += u * u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
    CHECK(sumsq / n == doctest::Approx(1.0 / 3.0).epsilon(0.03));
  }

  TEST_CASE("gaussians have unit variance and zero mean") {
    CounterRng rng(99, 4);
    double sum = 0, sumsq = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
      const double g = rng.next_gaussian();
      sum += g;
      sumsq += g * g;
    }
    CHECK(std::abs(sum / n) < 0.03);
    CHECK(sumsq / n == doctest::Approx(1.0).epsilon(0.05));
  }
}
