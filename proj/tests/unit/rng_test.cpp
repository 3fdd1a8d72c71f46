#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "esdrl/common/rng.hpp"

using esdrl::Rng;

TEST_CASE("identical seeds give identical sequences") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
}

TEST_CASE("streams with different ids diverge") {
  Rng a = Rng::stream(7, 0);
  Rng b = Rng::stream(7, 1);
  CHECK(a.next_u64() != b.next_u64());
}

TEST_CASE("uniform stays in [0,1) and fills the range") {
  Rng r(3);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 20000; ++i) {
    double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
}

TEST_CASE("normal has roughly unit moments") {
  Rng r(11);
  const int n = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = r.normal();
    sum += x;
    sumsq += x * x;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("uniform_index bounds") {
  Rng r(5);
  for (int i = 0; i < 1000; ++i) {
    CHECK(r.uniform_index(7) < 7);
  }
}
