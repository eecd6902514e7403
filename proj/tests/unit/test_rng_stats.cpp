#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "gfs/rng.hpp"
#include "gfs/stats.hpp"
#include "oracles.hpp"

using namespace gfs;

TEST_CASE("Philox4x32-10 known-answer vector") {
  // Random123 reference: counter 0, key 0.
  Philox4x32 g(0, 0);
  const std::array<std::uint32_t, 4> want{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u};
  for (std::uint32_t w : want) CHECK(g() == w);
}

TEST_CASE("streams are reproducible and distinct") {
  Philox4x32 a(42, stream_id(3, 1)), b(42, stream_id(3, 1)), c(42, stream_id(3, 2)), d(43, stream_id(3, 1));
  bool differs_c = false, differs_d = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    differs_c |= x != c();
    differs_d |= x != d();
  }
  CHECK(differs_c);
  CHECK(differs_d);
  CHECK(stream_id(1, 0) != stream_id(0, 1));
}

TEST_CASE("uniform and normal variates pass moment and KS tests") {
  Philox4x32 g(7, 0);
  std::vector<double> u(20000), z(20000);
  for (double& x : u) {
    x = g.uniform();
    REQUIRE(x > 0.0);
    REQUIRE(x < 1.0);
  }
  for (double& x : z) x = g.normal();
  const SampleSummary s = summarize(z);
  CHECK(std::abs(s.mean) < 4.0 * s.std_error);
  CHECK(std::abs(s.variance - 1.0) < 4.0 * s.variance_std_error);
  // A shifted sample is rejected.
  for (double& x : z) x += 0.1;
  CHECK(ks_statistic(z, oracle::normal_cdf) > ks_critical_95(z.size()));
}

TEST_CASE("KS rejection rate over many streams matches the 5% level") {
  // 200 independent streams: the count of 95% rejections is Binomial(200, 0.05).
  int rejected_u = 0, rejected_z = 0;
  std::vector<double> u(2000), z(2000);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Philox4x32 g(seed, 0);
    for (double& x : u) x = g.uniform();
    for (double& x : z) x = g.normal();
    rejected_u += ks_statistic(u, [](double x) { return std::clamp(x, 0.0, 1.0); }) > ks_critical_95(u.size());
    rejected_z += ks_statistic(z, oracle::normal_cdf) > ks_critical_95(z.size());
  }
  CHECK(rejected_u <= 21);
  CHECK(rejected_z <= 21);
}

TEST_CASE("sample summary") {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  const SampleSummary s = summarize(v);
  CHECK(s.n == 4);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.variance == doctest::Approx(5.0 / 3.0));
  CHECK(s.std_error == doctest::Approx(std::sqrt(5.0 / 12.0)));
  CHECK(ks_critical_95(100) == doctest::Approx(1.3581 / 10.0).epsilon(1e-3));
}
