#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "vdcs/errors.hpp"
#include "vdcs/rng.hpp"

using namespace vdcs;

// Known-answer vectors generated with an independent Philox4x64-10
// implementation (numpy.random.Philox; numpy pre-increments its counter,
// so its block for counter c equals the raw cipher at c+1).
TEST_CASE("philox4x64 known-answer vectors") {
  SUBCASE("zero key, zero counter") {
    const auto out = philox4x64({0, 0}, {0, 0, 0, 0});
    CHECK(out[0] == 0x16554d9eca36314cULL);
    CHECK(out[1] == 0xdb20fe9d672d0fdcULL);
    CHECK(out[2] == 0xd7e772cee186176bULL);
    CHECK(out[3] == 0x7e68b68aec7ba23bULL);
    const auto next = philox4x64({0, 0}, {1, 0, 0, 0});
    CHECK(next[0] == 0x02f4ba6408e4d89bULL);
    CHECK(next[1] == 0x3dd62b0b9ca8c5b2ULL);
    CHECK(next[2] == 0x1c8667a55d902e79ULL);
    CHECK(next[3] == 0x907d7a052fd5b4dcULL);
  }
  SUBCASE("mixed key and counter") {
    const auto out = philox4x64({0xdeadbeefcafef00dULL, 0x0123456789abcdefULL}, {1, 2, 3, 4});
    CHECK(out[0] == 0xa1a15ee204d0dc6aULL);
    CHECK(out[1] == 0x6230ba6e33594eefULL);
    CHECK(out[2] == 0x13c02bcf9fec2165ULL);
    CHECK(out[3] == 0x4bdc999149fc2a11ULL);
  }
  SUBCASE("all-ones key and counter") {
    const std::uint64_t ones = ~0ULL;
    const auto out = philox4x64({ones, ones}, {ones, ones, ones, ones});
    CHECK(out[0] == 0x87b092c3013fe90bULL);
    CHECK(out[1] == 0x438c3c67be8d0224ULL);
    CHECK(out[2] == 0x9cc7d7c69cd777b6ULL);
    CHECK(out[3] == 0xa09caebf594f0ba0ULL);
  }
}

TEST_CASE("stream draws walk the philox blocks in order") {
  // With the raw zero key the stream must reproduce the KAT sequence.
  RngStream s;
  std::vector<std::uint64_t> expected = {
      0x16554d9eca36314cULL, 0xdb20fe9d672d0fdcULL, 0xd7e772cee186176bULL,
      0x7e68b68aec7ba23bULL, 0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL,
  };
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(s.counter() == i);
    CHECK(s.next_u64() == expected[i]);
  }
}

TEST_CASE("same seed same sequence; different substreams differ") {
  RngStream a = RngStream::from_seed(1234);
  RngStream b = RngStream::from_seed(1234);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  RngStream s1 = RngStream::from_seed(7).substream(1, 0);
  RngStream s2 = RngStream::from_seed(7).substream(2, 0);
  RngStream s3 = RngStream::from_seed(7).substream(1, 1);
  std::set<std::uint64_t> firsts = {s1.next_u64(), s2.next_u64(), s3.next_u64()};
  CHECK(firsts.size() == 3);

  // Substream derivation ignores the parent's position.
  RngStream parent = RngStream::from_seed(99);
  RngStream d1 = parent.substream(5);
  parent.next_u64();
  RngStream d2 = parent.substream(5);
  CHECK(d1.next_u64() == d2.next_u64());
}

TEST_CASE("uniform01 lies in [0,1) and uniform respects bounds") {
  RngStream s = RngStream::from_seed(42);
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  for (int i = 0; i < 10000; ++i) {
    const double v = s.uniform(3.0, 10.0);
    CHECK(v >= 3.0);
    CHECK(v < 10.0);
  }
  for (int i = 0; i < 1000; ++i) {
    CHECK(s.uniform_int(7) < 7);
  }
  CHECK_THROWS_AS(s.uniform_int(0), ValidationError);
}

// Reference values from scipy.stats.norm.ppf.
TEST_CASE("inverse normal CDF matches the reference quantiles") {
  const struct {
    double p;
    double q;
  } cases[] = {
      {0.5, 0.0},
      {0.025, -1.9599639845400545},
      {0.975, 1.959963984540054},
      {1e-9, -5.9978070150076865},
      {0.999999999, 5.997807019601637},
      {0.1, -1.2815515655446004},
      {0.9, 1.2815515655446004},
      {1e-300, -37.0470962993612},
      {0.3, -0.5244005127080409},
      {0.7, 0.5244005127080407},
      {0.001, -3.090232306167813},
  };
  for (const auto& c : cases) {
    CHECK(std::fabs(inverse_normal_cdf(c.p) - c.q) < 1e-9);
  }
  CHECK_THROWS_AS(inverse_normal_cdf(0.0), ValidationError);
  CHECK_THROWS_AS(inverse_normal_cdf(1.0), ValidationError);
}

TEST_CASE("normal draws have the right moments") {
  RngStream s = RngStream::from_seed(2024);
  const int n = 200000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = s.normal();
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(std::fabs(mean) < 0.01);
  CHECK(std::fabs(std::sqrt(var) - 1.0) < 0.01);
  CHECK(s.counter() == static_cast<std::uint64_t>(n));
}
