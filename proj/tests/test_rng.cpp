#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "curio/rng.hpp"
#include "doctest.h"

using namespace curio;

TEST_CASE("mix64 is a bijective finalizer with no fixed junk") {
  // distinct inputs -> distinct outputs on a small probe set
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(rng::mix64(i));
  CHECK(seen.size() == 1000);
  // avalanche sanity: flipping one input bit flips roughly half the output
  int flips = 0;
  for (int b = 0; b < 64; ++b) {
    const std::uint64_t d = rng::mix64(0x12345678u) ^ rng::mix64(0x12345678u ^ (1ull << b));
    flips += __builtin_popcountll(d);
  }
  const double avg = flips / 64.0;
  CHECK(avg > 24.0);
  CHECK(avg < 40.0);
}

TEST_CASE("streams are deterministic and disjoint across tags and indices") {
  rng::Stream a(42, rng::Tag::Policy, 7);
  rng::Stream b(42, rng::Tag::Policy, 7);
  for (int i = 0; i < 16; ++i) CHECK(a.next_u64() == b.next_u64());

  rng::Stream c(42, rng::Tag::Env, 7);
  rng::Stream d(42, rng::Tag::Policy, 8);
  rng::Stream e(43, rng::Tag::Policy, 7);
  rng::Stream f(42, rng::Tag::Policy, 7, 1);
  rng::Stream g(42, rng::Tag::Policy, 7);
  const std::uint64_t first = g.next_u64();
  CHECK(c.next_u64() != first);
  CHECK(d.next_u64() != first);
  CHECK(e.next_u64() != first);
  CHECK(f.next_u64() != first);
}

TEST_CASE("uniform ranges and moments") {
  rng::Stream s(1, rng::Tag::Misc, 0);
  double sum = 0.0, sumsq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = s.next_uniform();
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
    sum += u;
    sumsq += u * u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(sumsq / n - (sum / n) * (sum / n) ==
        doctest::Approx(1.0 / 12.0).epsilon(0.05));

  rng::Stream t(1, rng::Tag::Misc, 1);
  for (int i = 0; i < 10000; ++i) {
    const double u = t.next_uniform_co();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }

  rng::Stream r(1, rng::Tag::Misc, 2);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.next_uniform(-2.0, 3.0);
    CHECK(u >= -2.0);
    CHECK(u <= 3.0);
  }
}

TEST_CASE("normals have the right moments and are always finite") {
  rng::Stream s(9, rng::Tag::Init, 0);
  double sum = 0.0, sumsq = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double z = s.next_normal();
    REQUIRE(std::isfinite(z));
    sum += z;
    sumsq += z * z;
  }
  CHECK(sum / n == doctest::Approx(0.0).epsilon(1).scale(0.02));
  CHECK(sumsq / n == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("one normal consumes exactly two uniforms") {
  rng::Stream a(5, rng::Tag::Oracle, 3);
  rng::Stream b(5, rng::Tag::Oracle, 3);
  a.next_normal();
  b.next_u64();
  b.next_u64();
  CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("fnv1a matches the published 64-bit vectors") {
  CHECK(rng::fnv1a("", 0) == 14695981039346656037ull);
  CHECK(rng::fnv1a("a", 1) == 0xaf63dc4c8601ec8cull);
  CHECK(rng::fnv1a("foobar", 6) == 0x85944171f73967e8ull);
}

TEST_CASE("derive_key and chain are order-sensitive") {
  CHECK(rng::derive_key(1, rng::Tag::Policy, 2, 3) !=
        rng::derive_key(1, rng::Tag::Policy, 3, 2));
  CHECK(rng::chain(rng::chain(1, 2), 3) != rng::chain(rng::chain(1, 3), 2));
}
