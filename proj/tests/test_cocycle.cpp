#include "doctest.h"

#include <random>

#include "rotset/cocycle.hpp"
#include "test_support.hpp"

using namespace rotset;

TEST_CASE("construction checks") {
  CHECK_THROWS_AS(Cocycle({}), std::invalid_argument);
  const Cocycle c = testing::mz_pair();
  CHECK(c.alphabet_size() == 2);
  CHECK(c.inverse_symbol(0) == 1);
  CHECK(c.inverse_symbol(1) == 0);
  CHECK(c.has_inverse_pairs());
  CHECK_FALSE(testing::paper_cocycle().has_inverse_pairs());
}

TEST_CASE("translation cocycle has exact averages") {
  const Cocycle c({LiftedMap::translation(Vec2(0, 0)), LiftedMap::translation(Vec2(1, 0))});
  const WordStream w = WordStream::periodic({0, 1, 1});
  const Vec2 r = rho_n(c, w, TorusPoint(0.3, 0.7), 300);
  CHECK(r.isApprox(Vec2(2.0 / 3.0, 0.0)));
  CHECK_THROWS_AS(rho_n(c, w, TorusPoint(0, 0), 0), std::invalid_argument);
}

TEST_CASE("iterate, advance and step agree") {
  const Cocycle c = testing::paper_cocycle();
  const WordStream w = WordStream::random(3, {0.5, 0.5});
  const LiftPoint p(0.2, 0.4);
  const auto traj = iterate(c, w, p, 50);
  REQUIRE(traj.size() == 51);
  CHECK(traj.front() == p);
  for (long i = 0; i < 50; ++i) CHECK((c.step(w, i, traj[std::size_t(i)]) - traj[std::size_t(i + 1)]).norm() < 1e-12);
  CHECK((advance(c, w, p, 50) - traj.back()).norm() < 1e-12);
}

TEST_CASE("cocycle identity F^{n+m}_x = F^m_{sigma^n x} o F^n_x") {
  std::mt19937_64 rng(7);
  double worst = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const Cocycle c({testing::random_map(rng, 1), testing::random_map(rng, 1), testing::random_map(rng, 1)});
    const WordStream w = WordStream::random(std::uint64_t(trial), {0.3, 0.3, 0.4});
    const LiftPoint p(0.1 * trial, -0.2);
    for (long n : {1L, 5L, 13L})
      for (long m : {1L, 7L, 20L}) {
        const LiftPoint whole = advance(c, w, p, n + m);
        const LiftPoint split = advance(c, w.shifted(n), advance(c, w, p, n), m);
        worst = std::max(worst, (whole - split).norm());
      }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("lifted trajectories commute with integer translations") {
  const Cocycle c = testing::mz_pair();
  const WordStream w = WordStream::random(5, {0.6, 0.4});
  const LiftPoint p(0.37, 0.11);
  const Vec2 v(3, -2);
  CHECK((advance(c, w, p + v, 40) - advance(c, w, p, 40) - v).norm() <= 1e-9);
}

TEST_CASE("word reduction for {phi, phi^-1}") {
  const Cocycle c = testing::mz_pair();
  const LiftPoint p(0.123, 0.456);
  // Blocks 0^m 1^m return exactly; the walker cancels the pairs.
  for (long m : {1L, 5L, 50L, 200L}) {
    const WordStream w = WordStream::block({{0, m}, {1, m}});
    CHECK((advance(c, w, p, 2 * m) - p).norm() <= 1e-9);
  }
  // On short words the cancellation agrees with evaluating every map.
  std::mt19937_64 rng(9);
  double worst = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const WordStream w = WordStream::random(std::uint64_t(trial), {0.5, 0.5});
    LiftPoint direct = p;
    for (long i = 0; i < 8; ++i) direct = c.step(w, i, direct);
    worst = std::max(worst, (advance(c, w, p, 8) - direct).norm());
  }
  CHECK(worst <= 1e-9);
  // 0 1 0 1 ... reduces to the identity.
  CHECK((advance(c, WordStream::periodic({0, 1}), p, 1000) - p).norm() == 0.0);
}

TEST_CASE("orbit tail") {
  const Cocycle c({LiftedMap::translation(Vec2(0.5, 0.25))});
  const PointCloud tail = orbit_rho_tail(c, WordStream::periodic({0}), TorusPoint(0.1, 0.1), 100);
  CHECK(tail.size() == 11);
  for (const auto& r : tail) CHECK(r.isApprox(Vec2(0.5, 0.25)));
  CHECK_THROWS_AS(orbit_rho_tail(c, WordStream::periodic({0}), TorusPoint(0, 0), 5),
                  std::invalid_argument);
}

TEST_CASE("sample_rho reports requested times") {
  const Cocycle c = testing::paper_cocycle();
  const WordStream w = WordStream::periodic({0, 1});
  const LiftPoint p(0.3, 0.3);
  std::vector<Vec2> got;
  sample_rho(c, w, p, {10, 20, 40}, [&](std::size_t, const Vec2& r) { got.push_back(r); });
  REQUIRE(got.size() == 3);
  CHECK((got[2] - rho_n(c, w, TorusPoint(p), 40)).norm() < 1e-12);
}
