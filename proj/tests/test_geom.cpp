#include "doctest.h"

#include <random>

#include "rotset/geom.hpp"

using namespace rotset;

namespace {

PointCloud random_cloud(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  PointCloud out;
  for (int i = 0; i < n; ++i) out.emplace_back(u(rng), u(rng));
  return out;
}

PointCloud lattice(double x0, double y0, double x1, double y1, double h) {
  PointCloud out;
  for (int i = 0; x0 + i * h <= x1 + 1e-12; ++i)
    for (int j = 0; y0 + j * h <= y1 + 1e-12; ++j) out.emplace_back(x0 + i * h, y0 + j * h);
  return out;
}

double brute_directed(const PointCloud& a, const PointCloud& b) {
  double worst = 0;
  for (const auto& p : a) {
    double best = 1e300;
    for (const auto& q : b) best = std::min(best, (p - q).norm());
    worst = std::max(worst, best);
  }
  return worst;
}

bool brute_connected(const PointCloud& c, double eps) {
  geom::DisjointSets sets(c.size());
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      if ((c[i] - c[j]).norm() <= eps) sets.unite(i, j);
  for (std::size_t i = 1; i < c.size(); ++i)
    if (sets.find(i) != sets.find(0)) return false;
  return true;
}

}  // namespace

TEST_CASE("convex hull of a square with interior points") {
  PointCloud c = lattice(0, 0, 1, 1, 0.25);
  const Polygon h = convex_hull(c);
  REQUIRE(h.vertices.size() == 4);
  double area = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& a = h.vertices[i];
    const auto& b = h.vertices[(i + 1) % 4];
    area += a.x() * b.y() - a.y() * b.x();
  }
  CHECK(area / 2 == doctest::Approx(1.0));  // positive: counterclockwise
}

TEST_CASE("hull contains every input point and keeps only input vertices") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const PointCloud c = random_cloud(rng, 60, -2, 3);
    const Polygon h = convex_hull(c);
    for (const auto& v : h.vertices)
      CHECK(std::any_of(c.begin(), c.end(), [&](const Vec2& p) { return p == v; }));
    for (const auto& p : c) CHECK(hull_contains(h, p, 1e-9));
    // Strict convexity: every vertex turns left.
    for (std::size_t i = 0; i < h.vertices.size(); ++i) {
      const auto& o = h.vertices[i];
      const auto& a = h.vertices[(i + 1) % h.vertices.size()];
      const auto& b = h.vertices[(i + 2) % h.vertices.size()];
      CHECK(geom::cross(o, a, b) > 0);
    }
  }
}

TEST_CASE("degenerate hulls") {
  CHECK(convex_hull(PointCloud{Vec2(1, 2)}).vertices.size() == 1);
  CHECK(convex_hull(PointCloud{Vec2(1, 2), Vec2(1, 2)}).vertices.size() == 1);
  const Polygon seg = convex_hull(PointCloud{Vec2(0, 0), Vec2(0.5, 0), Vec2(1, 0)});
  CHECK(seg.vertices.size() == 2);
  CHECK(seg.degenerate());
  CHECK(hull_contains(seg, Vec2(0.3, 0), 1e-9));
  CHECK_FALSE(hull_contains(seg, Vec2(0.3, 0.1), 1e-9));
  CHECK(convexity_defect(PointCloud{Vec2(0, 0), Vec2(1, 0)}, 0.1) == 0.0);
  CHECK(convexity_defect(PointCloud{Vec2(3, 3)}, 0.1) == 0.0);
}

TEST_CASE("hausdorff matches a brute-force oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const PointCloud a = random_cloud(rng, 40 + trial, -1, 1);
    const PointCloud b = random_cloud(rng, 70, -1.5, 0.5);
    CHECK(directed_hausdorff(a, b) == doctest::Approx(brute_directed(a, b)).epsilon(1e-12));
    CHECK(hausdorff(a, b) ==
          doctest::Approx(std::max(brute_directed(a, b), brute_directed(b, a))).epsilon(1e-12));
  }
  CHECK(hausdorff(PointCloud{Vec2(0, 0)}, PointCloud{Vec2(3, 4)}) == doctest::Approx(5));
}

TEST_CASE("kd-tree neighbour queries match brute force") {
  std::mt19937_64 rng(3);
  const PointCloud c = random_cloud(rng, 500, 0, 1);
  const geom::KdTree<double> tree(c);
  const PointCloud q = random_cloud(rng, 50, -0.2, 1.2);
  for (const auto& p : q) {
    double best = 1e300;
    std::size_t within = 0;
    for (const auto& x : c) {
      best = std::min(best, (x - p).norm());
      if ((x - p).norm() <= 0.1) ++within;
    }
    CHECK(tree.nearest_distance(p) == doctest::Approx(best).epsilon(1e-12));
    std::size_t seen = 0;
    tree.for_each_within(p, 0.1, [&](std::size_t) { ++seen; });
    CHECK(seen == within);
  }
}

TEST_CASE("eps connectivity matches union-find over all pairs") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const PointCloud c = random_cloud(rng, 50, 0, 1);
    const double eps = 0.05 + 0.005 * trial;
    CHECK(eps_connected(c, eps) == brute_connected(c, eps));
  }
  CHECK_THROWS_AS(eps_connected(PointCloud{}, 0.1), std::invalid_argument);
  CHECK(eps_connected(PointCloud{Vec2(0, 0), Vec2(0.1, 0)}, 0.1));
  CHECK_FALSE(eps_connected(PointCloud{Vec2(0, 0), Vec2(0.1, 0)}, 0.0999));
}

TEST_CASE("convexity defect of convex and non-convex lattices") {
  const double h = 0.02;
  CHECK(convexity_defect(lattice(0, 0, 1, 1, h), h) <= h);
  // Two unit squares touching at the origin: the hull is a hexagon whose
  // worst probe is the midpoint (-1/2, 1/2), at distance 1/2 from both.
  PointCloud two = lattice(0, 0, 1, 1, h);
  const PointCloud neg = lattice(-1, -1, 0, 0, h);
  two.insert(two.end(), neg.begin(), neg.end());
  CHECK(convexity_defect(two, h) == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("geometry is generic in the scalar type") {
  PointCloudT<float> c;
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; j <= 10; ++j) c.emplace_back(0.1f * i, 0.1f * j);
  CHECK(convex_hull(c).vertices.size() == 4);
  CHECK(eps_connected(c, 0.11f));
  CHECK(median_nn_spacing(c) == doctest::Approx(0.1f).epsilon(1e-4));
  CHECK(convexity_defect(c, 0.1f) <= 0.1f);
}

TEST_CASE("hull fill stays in the hull and covers it") {
  const Polygon tri = convex_hull(PointCloud{Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)});
  const PointCloud fill = hull_fill(tri, 0.05);
  for (const auto& p : fill) CHECK(hull_contains(tri, p, 1e-9));
  // Every point of the triangle is within one spacing of the fill.
  const geom::KdTree<double> tree(fill);
  for (const auto& p : lattice(0, 0, 1, 1, 0.013))
    if (p.x() + p.y() <= 1) CHECK(tree.nearest_distance(p) <= 0.05);
}

TEST_CASE("median nearest-neighbour spacing of a lattice") {
  CHECK(median_nn_spacing(lattice(0, 0, 1, 1, 0.1)) == doctest::Approx(0.1));
}

TEST_CASE("canonical order does not depend on input order") {
  std::mt19937_64 rng(23);
  PointCloud c = random_cloud(rng, 200, -1, 1);
  c.push_back(c[5]);  // duplicate collapses
  PointCloud a = c;
  canonicalize(a);
  std::shuffle(c.begin(), c.end(), rng);
  PointCloud b = c;
  canonicalize(b);
  CHECK(a.size() == 200);
  CHECK(a == b);
}
