// Planar geometry for rotation-vector clouds: convex hulls, Hausdorff
// distances, eps-connectivity and convexity-defect diagnostics.
//
// Everything here is templated on the scalar type in the usual Eigen
// manner; the rest of the library instantiates it with double.
#ifndef ROTSET_GEOM_HPP
#define ROTSET_GEOM_HPP

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace rotset {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
using Vec2 = Vector2<double>;

template <typename Scalar>
using PointCloudT = std::vector<Vector2<Scalar>>;
using PointCloud = PointCloudT<double>;

/// Convex polygon with counterclockwise vertices in strictly convex
/// position. One or two vertices encode a degenerate hull.
template <typename Scalar>
struct PolygonT {
  std::vector<Vector2<Scalar>> vertices;

  bool degenerate() const { return vertices.size() < 3; }
};
using Polygon = PolygonT<double>;

namespace geom {

inline constexpr double kTolerance = 1e-9;

template <typename Scalar>
Scalar cross(const Vector2<Scalar>& o, const Vector2<Scalar>& a,
             const Vector2<Scalar>& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

template <typename Scalar>
bool lex_less(const Vector2<Scalar>& a, const Vector2<Scalar>& b) {
  return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
}

/// Static 2-d tree for nearest-neighbour and radius queries.
template <typename Scalar>
class KdTree {
 public:
  explicit KdTree(const PointCloudT<Scalar>& points) : points_(points) {
    index_.resize(points_.size());
    std::iota(index_.begin(), index_.end(), 0);
    if (!index_.empty()) build(0, index_.size(), 0);
  }

  bool empty() const { return index_.empty(); }

  /// Distance to the nearest stored point, skipping index `skip`.
  Scalar nearest_distance(const Vector2<Scalar>& q,
                          std::size_t skip = npos) const {
    Scalar best = std::numeric_limits<Scalar>::infinity();
    if (!index_.empty()) nearest(q, 0, index_.size(), 0, skip, best);
    return std::sqrt(best);
  }

  template <typename Visitor>
  void for_each_within(const Vector2<Scalar>& q, Scalar radius,
                       Visitor&& visit) const {
    if (!index_.empty())
      within(q, radius * radius, 0, index_.size(), 0, visit);
  }

  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

 private:
  void build(std::size_t lo, std::size_t hi, int axis) {
    if (hi - lo <= kLeaf) return;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::nth_element(index_.begin() + lo, index_.begin() + mid,
                     index_.begin() + hi, [&](std::size_t a, std::size_t b) {
                       return points_[a][axis] < points_[b][axis];
                     });
    build(lo, mid, 1 - axis);
    build(mid + 1, hi, 1 - axis);
  }

  void nearest(const Vector2<Scalar>& q, std::size_t lo, std::size_t hi,
               int axis, std::size_t skip, Scalar& best) const {
    if (hi - lo <= kLeaf) {
      for (std::size_t i = lo; i < hi; ++i) {
        if (index_[i] == skip) continue;
        best = std::min(best, (points_[index_[i]] - q).squaredNorm());
      }
      return;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    const auto& pivot = points_[index_[mid]];
    if (index_[mid] != skip) best = std::min(best, (pivot - q).squaredNorm());
    const Scalar diff = q[axis] - pivot[axis];
    const bool left_first = diff < 0;
    if (left_first)
      nearest(q, lo, mid, 1 - axis, skip, best);
    else
      nearest(q, mid + 1, hi, 1 - axis, skip, best);
    if (diff * diff < best) {
      if (left_first)
        nearest(q, mid + 1, hi, 1 - axis, skip, best);
      else
        nearest(q, lo, mid, 1 - axis, skip, best);
    }
  }

  template <typename Visitor>
  void within(const Vector2<Scalar>& q, Scalar r2, std::size_t lo,
              std::size_t hi, int axis, Visitor& visit) const {
    if (hi - lo <= kLeaf) {
      for (std::size_t i = lo; i < hi; ++i)
        if ((points_[index_[i]] - q).squaredNorm() <= r2) visit(index_[i]);
      return;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    const auto& pivot = points_[index_[mid]];
    if ((pivot - q).squaredNorm() <= r2) visit(index_[mid]);
    const Scalar diff = q[axis] - pivot[axis];
    if (diff <= 0 || diff * diff <= r2) within(q, r2, lo, mid, 1 - axis, visit);
    if (diff >= 0 || diff * diff <= r2)
      within(q, r2, mid + 1, hi, 1 - axis, visit);
  }

  static constexpr std::size_t kLeaf = 8;
  const PointCloudT<Scalar>& points_;
  std::vector<std::size_t> index_;
};

}  // namespace geom

/// Monotone-chain convex hull; collinear points are dropped.
template <typename Scalar>
PolygonT<Scalar> convex_hull(const PointCloudT<Scalar>& cloud) {
  if (cloud.empty()) throw std::invalid_argument("empty input");
  PointCloudT<Scalar> pts(cloud);
  std::sort(pts.begin(), pts.end(), geom::lex_less<Scalar>);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return {pts};

  const Scalar tol = Scalar(geom::kTolerance);
  std::vector<Vector2<Scalar>> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && geom::cross(hull[k - 2], hull[k - 1], p) <= tol) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && geom::cross(hull[k - 2], hull[k - 1], pts[i]) <= tol)
      --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return {hull};
}

/// Signed distance-like containment test: true when `p` is inside the
/// polygon or within `tol` of it. Degenerate hulls use the segment/point.
template <typename Scalar>
bool hull_contains(const PolygonT<Scalar>& poly, const Vector2<Scalar>& p,
                   Scalar tol = Scalar(geom::kTolerance)) {
  const auto& v = poly.vertices;
  if (v.empty()) return false;
  if (v.size() == 1) return (p - v[0]).norm() <= tol;
  if (v.size() == 2) {
    const Vector2<Scalar> d = v[1] - v[0];
    const Scalar t = std::clamp((p - v[0]).dot(d) / d.squaredNorm(), Scalar(0),
                                Scalar(1));
    return (v[0] + t * d - p).norm() <= tol;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    if (geom::cross(a, b, p) < -tol * (b - a).norm()) return false;
  }
  return true;
}

/// Points of the lattice spacing*Z^2 inside the hull, together with the
/// hull boundary sampled at `spacing`. Lattice alignment lets fills of
/// overlapping hulls deduplicate exactly.
template <typename Scalar>
PointCloudT<Scalar> hull_fill(const PolygonT<Scalar>& poly, Scalar spacing) {
  if (!(spacing > 0)) throw std::invalid_argument("spacing must be positive");
  const auto& v = poly.vertices;
  PointCloudT<Scalar> out;
  if (v.empty()) return out;
  const std::size_t edges = v.size() == 1 ? 0 : (v.size() == 2 ? 1 : v.size());
  out.push_back(v[0]);
  for (std::size_t i = 0; i < edges; ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    const int steps = std::max(1, int(std::ceil((b - a).norm() / spacing)));
    for (int s = 1; s <= steps; ++s)
      out.push_back(a + (b - a) * (Scalar(s) / Scalar(steps)));
  }
  if (v.size() < 3) return out;

  Vector2<Scalar> lo = v[0], hi = v[0];
  for (const auto& p : v) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const long i0 = long(std::ceil(lo.x() / spacing));
  const long i1 = long(std::floor(hi.x() / spacing));
  const long j0 = long(std::ceil(lo.y() / spacing));
  const long j1 = long(std::floor(hi.y() / spacing));
  for (long i = i0; i <= i1; ++i)
    for (long j = j0; j <= j1; ++j) {
      const Vector2<Scalar> p(Scalar(i) * spacing, Scalar(j) * spacing);
      if (hull_contains(poly, p)) out.push_back(p);
    }
  return out;
}

/// Directed Hausdorff distance sup_{a in from} d(a, to).
template <typename Scalar>
Scalar directed_hausdorff(const PointCloudT<Scalar>& from,
                          const PointCloudT<Scalar>& to) {
  if (from.empty() || to.empty()) throw std::invalid_argument("empty input");
  const geom::KdTree<Scalar> tree(to);
  Scalar worst = 0;
  for (const auto& p : from) worst = std::max(worst, tree.nearest_distance(p));
  return worst;
}

template <typename Scalar>
Scalar hausdorff(const PointCloudT<Scalar>& a, const PointCloudT<Scalar>& b) {
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

namespace geom {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[std::max(a, b)] = std::min(a, b);
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace geom

/// True iff the graph joining points at distance <= eps is connected.
///
/// Points are bucketed into cells of side eps/sqrt(2), so every bucket is a
/// clique; buckets are then joined by an explicit pair search, which stops
/// at the first witness.
template <typename Scalar>
bool eps_connected(const PointCloudT<Scalar>& cloud, Scalar eps) {
  if (cloud.empty()) throw std::invalid_argument("empty input");
  if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
  const Scalar side = eps / std::sqrt(Scalar(2));
  auto key = [](long i, long j) {
    return (std::uint64_t(std::uint32_t(i)) << 32) | std::uint32_t(j);
  };
  std::unordered_map<std::uint64_t, std::size_t> bucket_of;
  std::vector<std::vector<std::size_t>> members;
  std::vector<std::pair<long, long>> coords;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const long bi = long(std::floor(cloud[i].x() / side));
    const long bj = long(std::floor(cloud[i].y() / side));
    auto [it, fresh] = bucket_of.try_emplace(key(bi, bj), members.size());
    if (fresh) {
      members.emplace_back();
      coords.emplace_back(bi, bj);
    }
    members[it->second].push_back(i);
  }
  geom::DisjointSets sets(members.size());
  std::size_t components = members.size();
  const Scalar eps2 = eps * eps;
  for (std::size_t b = 0; b < members.size(); ++b) {
    const auto [bi, bj] = coords[b];
    for (long di = -2; di <= 2; ++di)
      for (long dj = -2; dj <= 2; ++dj) {
        if (di < 0 || (di == 0 && dj <= 0)) continue;
        auto it = bucket_of.find(key(bi + di, bj + dj));
        if (it == bucket_of.end()) continue;
        const std::size_t other = it->second;
        if (sets.find(b) == sets.find(other)) continue;
        bool linked = false;
        for (std::size_t p : members[b]) {
          for (std::size_t q : members[other])
            if ((cloud[p] - cloud[q]).squaredNorm() <= eps2) {
              linked = true;
              break;
            }
          if (linked) break;
        }
        if (linked && sets.unite(b, other)) --components;
      }
  }
  return components == 1;
}

/// Largest distance from a lattice probe inside the hull to the cloud.
/// Degenerate hulls (fewer than three vertices) have defect 0.
template <typename Scalar>
Scalar convexity_defect(const PointCloudT<Scalar>& cloud, Scalar probe_spacing) {
  if (cloud.empty()) throw std::invalid_argument("empty input");
  if (!(probe_spacing > 0))
    throw std::invalid_argument("probe spacing must be positive");
  const auto hull = convex_hull(cloud);
  if (hull.degenerate()) return 0;
  const geom::KdTree<Scalar> tree(cloud);
  Scalar worst = 0;
  for (const auto& p : hull_fill(hull, probe_spacing))
    worst = std::max(worst, tree.nearest_distance(p));
  return worst;
}

/// Median over points of the distance to the nearest other point.
template <typename Scalar>
Scalar median_nn_spacing(const PointCloudT<Scalar>& cloud) {
  if (cloud.size() < 2) return 0;
  const geom::KdTree<Scalar> tree(cloud);
  std::vector<Scalar> d(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i)
    d[i] = tree.nearest_distance(cloud[i], i);
  auto mid = d.begin() + d.size() / 2;
  std::nth_element(d.begin(), mid, d.end());
  return *mid;
}

/// Indices of a canonical subset of `cloud`: points are ordered by their
/// coordinates rounded to `resolution`, and only the first point of each
/// rounded key is kept. The result does not depend on input order when
/// rounded keys are distinct.
template <typename Scalar>
std::vector<std::size_t> canonical_order(const PointCloudT<Scalar>& cloud,
                                         Scalar resolution = Scalar(1e-6)) {
  std::vector<std::pair<long long, long long>> keys(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i)
    keys[i] = {std::llround(cloud[i].x() / resolution),
               std::llround(cloud[i].y() / resolution)};
  std::vector<std::size_t> order(cloud.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  order.erase(std::unique(order.begin(), order.end(),
                          [&](std::size_t a, std::size_t b) {
                            return keys[a] == keys[b];
                          }),
              order.end());
  return order;
}

template <typename Scalar>
void canonicalize(PointCloudT<Scalar>& cloud, Scalar resolution = Scalar(1e-6)) {
  PointCloudT<Scalar> out;
  for (std::size_t i : canonical_order(cloud, resolution)) out.push_back(cloud[i]);
  cloud.swap(out);
}

}  // namespace rotset

#endif  // ROTSET_GEOM_HPP
