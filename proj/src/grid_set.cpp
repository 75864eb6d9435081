#include "rotset/grid_set.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace rotset {

namespace {

// Gap between two cell rectangles that are `d` cells apart along one axis.
double axis_gap(int d, int n) { return double(std::max(std::abs(d) - 1, 0)) / n; }

}  // namespace

GridSet::GridSet(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("grid resolution must be >= 1");
  bits_.assign(std::size_t(n) * std::size_t(n), 0);
}

GridSet GridSet::full(int n) {
  GridSet s(n);
  std::fill(s.bits_.begin(), s.bits_.end(), 1);
  return s;
}

GridSet GridSet::single(int n, const TorusPoint& p) {
  GridSet s(n);
  s.set(s.cell_of(p));
  return s;
}

GridSet GridSet::ball(int n, const TorusPoint& center, double radius) {
  if (!(radius >= 0)) throw std::invalid_argument("radius must be nonnegative");
  GridSet s(n);
  const int reach = int(std::ceil(radius * n)) + 1;
  const double cx = center.x() * n, cy = center.y() * n;
  const int ci = int(std::floor(cx)), cj = int(std::floor(cy));
  for (int di = -reach; di <= reach; ++di)
    for (int dj = -reach; dj <= reach; ++dj) {
      // Distance from the centre to the rectangle of cell (ci+di, cj+dj),
      // measured in the cover before wrapping.
      const double x0 = ci + di, y0 = cj + dj;
      const double gx = std::max({x0 - cx, 0.0, cx - (x0 + 1)}) / n;
      const double gy = std::max({y0 - cy, 0.0, cy - (y0 + 1)}) / n;
      if (std::hypot(gx, gy) <= radius) s.set(ci + di, cj + dj);
    }
  return s;
}

Cell GridSet::cell_of(const TorusPoint& p) const {
  const int i = std::min(int(std::floor(p.x() * n_)), n_ - 1);
  const int j = std::min(int(std::floor(p.y() * n_)), n_ - 1);
  return {i, j};
}

Vec2 GridSet::center(int i, int j) const {
  return Vec2((wrap(i) + 0.5) / n_, (wrap(j) + 0.5) / n_);
}

std::size_t GridSet::count() const {
  return std::size_t(std::count(bits_.begin(), bits_.end(), std::uint8_t(1)));
}

std::vector<Cell> GridSet::cells() const {
  std::vector<Cell> out;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (test(i, j)) out.emplace_back(i, j);
  return out;
}

GridSet& GridSet::operator|=(const GridSet& other) {
  if (other.n_ != n_) throw std::invalid_argument("grid resolutions differ");
  for (std::size_t k = 0; k < bits_.size(); ++k) bits_[k] |= other.bits_[k];
  return *this;
}

GridSet GridSet::operator|(const GridSet& other) const {
  GridSet out = *this;
  out |= other;
  return out;
}

GridSet GridSet::complement() const {
  GridSet out = *this;
  for (auto& b : out.bits_) b ^= 1;
  return out;
}

bool GridSet::subset_of(const GridSet& other) const {
  if (other.n_ != n_) throw std::invalid_argument("grid resolutions differ");
  for (std::size_t k = 0; k < bits_.size(); ++k)
    if (bits_[k] && !other.bits_[k]) return false;
  return true;
}

GridSet GridSet::dilate_ring() const {
  GridSet out = *this;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (test(i, j))
        for (int di = -1; di <= 1; ++di)
          for (int dj = -1; dj <= 1; ++dj) out.set(i + di, j + dj);
  return out;
}

GridSet GridSet::dilate(double eps) const {
  if (!(eps >= 0)) throw std::invalid_argument("eps must be nonnegative");
  std::vector<Cell> offsets;
  const int reach = std::min(int(std::ceil(eps * n_)) + 1, n_);
  for (int di = -reach; di <= reach; ++di)
    for (int dj = -reach; dj <= reach; ++dj)
      if (std::hypot(axis_gap(di, n_), axis_gap(dj, n_)) <= eps) offsets.emplace_back(di, dj);

  // Offsets are monotone in |di|, |dj|, so cells with all four neighbours
  // occupied add nothing beyond what the boundary cells add.
  GridSet out = *this;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      if (!test(i, j)) continue;
      if (test(i + 1, j) && test(i - 1, j) && test(i, j + 1) && test(i, j - 1)) continue;
      for (const auto& [di, dj] : offsets) out.set(i + di, j + dj);
    }
  return out;
}

std::size_t GridSet::mark_image(const LiftedMap& map, const std::vector<Cell>& from,
                                int subsamples, std::vector<Cell>* added) {
  if (subsamples < 1) throw std::invalid_argument("subsamples must be >= 1");
  std::size_t fresh = 0;
  for (const auto& [i, j] : from)
    for (int a = 0; a < subsamples; ++a)
      for (int b = 0; b < subsamples; ++b) {
        const Vec2 p((i + (a + 0.5) / subsamples) / n_, (j + (b + 0.5) / subsamples) / n_);
        const Cell c = cell_of(TorusPoint(map(p)));
        if (!test(c)) {
          set(c);
          ++fresh;
          if (added) added->push_back(c);
        }
      }
  return fresh;
}

GridSet GridSet::image(const LiftedMap& map, int subsamples, bool ring) const {
  GridSet out(n_);
  out.mark_image(map, cells(), subsamples);
  return ring ? out.dilate_ring() : out;
}

GridSet GridSet::translated(int di, int dj) const {
  GridSet out(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (test(i, j)) out.set(i + di, j + dj);
  return out;
}

double lipschitz_estimate(const LiftedMap& map) {
  constexpr int kSamples = 48;
  constexpr double h = 1e-6;
  double best = 0.0;
  for (int a = 0; a < kSamples; ++a)
    for (int b = 0; b < kSamples; ++b) {
      const Vec2 p((a + 0.5) / kSamples, (b + 0.5) / kSamples);
      Eigen::Matrix2d jac;
      jac.col(0) = (map(p + Vec2(h, 0)) - map(p - Vec2(h, 0))) / (2 * h);
      jac.col(1) = (map(p + Vec2(0, h)) - map(p - Vec2(0, h))) / (2 * h);
      best = std::max(best, jac.operatorNorm());
    }
  return 1.1 * best;
}

int sound_subsamples(const LiftedMap& map) {
  // A cell point is within sqrt(2)/(2 s N) of a sample; its image is then
  // within one cell of the sample's image once L sqrt(2)/(2 s) < 1.
  const double lip = lipschitz_estimate(map);
  return std::max(2, int(std::floor(lip * std::sqrt(2.0) / 2.0)) + 1);
}

}  // namespace rotset
