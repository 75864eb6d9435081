// Boolean occupancy over an N x N grid of torus cells.
//
// Cell (i, j) is [i/N, (i+1)/N) x [j/N, (j+1)/N); indices wrap mod N.
#ifndef ROTSET_GRID_SET_HPP
#define ROTSET_GRID_SET_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "rotset/geom.hpp"
#include "rotset/torus_map.hpp"

namespace rotset {

using Cell = std::pair<int, int>;

class GridSet {
 public:
  GridSet() = default;
  /// Empty set; throws std::invalid_argument for n < 1.
  explicit GridSet(int n);

  static GridSet full(int n);
  static GridSet single(int n, const TorusPoint& p);
  /// Cells whose closed rectangle meets the closed ball B(center, radius)
  /// on the torus.
  static GridSet ball(int n, const TorusPoint& center, double radius);

  int resolution() const { return n_; }
  std::size_t cell_count() const { return bits_.size(); }

  bool test(int i, int j) const { return bits_[index(i, j)] != 0; }
  void set(int i, int j, bool value = true) { bits_[index(i, j)] = value ? 1 : 0; }
  bool test(const Cell& c) const { return test(c.first, c.second); }
  void set(const Cell& c, bool value = true) { set(c.first, c.second, value); }

  Cell cell_of(const TorusPoint& p) const;
  Vec2 center(int i, int j) const;

  std::size_t count() const;
  bool empty() const { return count() == 0; }
  bool is_full() const { return count() == cell_count(); }
  /// Occupied cells in (i, j) lexicographic order.
  std::vector<Cell> cells() const;

  GridSet& operator|=(const GridSet& other);
  GridSet operator|(const GridSet& other) const;
  GridSet complement() const;
  /// True when every cell of *this is also in `other`.
  bool subset_of(const GridSet& other) const;
  bool operator==(const GridSet& other) const {
    return n_ == other.n_ && bits_ == other.bits_;
  }
  bool operator!=(const GridSet& other) const { return !(*this == other); }

  /// Adds the 8 neighbours of every occupied cell.
  GridSet dilate_ring() const;
  /// All cells whose rectangle lies within Euclidean distance eps of an
  /// occupied cell's rectangle.
  GridSet dilate(double eps) const;
  /// Outer approximation of map(*this): subsamples^2 points per occupied
  /// cell are mapped and their target cells marked; `ring` adds the 8
  /// neighbours of the result.
  GridSet image(const LiftedMap& map, int subsamples, bool ring = true) const;
  /// Image of the cells in `from` only, marked into *this. Returns the
  /// number of newly set cells.
  std::size_t mark_image(const LiftedMap& map, const std::vector<Cell>& from,
                         int subsamples, std::vector<Cell>* added = nullptr);

  /// Same set shifted by (di, dj) cells.
  GridSet translated(int di, int dj) const;

  std::size_t index(int i, int j) const {
    return std::size_t(wrap(j)) * std::size_t(n_) + std::size_t(wrap(i));
  }
  int wrap(int i) const {
    const int r = i % n_;
    return r < 0 ? r + n_ : r;
  }

 private:
  int n_ = 0;
  std::vector<std::uint8_t> bits_;
};

/// Numerical Lipschitz bound of a lifted map: the largest finite-difference
/// Jacobian norm over a 48 x 48 sample of the fundamental domain, times 1.1.
double lipschitz_estimate(const LiftedMap& map);

/// Smallest sub-sample count for which one-ring dilation covers the image
/// of a whole cell, given the map's Lipschitz bound. At least 2.
int sound_subsamples(const LiftedMap& map);

}  // namespace rotset

#endif  // ROTSET_GRID_SET_HPP
