// Rotation-set estimators for locally constant cocycles.
//
// The Misiurewicz-Ziemian set limsup D_n is approximated by the union of
// sampled D_n over the upper half of a plan's n_list. Every periodic word w
// of the plan also contributes rho(g~)/|w| for the composed map
// g = f^{|w|}_w; that set is convex (it is the rotation set of a single
// torus homeomorphism), so its sampled hull is filled in.
#ifndef ROTSET_ROTATION_HPP
#define ROTSET_ROTATION_HPP

#include <cstdint>
#include <limits>
#include <vector>

#include "rotset/cocycle.hpp"
#include "rotset/geom.hpp"
#include "rotset/shift.hpp"

namespace rotset {

/// Provenance of one cloud point. Hull-fill points are `derived` and carry
/// no base point.
struct SampleTag {
  long n = 0;
  int word_id = -1;
  Vec2 base = Vec2::Constant(std::numeric_limits<double>::quiet_NaN());
  bool derived = false;
};

struct RotSetEstimate {
  PointCloud cloud;
  std::vector<SampleTag> tags;
  Polygon hull;
  long n_min = 0;
  long n_max = 0;
  /// Lattice resolution used to thin the cloud before measuring spacing.
  double resolution = 0.0;
  double connectivity_eps = 0.0;
  bool is_connected = false;
  double convexity_defect = 0.0;
  double hausdorff_to_half_n = 0.0;
};

struct SamplingPlan {
  /// G: base points (i/G, j/G), 0 <= i, j < G.
  int base_grid = 32;
  std::vector<WordStream> words;
  /// Strictly increasing, all >= 1.
  std::vector<long> n_list;

  void validate() const;
  long n_max() const { return n_list.back(); }
  /// Upper half of n_list (indices >= size/2).
  std::vector<long> tail() const;
};

struct EstimateOptions {
  /// Add the filled per-word sets of the plan's periodic words.
  bool fill_periodic_words = true;
  double fill_spacing = 0.02;
};

struct PerWordOptions {
  bool convex_fill = true;
  double fill_spacing = 0.01;
};

std::vector<TorusPoint> base_grid_points(int grid);

/// Periodic words up to period 6 (fewer for large alphabets), block words,
/// biased random words at biases 0.1..0.9, n_list {25, 50, 100, 150, 200},
/// 32x32 base grid.
SamplingPlan default_plan(int alphabet_size, std::uint64_t seed);

/// Appends `count` two-letter random words with symbol-0 weight (k + 1/2)/count,
/// seeded seed, seed + 1, ... Finite-n orbits of fat MZ sets spread across the
/// whole bias range; a fixed handful of biases leaves bands between them empty.
void add_bias_sweep(SamplingPlan& plan, int count, std::uint64_t seed);

/// {rho_n(w, p) : w in plan.words, p in the base grid}. n must be in n_list.
PointCloud sample_Dn(const Cocycle& c, const SamplingPlan& plan, long n);

RotSetEstimate estimate_mz(const Cocycle& c, const SamplingPlan& plan,
                           const EstimateOptions& options = {});

/// {(g~^K(p~) - p~)/(K n) : p in grid} for g = f^n_w, n = |w|, plus the
/// filled hull of those samples when options.convex_fill is set.
RotSetEstimate per_word_rotation_set(const Cocycle& c, const PeriodicWord& w,
                                     long K, int grid,
                                     const PerWordOptions& options = {});

/// Union of per_word_rotation_set over periodic_words_upto(alphabet, max_period).
RotSetEstimate periodic_union(const Cocycle& c, int max_period, long K, int grid,
                              const PerWordOptions& options = {});

struct InclusionReport {
  double max_violation = 0.0;
  Vec2 worst = Vec2::Zero();
  double tol = 0.0;
  bool holds() const { return max_violation <= tol; }
};

/// Largest distance from a point of `points` to the estimate's cloud.
InclusionReport inclusion_check(const PointCloud& points, const RotSetEstimate& mz,
                                double tol);

/// Recomputes hull, connectivity and convexity diagnostics. The cloud is
/// thinned to one point per `resolution` lattice cell before measuring the
/// median nearest-neighbour spacing; connectivity_eps is twice that
/// spacing and doubles as the convexity probe spacing.
void attach_diagnostics(RotSetEstimate& estimate, double resolution);

/// Throws std::invalid_argument when `w` can emit a symbol outside the
/// cocycle's alphabet.
void require_compatible(const Cocycle& c, const WordStream& w);

}  // namespace rotset

#endif  // ROTSET_ROTATION_HPP
