// Grid topology on the torus: forward closures U_B, essential sets, Fill,
// point classification and displacement probes.
#ifndef ROTSET_ESSENTIAL_HPP
#define ROTSET_ESSENTIAL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rotset/cocycle.hpp"
#include "rotset/grid_set.hpp"

namespace rotset {

/// Outer approximation of map(s): subsamples^2 points per occupied cell,
/// target cells marked, then one ring of dilation. subsamples >= 2.
GridSet grid_image(const LiftedMap& map, const GridSet& s, int subsamples);

struct ClosureResult {
  GridSet set;
  bool converged = false;
  int rounds = 0;
};

/// U = seed plus grid_image(f_i, seed) for every generator, then repeated
/// ring-free sampled images of the newly added cells until nothing changes
/// or `cap` rounds have run. The ring is applied once only: repeated ring
/// dilation would grow forever even under the identity. subsamples = 0
/// picks the largest sound_subsamples over the generators.
ClosureResult forward_closure(const Cocycle& c, const GridSet& seed, int cap,
                              int subsamples = 0);

/// True when some 4-connected component of s contains a loop that is not
/// contractible on the torus (two lifts of one cell in one lifted
/// component). Empty sets are inessential.
bool is_essential_set(const GridSet& s);

/// s together with every inessential 4-connected component of its
/// complement.
GridSet fill_set(const GridSet& s);

enum class Label : std::uint8_t { Inessential = 0, Essential = 1, Undecided = 2 };

struct ClassificationMap {
  int resolution = 0;
  double ball_radius = 0.0;
  int cap = 0;
  int subsamples = 0;
  /// Indexed like GridSet: j * resolution + i.
  std::vector<Label> labels;

  Label at(int i, int j) const { return labels[std::size_t(j) * resolution + i]; }
  std::size_t count(Label label) const;
  double fraction(Label label) const { return double(count(label)) / double(labels.size()); }
};

/// Labels each cell centre p by the forward closure of the ball of
/// ball_radius around p: essential once the closure is essential,
/// inessential when it converges without becoming essential, undecided when
/// the cap is hit first. Requires ball_radius >= 2/base_resolution.
ClassificationMap classify_points(const Cocycle& c, int base_resolution, double ball_radius,
                                  int cap = 500, int subsamples = 0);

/// max |f~^n_x(p~) - p~| over words, base_grid^2 base points and 1 <= n <= n_max.
double displacement_probe(const Cocycle& c, const std::vector<WordStream>& words,
                          int base_grid, long n_max);

}  // namespace rotset

#endif  // ROTSET_ESSENTIAL_HPP
