// Epsilon-pseudo-orbits of a single lifted map g.
//
// A pseudo-orbit is p_{i+1} = g(p_i) + w_i with |w_i| < eps, i.e. an orbit
// of the cocycle F(x, p) = (sigma(x), g(p) + x_0) over the alphabet B_eps(0).
// Reachability is tracked on a GridSet (outer approximation); orbits built
// from it are always re-checked in the cover.
#ifndef ROTSET_PSEUDO_HPP
#define ROTSET_PSEUDO_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rotset/geom.hpp"
#include "rotset/grid_set.hpp"
#include "rotset/rotation.hpp"
#include "rotset/torus_map.hpp"

namespace rotset {

class PseudoSystem {
 public:
  /// Throws std::invalid_argument unless eps > sqrt(2)/grid. subsamples = 0
  /// picks sound_subsamples(g).
  PseudoSystem(LiftedMap g, double eps, int grid, int subsamples = 0);

  const LiftedMap& map() const { return g_; }
  const LiftedMap& inverse() const { return g_inv_; }
  double eps() const { return eps_; }
  int grid() const { return grid_; }
  int subsamples() const { return subsamples_; }
  int inverse_subsamples() const { return inverse_subsamples_; }
  /// Largest perturbation norm ever emitted: 0.999 eps.
  double max_push() const { return 0.999 * eps_; }

 private:
  LiftedMap g_, g_inv_;
  double eps_;
  int grid_;
  int subsamples_, inverse_subsamples_;
};

/// Stored as its lifted points p_0..p_n. Perturbations are derived, since
/// replaying a perturbation list through a chaotic g does not reproduce a
/// long orbit in floating point.
struct PseudoOrbit {
  std::vector<LiftPoint> points;

  static PseudoOrbit at(const TorusPoint& p) { return {{p.lift()}}; }

  TorusPoint start() const { return TorusPoint(points.front()); }
  std::size_t length() const { return points.empty() ? 0 : points.size() - 1; }
  /// p_n - p_0 in the cover.
  Vec2 displacement() const { return points.back() - points.front(); }
};

/// w_i = p_{i+1} - g(p_i).
std::vector<Vec2> perturbations(const PseudoSystem& sys, const PseudoOrbit& orbit);
/// max_i |p_{i+1} - g(p_i)|; 0 for the empty orbit.
double max_step_error(const PseudoSystem& sys, const PseudoOrbit& orbit);
/// Every step strictly inside the eps-ball.
bool is_valid(const PseudoSystem& sys, const PseudoOrbit& orbit);
/// Appends `second`, translated by an integer vector so that its start
/// lands on the end of `first`; the two must agree mod Z^2 within 1e-9.
PseudoOrbit concat(const PseudoOrbit& first, const PseudoOrbit& second);

/// dilate_eps(image_g(s)).
GridSet theta_step(const PseudoSystem& sys, const GridSet& s);
/// image_{g^-1}(dilate_eps(s)): cells q with g(q) + w in s.
GridSet theta_back_step(const PseudoSystem& sys, const GridSet& s);
/// Cells reachable from p in exactly k steps.
GridSet theta_forward(const PseudoSystem& sys, const TorusPoint& p, int k);
/// Cells from which p is reachable in exactly k steps.
GridSet theta_backward(const PseudoSystem& sys, const TorusPoint& p, int k);
/// Smallest k <= k_cap whose cumulative forward set is the whole grid.
std::optional<int> coverage_bound(const PseudoSystem& sys, const TorusPoint& p, int k_cap);

class UnreachableError : public std::runtime_error {
 public:
  UnreachableError() : std::runtime_error("unreachable within k_cap") {}
};

/// Connectors by breadth-first search over cell centres: there is an edge
/// c -> d when centre(d) lies within max_push of g(centre(c)), so every
/// edge is a valid pseudo-orbit step. Level fields are cached per target.
class ConnectorPlanner {
 public:
  ConnectorPlanner(const PseudoSystem& sys, int k_cap);

  /// Throws UnreachableError when no path of at most k_cap + 1 steps exists.
  PseudoOrbit connect(const TorusPoint& from, const TorusPoint& to);
  /// Steps needed from each cell centre to reach `to` (-1: more than k_cap).
  const std::vector<int>& levels(const TorusPoint& to);

 private:
  const PseudoSystem& sys_;
  int k_cap_;
  // Reverse edges in compressed rows: predecessors of cell k are
  // pred_[pred_start_[k] .. pred_start_[k + 1]).
  std::vector<std::size_t> pred_start_;
  std::vector<int> pred_;
  std::map<std::pair<double, double>, std::vector<int>> cache_;
};

PseudoOrbit find_connector(const PseudoSystem& sys, const TorusPoint& from,
                           const TorusPoint& to, int k_cap);

/// A pseudo-orbit that ends where it starts (mod Z^2).
struct Cycle {
  PseudoOrbit orbit;
  /// Integer: the last point is exactly the first plus this vector.
  Vec2 displacement = Vec2::Zero();
  long open_steps = 0;
  Vec2 open_displacement = Vec2::Zero();

  long steps() const { return long(orbit.length()); }
  long connector_steps() const { return steps() - open_steps; }
  Vec2 rotation() const { return displacement / double(steps()); }
  /// Average displacement of the part before the closing connector.
  Vec2 open_rotation() const { return open_displacement / double(open_steps); }
};

/// Appends a connector from the end of `open` back to its start. Throws
/// std::invalid_argument for an empty result (zero steps).
Cycle close_cycle(const PseudoSystem& sys, ConnectorPlanner& planner, const PseudoOrbit& open);

struct SpliceResult {
  PseudoOrbit orbit;
  long repeats_a = 0;
  long repeats_b = 0;
  /// (end - start)/length of the materialized orbit.
  Vec2 rotation = Vec2::Zero();
  /// (a MB wA + (b - a) MA wB)/(b MA MB) from the cycle bookkeeping.
  Vec2 predicted = Vec2::Zero();
  long connector_steps = 0;
};

/// Periodic orbit made of repeats_a copies of cycle A then repeats_b copies
/// of cycle B with repeats_a : repeats_b = a MB : (b - a) MA, so that its
/// rotation vector is (a/b) rho(A) + (1 - a/b) rho(B). Requires 0 <= a <= b,
/// b >= 1 and both cycles based at the same point.
SpliceResult splice_periodic(const PseudoSystem& sys, const Cycle& A, const Cycle& B,
                             long a, long b);
/// Closes both orbits at their common start first.
SpliceResult splice_periodic(const PseudoSystem& sys, const PseudoOrbit& A,
                             const PseudoOrbit& B, long a, long b, int k_cap);

class PushPolicy {
 public:
  enum class Kind { None, Constant, Random };

  static PushPolicy none() { return PushPolicy(Kind::None, Vec2::Zero(), 0); }
  /// Pushes by max_push along direction / |direction|.
  static PushPolicy constant(const Vec2& direction);
  /// Uniform in the disk of radius max_push, keyed by (seed, stream, step).
  static PushPolicy random(std::uint64_t seed) {
    return PushPolicy(Kind::Random, Vec2::Zero(), seed);
  }

  Kind kind() const { return kind_; }
  const Vec2& direction() const { return direction_; }
  std::uint64_t seed() const { return seed_; }
  Vec2 perturbation(const PseudoSystem& sys, std::uint64_t stream, long step) const;
  std::string describe() const;

 private:
  PushPolicy(Kind kind, Vec2 direction, std::uint64_t seed)
      : kind_(kind), direction_(std::move(direction)), seed_(seed) {}

  Kind kind_;
  Vec2 direction_;
  std::uint64_t seed_;
};

PseudoOrbit policy_orbit(const PseudoSystem& sys, const TorusPoint& start,
                         const PushPolicy& policy, long n, std::uint64_t stream = 0);

struct PseudoPlan {
  std::vector<TorusPoint> base_points;
  std::vector<PushPolicy> policies;
  /// Strictly increasing; the upper half is sampled.
  std::vector<long> n_list;
  /// Splice every pair of constant policies at these (a, b) ratios, using
  /// cycles of cycle_length open steps based at base_points[0].
  std::vector<std::pair<long, long>> splice_ratios;
  long cycle_length = 60;
  int k_cap = 400;
  double resolution = 0.005;

  void validate() const;
};

/// 4 x 4 base grid, 24 constant directions, no push, 4 random seeds,
/// n_list {50, 100, 200}, ratios {0, 1/4, 1/2, 3/4, 1}.
PseudoPlan default_pseudo_plan(std::uint64_t seed);

/// Step-error bookkeeping over every orbit pseudo_rotset emits.
struct PseudoAudit {
  std::size_t orbits = 0;
  /// max |p_{i+1} - g(p_i)| over all emitted orbits; valid when < eps.
  double max_step_error = 0.0;
};

/// Cloud of rho_n over all (base point, policy) orbits plus every splice;
/// tags use the policy index as word_id, splices continue the numbering.
RotSetEstimate pseudo_rotset(const PseudoSystem& sys, const PseudoPlan& plan,
                             PseudoAudit* audit = nullptr);

}  // namespace rotset

#endif  // ROTSET_PSEUDO_HPP
