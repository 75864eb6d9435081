// Locally constant cocycles F(x, p) = (sigma(x), f_{x_0}(p)) and their lifts.
#ifndef ROTSET_COCYCLE_HPP
#define ROTSET_COCYCLE_HPP

#include <vector>

#include "rotset/geom.hpp"
#include "rotset/shift.hpp"
#include "rotset/torus_map.hpp"

namespace rotset {

class Cocycle {
 public:
  /// Throws std::invalid_argument when `maps` is empty or some map fails
  /// the equivariance check at 1e-9.
  explicit Cocycle(std::vector<LiftedMap> maps);

  /// Symbol whose map is structurally invert(map(s)), or -1.
  Symbol inverse_symbol(Symbol s) const { return inverse_[std::size_t(s)]; }
  bool has_inverse_pairs() const;

  int alphabet_size() const { return int(maps_.size()); }
  const LiftedMap& map(Symbol s) const { return maps_.at(std::size_t(s)); }
  const std::vector<LiftedMap>& maps() const { return maps_; }

  /// f~_{x_i}(p~): one step at coordinate i of the word.
  LiftPoint step(const WordStream& w, long i, const LiftPoint& p) const {
    return maps_[std::size_t(w.symbol_at(i))](p);
  }

 private:
  std::vector<LiftedMap> maps_;
  std::vector<Symbol> inverse_;
};

/// Applies symbols one at a time. When the cocycle has inverse pairs, a
/// symbol that undoes the previous uncancelled one pops back to the stored
/// earlier point instead of evaluating the inverse map, so words such as
/// 0^m 1^m return exactly to the start; chaotic maps would otherwise
/// amplify rounding by e^{lambda m}.
class CocycleWalker {
 public:
  CocycleWalker(const Cocycle& c, const LiftPoint& start);

  void apply(Symbol s);
  const LiftPoint& point() const { return points_.back(); }

 private:
  const Cocycle& c_;
  bool reduce_;
  std::vector<LiftPoint> points_;
  std::vector<Symbol> symbols_;
};

/// Lifted trajectory p~_0 = p, p~_{i+1} = f~_{x_i}(p~_i); length n + 1.
std::vector<LiftPoint> iterate(const Cocycle& c, const WordStream& w,
                               const LiftPoint& p, long n);

/// f~^n_x(p~): the endpoint of the trajectory.
LiftPoint advance(const Cocycle& c, const WordStream& w, const LiftPoint& p, long n);

/// Time-n averaged displacement (f~^n_x(p~) - p~)/n. Throws for n < 1.
Vec2 rho_n(const Cocycle& c, const WordStream& w, const TorusPoint& p, long n);

/// {rho_n : (1 - tail_fraction) n_max <= n <= n_max}, a finite stand-in for
/// the accumulation points of (rho_n(x, p))_n.
PointCloud orbit_rho_tail(const Cocycle& c, const WordStream& w,
                          const TorusPoint& p, long n_max,
                          double tail_fraction = 0.1);

/// Walks the trajectory once and reports rho_n at each requested n
/// (ascending). `visit(k, rho)` receives the index into `ns`.
template <typename Visitor>
void sample_rho(const Cocycle& c, const WordStream& w, const LiftPoint& start,
                const std::vector<long>& ns, Visitor&& visit) {
  CocycleWalker walker(c, start);
  long done = 0;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    for (; done < ns[k]; ++done) walker.apply(w.symbol_at(done));
    visit(k, Vec2((walker.point() - start) / double(ns[k])));
  }
}

}  // namespace rotset

#endif  // ROTSET_COCYCLE_HPP
