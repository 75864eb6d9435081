#include "rotset/cocycle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rotset {

Cocycle::Cocycle(std::vector<LiftedMap> maps) : maps_(std::move(maps)) {
  if (maps_.empty()) throw std::invalid_argument("cocycle needs at least one map");
  for (std::size_t i = 0; i < maps_.size(); ++i)
    if (check_equivariance(maps_[i], 16, 0x5eed + i) > 1e-9)
      throw std::invalid_argument("map " + std::to_string(i) +
                                  " does not commute with integer translations");
  inverse_.assign(maps_.size(), -1);
  for (std::size_t i = 0; i < maps_.size(); ++i) {
    const LiftedMap inv = invert(maps_[i]);
    for (std::size_t j = 0; j < maps_.size(); ++j)
      if (maps_[j] == inv) {
        inverse_[i] = Symbol(j);
        break;
      }
  }
}

bool Cocycle::has_inverse_pairs() const {
  for (Symbol s : inverse_)
    if (s >= 0) return true;
  return false;
}

CocycleWalker::CocycleWalker(const Cocycle& c, const LiftPoint& start)
    : c_(c), reduce_(c.has_inverse_pairs()), points_{start} {}

void CocycleWalker::apply(Symbol s) {
  if (!reduce_) {
    points_.back() = c_.map(s)(points_.back());
    return;
  }
  if (!symbols_.empty() && c_.inverse_symbol(symbols_.back()) == s) {
    symbols_.pop_back();
    points_.pop_back();
    return;
  }
  symbols_.push_back(s);
  points_.push_back(c_.map(s)(points_.back()));
}

std::vector<LiftPoint> iterate(const Cocycle& c, const WordStream& w,
                               const LiftPoint& p, long n) {
  if (n < 0) throw std::invalid_argument("n must be nonnegative");
  std::vector<LiftPoint> traj;
  traj.reserve(std::size_t(n) + 1);
  traj.push_back(p);
  CocycleWalker walker(c, p);
  for (long i = 0; i < n; ++i) {
    walker.apply(w.symbol_at(i));
    traj.push_back(walker.point());
  }
  return traj;
}

LiftPoint advance(const Cocycle& c, const WordStream& w, const LiftPoint& p, long n) {
  CocycleWalker walker(c, p);
  for (long i = 0; i < n; ++i) walker.apply(w.symbol_at(i));
  return walker.point();
}

Vec2 rho_n(const Cocycle& c, const WordStream& w, const TorusPoint& p, long n) {
  if (n < 1) throw std::invalid_argument("undefined average");
  return (advance(c, w, p.lift(), n) - p.lift()) / double(n);
}

PointCloud orbit_rho_tail(const Cocycle& c, const WordStream& w,
                          const TorusPoint& p, long n_max, double tail_fraction) {
  if (n_max < 10) throw std::invalid_argument("n_max must be >= 10");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
    throw std::invalid_argument("tail_fraction must lie in (0, 1]");
  const long first =
      std::max(1L, long(std::ceil((1.0 - tail_fraction) * double(n_max))));
  PointCloud cloud;
  cloud.reserve(std::size_t(n_max - first + 1));
  const LiftPoint start = p.lift();
  CocycleWalker walker(c, start);
  for (long i = 0; i < n_max; ++i) {
    walker.apply(w.symbol_at(i));
    if (i + 1 >= first) cloud.push_back((walker.point() - start) / double(i + 1));
  }
  return cloud;
}

}  // namespace rotset
