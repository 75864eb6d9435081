// Lifts to R^2 of torus homeomorphisms isotopic to the identity.
//
// A LiftedMap is an immutable composition of closed-form primitives. All
// primitives commute with integer translations, so every LiftedMap does.
#ifndef ROTSET_TORUS_MAP_HPP
#define ROTSET_TORUS_MAP_HPP

#include <cmath>
#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include "rotset/geom.hpp"

namespace rotset {

/// Point of R^2 (universal cover of the torus).
using LiftPoint = Vec2;

/// Point of T^2 = R^2/Z^2 with coordinates reduced to [0, 1).
class TorusPoint {
 public:
  TorusPoint() = default;
  TorusPoint(double x, double y) : TorusPoint(Vec2(x, y)) {}
  explicit TorusPoint(const Vec2& p) : p_(reduce(p.x()), reduce(p.y())) {}

  double x() const { return p_.x(); }
  double y() const { return p_.y(); }
  /// The representative lift in [0,1)^2.
  const LiftPoint& lift() const { return p_; }

  static double reduce(double t) {
    double r = t - std::floor(t);
    return r >= 1.0 ? 0.0 : r;
  }

 private:
  Vec2 p_ = Vec2::Zero();
};

/// Representative of v + Z^2 with the smallest Euclidean norm; ties go to
/// the lexicographically smallest candidate.
Vec2 min_image(const Vec2& v);

namespace prim {

struct Translation {
  Vec2 v;
  bool operator==(const Translation& o) const { return v == o.v; }
};
/// (x, y) -> (x + offset + a sin(2 pi (y + phase)), y)
struct HShear {
  double a, phase, offset;
  bool operator==(const HShear&) const = default;
};
/// (x, y) -> (x, y + offset + a sin(2 pi (x + phase)))
struct VShear {
  double a, phase, offset;
  bool operator==(const VShear&) const = default;
};
/// (x, y) -> (x + a s(x) s(y), y) with s(t) = (1 - cos 2 pi t)/2, |a| <= 0.3
struct ProductShear {
  double a;
  bool operator==(const ProductShear&) const = default;
};
/// Inverse of a ProductShear; solved by safeguarded Newton in x.
struct InverseProductShear {
  double a;
  bool operator==(const InverseProductShear&) const = default;
};

}  // namespace prim

using Primitive = std::variant<prim::Translation, prim::HShear, prim::VShear,
                               prim::ProductShear, prim::InverseProductShear>;

/// s(t) = 1/2 - 1/2 cos(2 pi t), the bump displacement used by shears.
double bump(double t);

class LiftedMap {
 public:
  /// The identity map.
  LiftedMap() = default;

  static LiftedMap translation(const Vec2& v);
  static LiftedMap hshear(double a, double phase, double offset);
  static LiftedMap vshear(double a, double phase, double offset);
  /// Throws std::invalid_argument unless |a| <= 0.3.
  static LiftedMap product_shear(double a);
  /// Applies `maps` left to right: the first element acts first.
  static LiftedMap compose(const std::vector<LiftedMap>& maps);

  LiftPoint operator()(const LiftPoint& p) const;

  /// Primitive steps in application order (nested compositions flattened).
  const std::vector<Primitive>& steps() const { return steps_; }

  /// Structural equality of the step lists.
  bool operator==(const LiftedMap& o) const { return steps_ == o.steps_; }

 private:
  explicit LiftedMap(std::vector<Primitive> steps) : steps_(std::move(steps)) {}
  friend LiftedMap invert(const LiftedMap& map);

  std::vector<Primitive> steps_;
};

inline LiftPoint eval(const LiftedMap& map, const LiftPoint& p) { return map(p); }

/// Closed-form inverse; compositions are reversed step by step.
LiftedMap invert(const LiftedMap& map);

/// f~(p~) - p~ for any lift p~ of p.
Vec2 displacement(const LiftedMap& map, const TorusPoint& p);

/// max ||f~(p~ + v) - f~(p~) - v|| over `samples` random p~ in [-3, 3]^2 and
/// v in {-2, ..., 2}^2.
double check_equivariance(const LiftedMap& map, int samples, std::uint64_t seed);

/// Named constructions used by the worked examples.
namespace maps {

/// (p1 + sin(2 pi p2), p2)
LiftedMap sine_shear();
/// (p1, p2 + sqrt 2)
LiftedMap sqrt2_translation();
/// Horizontal then vertical bump shear; rotation set [0,1]^2 with the four
/// corners realized by fixed points.
LiftedMap mz_square();
/// Compose[HShear(a,0,0), VShear(a,0,0)], an area-preserving twist map.
LiftedMap double_shear(double a);

}  // namespace maps

}  // namespace rotset

#endif  // ROTSET_TORUS_MAP_HPP
