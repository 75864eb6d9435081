#include "rotset/torus_map.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace rotset {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMaxProductShear = 0.3;

// x + c s(x) = target, strictly increasing in x for |c| <= 0.3.
double solve_product_shear(double target, double c) {
  double lo = target - std::max(c, 0.0);
  double hi = target - std::min(c, 0.0);
  double x = target - 0.5 * c;
  for (int it = 0; it < 100; ++it) {
    const double h = x + c * bump(x) - target;
    if (h == 0.0) return x;
    if (h > 0)
      hi = x;
    else
      lo = x;
    const double slope = 1.0 + c * std::numbers::pi * std::sin(kTwoPi * x);
    double next = x - h / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-16 * std::max(1.0, std::abs(x))) return next;
    x = next;
  }
  return x;
}

struct Apply {
  LiftPoint& p;
  void operator()(const prim::Translation& t) const { p += t.v; }
  void operator()(const prim::HShear& s) const {
    p.x() += s.offset + s.a * std::sin(kTwoPi * (p.y() + s.phase));
  }
  void operator()(const prim::VShear& s) const {
    p.y() += s.offset + s.a * std::sin(kTwoPi * (p.x() + s.phase));
  }
  void operator()(const prim::ProductShear& s) const {
    p.x() += s.a * bump(p.x()) * bump(p.y());
  }
  void operator()(const prim::InverseProductShear& s) const {
    p.x() = solve_product_shear(p.x(), s.a * bump(p.y()));
  }
};

struct Invert {
  Primitive operator()(const prim::Translation& t) const {
    return prim::Translation{-t.v};
  }
  Primitive operator()(const prim::HShear& s) const {
    return prim::HShear{-s.a, s.phase, -s.offset};
  }
  Primitive operator()(const prim::VShear& s) const {
    return prim::VShear{-s.a, s.phase, -s.offset};
  }
  Primitive operator()(const prim::ProductShear& s) const {
    return prim::InverseProductShear{s.a};
  }
  Primitive operator()(const prim::InverseProductShear& s) const {
    return prim::ProductShear{s.a};
  }
};

}  // namespace

double bump(double t) { return 0.5 - 0.5 * std::cos(kTwoPi * t); }

Vec2 min_image(const Vec2& v) {
  Vec2 r;
  for (int i = 0; i < 2; ++i) {
    const double up = v[i] - std::floor(v[i]);
    const double down = up - 1.0;
    r[i] = std::abs(down) <= std::abs(up) ? down : up;
  }
  return r;
}

LiftedMap LiftedMap::translation(const Vec2& v) {
  return LiftedMap({prim::Translation{v}});
}

LiftedMap LiftedMap::hshear(double a, double phase, double offset) {
  return LiftedMap({prim::HShear{a, phase, offset}});
}

LiftedMap LiftedMap::vshear(double a, double phase, double offset) {
  return LiftedMap({prim::VShear{a, phase, offset}});
}

LiftedMap LiftedMap::product_shear(double a) {
  if (!(std::abs(a) <= kMaxProductShear))
    throw std::invalid_argument("product_shear requires |a| <= 0.3");
  return LiftedMap({prim::ProductShear{a}});
}

LiftedMap LiftedMap::compose(const std::vector<LiftedMap>& maps) {
  std::vector<Primitive> steps;
  for (const auto& m : maps) steps.insert(steps.end(), m.steps_.begin(), m.steps_.end());
  return LiftedMap(std::move(steps));
}

LiftPoint LiftedMap::operator()(const LiftPoint& p) const {
  LiftPoint q = p;
  for (const auto& step : steps_) std::visit(Apply{q}, step);
  return q;
}

LiftedMap invert(const LiftedMap& map) {
  std::vector<Primitive> steps;
  steps.reserve(map.steps_.size());
  for (auto it = map.steps_.rbegin(); it != map.steps_.rend(); ++it)
    steps.push_back(std::visit(Invert{}, *it));
  return LiftedMap(std::move(steps));
}

Vec2 displacement(const LiftedMap& map, const TorusPoint& p) {
  return map(p.lift()) - p.lift();
}

double check_equivariance(const LiftedMap& map, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const LiftPoint p(coord(rng), coord(rng));
    const LiftPoint fp = map(p);
    for (int i = -2; i <= 2; ++i)
      for (int j = -2; j <= 2; ++j) {
        const Vec2 v(i, j);
        worst = std::max(worst, (map(p + v) - fp - v).norm());
      }
  }
  return worst;
}

namespace maps {

LiftedMap sine_shear() { return LiftedMap::hshear(1.0, 0.0, 0.0); }

LiftedMap sqrt2_translation() {
  return LiftedMap::translation(Vec2(0.0, std::numbers::sqrt2));
}

LiftedMap mz_square() {
  return LiftedMap::compose({LiftedMap::hshear(0.5, -0.25, 0.5),
                             LiftedMap::vshear(0.5, -0.25, 0.5)});
}

LiftedMap double_shear(double a) {
  return LiftedMap::compose(
      {LiftedMap::hshear(a, 0.0, 0.0), LiftedMap::vshear(a, 0.0, 0.0)});
}

}  // namespace maps

}  // namespace rotset
