#include "rotset/pseudo.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

#include "rotset/parallel.hpp"
#include "rotset/shift.hpp"

namespace rotset {

namespace {

Vec2 round_vec(const Vec2& v) { return Vec2(std::round(v.x()), std::round(v.y())); }

std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
  return seed ^ (stream * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL);
}

}  // namespace

PseudoSystem::PseudoSystem(LiftedMap g, double eps, int grid, int subsamples)
    : g_(std::move(g)), g_inv_(invert(g_)), eps_(eps), grid_(grid) {
  if (grid < 1) throw std::invalid_argument("grid must be >= 1");
  if (!(eps > std::sqrt(2.0) / grid))
    throw std::invalid_argument("eps must exceed the cell diagonal sqrt(2)/grid");
  if (subsamples < 0) throw std::invalid_argument("subsamples must be >= 0");
  subsamples_ = subsamples > 0 ? subsamples : sound_subsamples(g_);
  inverse_subsamples_ = subsamples > 0 ? subsamples : sound_subsamples(g_inv_);
}

std::vector<Vec2> perturbations(const PseudoSystem& sys, const PseudoOrbit& orbit) {
  std::vector<Vec2> out;
  for (std::size_t i = 0; i + 1 < orbit.points.size(); ++i)
    out.push_back(orbit.points[i + 1] - sys.map()(orbit.points[i]));
  return out;
}

double max_step_error(const PseudoSystem& sys, const PseudoOrbit& orbit) {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < orbit.points.size(); ++i)
    worst = std::max(worst, (orbit.points[i + 1] - sys.map()(orbit.points[i])).norm());
  return worst;
}

bool is_valid(const PseudoSystem& sys, const PseudoOrbit& orbit) {
  return !orbit.points.empty() && max_step_error(sys, orbit) < sys.eps();
}

PseudoOrbit concat(const PseudoOrbit& first, const PseudoOrbit& second) {
  if (first.points.empty() || second.points.empty())
    throw std::invalid_argument("orbit has no points");
  const Vec2 gap = first.points.back() - second.points.front();
  const Vec2 shift = round_vec(gap);
  if ((gap - shift).norm() > 1e-9)
    throw std::invalid_argument("orbits do not meet");
  PseudoOrbit out = first;
  for (std::size_t i = 1; i < second.points.size(); ++i)
    out.points.push_back(second.points[i] + shift);
  return out;
}

GridSet theta_step(const PseudoSystem& sys, const GridSet& s) {
  return s.image(sys.map(), sys.subsamples()).dilate(sys.eps());
}

GridSet theta_back_step(const PseudoSystem& sys, const GridSet& s) {
  return s.dilate(sys.eps()).image(sys.inverse(), sys.inverse_subsamples());
}

GridSet theta_forward(const PseudoSystem& sys, const TorusPoint& p, int k) {
  if (k < 0) throw std::invalid_argument("k must be >= 0");
  GridSet s = GridSet::single(sys.grid(), p);
  for (int i = 0; i < k; ++i) s = theta_step(sys, s);
  return s;
}

GridSet theta_backward(const PseudoSystem& sys, const TorusPoint& p, int k) {
  if (k < 0) throw std::invalid_argument("k must be >= 0");
  GridSet s = GridSet::single(sys.grid(), p);
  for (int i = 0; i < k; ++i) s = theta_back_step(sys, s);
  return s;
}

std::optional<int> coverage_bound(const PseudoSystem& sys, const TorusPoint& p, int k_cap) {
  if (k_cap < 1) throw std::invalid_argument("k_cap must be >= 1");
  GridSet reached = GridSet::single(sys.grid(), p);
  if (reached.is_full()) return 0;
  GridSet frontier = reached;
  for (int k = 1; k <= k_cap; ++k) {
    const GridSet next = theta_step(sys, frontier);
    GridSet fresh(sys.grid());
    for (const auto& c : next.cells())
      if (!reached.test(c)) fresh.set(c);
    if (fresh.empty()) return std::nullopt;
    reached |= fresh;
    if (reached.is_full()) return k;
    frontier = std::move(fresh);
  }
  return std::nullopt;
}

namespace {

// Cells whose centre lies within `push` of the point q.
template <typename Visit>
void cells_near(const GridSet& shape, const Vec2& q, double push, Visit&& visit) {
  const int n = shape.resolution();
  const int reach = int(std::ceil(push * n)) + 1;
  const Cell here = shape.cell_of(TorusPoint(q));
  for (int di = -reach; di <= reach; ++di)
    for (int dj = -reach; dj <= reach; ++dj) {
      const int i = shape.wrap(here.first + di), j = shape.wrap(here.second + dj);
      const Vec2 v = min_image(shape.center(i, j) - q);
      if (v.norm() <= push) visit(i, j, v);
    }
}

}  // namespace

ConnectorPlanner::ConnectorPlanner(const PseudoSystem& sys, int k_cap)
    : sys_(sys), k_cap_(k_cap) {
  if (k_cap < 1) throw std::invalid_argument("k_cap must be >= 1");
  const GridSet shape(sys.grid());
  const std::size_t cells = shape.cell_count();
  std::vector<std::vector<int>> succ(cells);
  std::vector<std::size_t> indegree(cells, 0);
  for (int i = 0; i < sys.grid(); ++i)
    for (int j = 0; j < sys.grid(); ++j) {
      const std::size_t k = shape.index(i, j);
      cells_near(shape, sys.map()(shape.center(i, j)), sys.max_push(),
                 [&](int a, int b, const Vec2&) {
                   const std::size_t d = shape.index(a, b);
                   succ[k].push_back(int(d));
                   ++indegree[d];
                 });
    }
  pred_start_.assign(cells + 1, 0);
  for (std::size_t k = 0; k < cells; ++k) pred_start_[k + 1] = pred_start_[k] + indegree[k];
  pred_.resize(pred_start_.back());
  std::vector<std::size_t> fill(pred_start_.begin(), pred_start_.end() - 1);
  for (std::size_t k = 0; k < cells; ++k)
    for (int d : succ[k]) pred_[fill[std::size_t(d)]++] = int(k);
}

const std::vector<int>& ConnectorPlanner::levels(const TorusPoint& to) {
  const auto key = std::make_pair(to.x(), to.y());
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  const GridSet shape(sys_.grid());
  std::vector<int> level(shape.cell_count(), -1);
  std::deque<int> queue;
  // Level 1: one push from g(centre) lands exactly on `to`.
  for (int i = 0; i < sys_.grid(); ++i)
    for (int j = 0; j < sys_.grid(); ++j)
      if (min_image(to.lift() - sys_.map()(shape.center(i, j))).norm() <= sys_.max_push()) {
        level[shape.index(i, j)] = 1;
        queue.push_back(int(shape.index(i, j)));
      }
  while (!queue.empty()) {
    const int d = queue.front();
    queue.pop_front();
    if (level[std::size_t(d)] >= k_cap_) continue;
    for (std::size_t e = pred_start_[std::size_t(d)]; e < pred_start_[std::size_t(d) + 1]; ++e) {
      const int c = pred_[e];
      if (level[std::size_t(c)] >= 0) continue;
      level[std::size_t(c)] = level[std::size_t(d)] + 1;
      queue.push_back(c);
    }
  }
  return cache_.emplace(key, std::move(level)).first->second;
}

PseudoOrbit ConnectorPlanner::connect(const TorusPoint& from, const TorusPoint& to) {
  PseudoOrbit orbit = PseudoOrbit::at(from);
  if (min_image(to.lift() - from.lift()).norm() < 1e-12) return orbit;

  const std::vector<int>& level = levels(to);
  const GridSet shape(sys_.grid());
  const double push = sys_.max_push();
  LiftPoint q = from.lift();
  while (true) {
    const LiftPoint gq = sys_.map()(q);
    const Vec2 direct = min_image(to.lift() - gq);
    if (direct.norm() <= push) {
      orbit.points.push_back(gq + direct);
      return orbit;
    }
    // Next centre: lowest level, then shorter push, then smaller cell.
    std::tuple<int, double, int, int> best{-1, 0.0, 0, 0};
    Vec2 best_push = Vec2::Zero();
    cells_near(shape, gq, push, [&](int i, int j, const Vec2& v) {
      const int lv = level[shape.index(i, j)];
      if (lv < 0) return;
      const std::tuple<int, double, int, int> key{lv, v.norm(), i, j};
      if (std::get<0>(best) < 0 || key < best) {
        best = key;
        best_push = v;
      }
    });
    if (std::get<0>(best) < 0 || orbit.length() > std::size_t(k_cap_) + 1)
      throw UnreachableError();
    q = gq + best_push;
    orbit.points.push_back(q);
  }
}

PseudoOrbit find_connector(const PseudoSystem& sys, const TorusPoint& from,
                           const TorusPoint& to, int k_cap) {
  ConnectorPlanner planner(sys, k_cap);
  return planner.connect(from, to);
}

Cycle close_cycle(const PseudoSystem& sys, ConnectorPlanner& planner, const PseudoOrbit& open) {
  (void)sys;
  if (open.points.empty()) throw std::invalid_argument("orbit has no points");
  Cycle cycle;
  cycle.open_steps = long(open.length());
  cycle.open_displacement = open.displacement();
  const PseudoOrbit back = planner.connect(TorusPoint(open.points.back()), open.start());
  cycle.orbit = concat(open, back);
  if (cycle.orbit.length() == 0) throw std::invalid_argument("cycle has no steps");
  // Snap the closing point so the displacement is exactly integral.
  cycle.displacement = round_vec(cycle.orbit.displacement());
  cycle.orbit.points.back() = cycle.orbit.points.front() + cycle.displacement;
  return cycle;
}

SpliceResult splice_periodic(const PseudoSystem& sys, const Cycle& A, const Cycle& B,
                             long a, long b) {
  (void)sys;
  if (b < 1 || a < 0 || a > b) throw std::invalid_argument("need 0 <= a <= b, b >= 1");
  if (A.steps() < 1 || B.steps() < 1) throw std::invalid_argument("cycle has no steps");
  const Vec2 base_gap = A.orbit.points.front() - B.orbit.points.front();
  const Vec2 b_shift = round_vec(base_gap);
  if ((base_gap - b_shift).norm() > 1e-9)
    throw std::invalid_argument("cycles are not based at the same point");

  const long MA = A.steps(), MB = B.steps();
  SpliceResult out;
  if (a == 0) {
    out.repeats_b = 1;
  } else if (a == b) {
    out.repeats_a = 1;
  } else {
    const long ga = a * MB, gb = (b - a) * MA;
    const long g = std::gcd(ga, gb);
    out.repeats_a = ga / g;
    out.repeats_b = gb / g;
  }

  PseudoOrbit& orbit = out.orbit;
  orbit.points.reserve(std::size_t(out.repeats_a * MA + out.repeats_b * MB + 1));
  orbit.points.push_back(A.orbit.points.front());
  Vec2 offset = Vec2::Zero();
  for (long r = 0; r < out.repeats_a; ++r) {
    for (long i = 1; i <= MA; ++i) orbit.points.push_back(A.orbit.points[i] + offset);
    offset += A.displacement;
  }
  offset += b_shift;
  for (long r = 0; r < out.repeats_b; ++r) {
    for (long i = 1; i <= MB; ++i) orbit.points.push_back(B.orbit.points[i] + offset);
    offset += B.displacement;
  }

  const double total = double(orbit.length());
  out.rotation = orbit.displacement() / total;
  out.predicted = (double(out.repeats_a) * A.displacement +
                   double(out.repeats_b) * B.displacement) / total;
  out.connector_steps = out.repeats_a * A.connector_steps() + out.repeats_b * B.connector_steps();
  return out;
}

SpliceResult splice_periodic(const PseudoSystem& sys, const PseudoOrbit& A,
                             const PseudoOrbit& B, long a, long b, int k_cap) {
  ConnectorPlanner planner(sys, k_cap);
  const Cycle ca = close_cycle(sys, planner, A);
  const Cycle cb = close_cycle(sys, planner, B);
  return splice_periodic(sys, ca, cb, a, b);
}

PushPolicy PushPolicy::constant(const Vec2& direction) {
  const double len = direction.norm();
  if (!(len > 0)) throw std::invalid_argument("direction must be nonzero");
  return PushPolicy(Kind::Constant, direction / len, 0);
}

Vec2 PushPolicy::perturbation(const PseudoSystem& sys, std::uint64_t stream, long step) const {
  switch (kind_) {
    case Kind::None:
      return Vec2::Zero();
    case Kind::Constant:
      return sys.max_push() * direction_;
    case Kind::Random: {
      const std::uint64_t key = mix(seed_, stream);
      const double r = sys.max_push() * std::sqrt(counter_uniform(key, 2 * std::uint64_t(step)));
      const double t = 2.0 * M_PI * counter_uniform(key, 2 * std::uint64_t(step) + 1);
      return Vec2(r * std::cos(t), r * std::sin(t));
    }
  }
  return Vec2::Zero();
}

std::string PushPolicy::describe() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::None:
      out << "none";
      break;
    case Kind::Constant:
      out << "constant(" << direction_.x() << "," << direction_.y() << ")";
      break;
    case Kind::Random:
      out << "random(" << seed_ << ")";
      break;
  }
  return out.str();
}

PseudoOrbit policy_orbit(const PseudoSystem& sys, const TorusPoint& start,
                         const PushPolicy& policy, long n, std::uint64_t stream) {
  if (n < 0) throw std::invalid_argument("n must be nonnegative");
  PseudoOrbit orbit = PseudoOrbit::at(start);
  orbit.points.reserve(std::size_t(n) + 1);
  for (long i = 0; i < n; ++i)
    orbit.points.push_back(sys.map()(orbit.points.back()) + policy.perturbation(sys, stream, i));
  return orbit;
}

void PseudoPlan::validate() const {
  if (base_points.empty()) throw std::invalid_argument("plan.base_points must be nonempty");
  if (policies.empty()) throw std::invalid_argument("plan.policies must be nonempty");
  if (n_list.empty() || n_list.front() < 1)
    throw std::invalid_argument("plan.n_list entries must be >= 1");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      throw std::invalid_argument("plan.n_list must be strictly increasing");
  for (const auto& [a, b] : splice_ratios)
    if (b < 1 || a < 0 || a > b) throw std::invalid_argument("plan.splice_ratios need 0 <= a <= b");
  if (cycle_length < 1) throw std::invalid_argument("plan.cycle_length must be >= 1");
  if (k_cap < 1) throw std::invalid_argument("plan.k_cap must be >= 1");
  if (!(resolution > 0)) throw std::invalid_argument("plan.resolution must be positive");
}

PseudoPlan default_pseudo_plan(std::uint64_t seed) {
  PseudoPlan plan;
  for (const auto& p : base_grid_points(4)) plan.base_points.push_back(p);
  for (int k = 0; k < 24; ++k) {
    const double t = 2.0 * M_PI * k / 24.0;
    plan.policies.push_back(PushPolicy::constant(Vec2(std::cos(t), std::sin(t))));
  }
  plan.policies.push_back(PushPolicy::none());
  for (std::uint64_t s = 0; s < 4; ++s) plan.policies.push_back(PushPolicy::random(seed + s));
  plan.n_list = {50, 100, 200};
  plan.splice_ratios = {{0, 4}, {1, 4}, {2, 4}, {3, 4}, {4, 4}};
  return plan;
}

RotSetEstimate pseudo_rotset(const PseudoSystem& sys, const PseudoPlan& plan,
                             PseudoAudit* audit) {
  plan.validate();
  const std::vector<long> tail(plan.n_list.begin() + std::ptrdiff_t(plan.n_list.size() / 2),
                               plan.n_list.end());
  const long n_max = plan.n_list.back();
  const long n_half = std::max(1L, n_max / 2);
  std::set<long> wanted(tail.begin(), tail.end());
  wanted.insert(n_half);
  const std::vector<long> ns(wanted.begin(), wanted.end());

  struct Slot {
    std::vector<std::pair<long, Vec2>> rho;
    double step_error = 0.0;
  };
  const std::size_t nb = plan.base_points.size(), np = plan.policies.size();
  std::vector<Slot> slots(nb * np);
  parallel_for(slots.size(), [&](std::size_t job) {
    const std::size_t bi = job / np, pi = job % np;
    const LiftPoint start = plan.base_points[bi].lift();
    LiftPoint q = start;
    long done = 0;
    for (long n : ns) {
      for (; done < n; ++done) {
        const LiftPoint gq = sys.map()(q);
        q = gq + plan.policies[pi].perturbation(sys, bi, done);
        slots[job].step_error = std::max(slots[job].step_error, (q - gq).norm());
      }
      slots[job].rho.emplace_back(n, (q - start) / double(n));
    }
  });

  PointCloud cloud, at_max, at_half;
  std::vector<SampleTag> tags;
  double step_error = 0.0;
  std::size_t orbits = slots.size();
  for (const auto& slot : slots) step_error = std::max(step_error, slot.step_error);
  const std::set<long> tail_set(tail.begin(), tail.end());
  for (std::size_t job = 0; job < slots.size(); ++job)
    for (const auto& [n, r] : slots[job].rho) {
      if (tail_set.count(n)) {
        cloud.push_back(r);
        tags.push_back(SampleTag{n, int(job % np), plan.base_points[job / np].lift(), false});
      }
      if (n == n_max) at_max.push_back(r);
      if (n == n_half) at_half.push_back(r);
    }

  std::vector<std::size_t> constant;
  for (std::size_t i = 0; i < np; ++i)
    if (plan.policies[i].kind() == PushPolicy::Kind::Constant) constant.push_back(i);
  if (!plan.splice_ratios.empty() && !constant.empty()) {
    const TorusPoint p0 = plan.base_points.front();
    ConnectorPlanner planner(sys, plan.k_cap);
    std::vector<Cycle> cycles;
    for (std::size_t i : constant) {
      cycles.push_back(close_cycle(sys, planner,
                                   policy_orbit(sys, p0, plan.policies[i], plan.cycle_length)));
      step_error = std::max(step_error, max_step_error(sys, cycles.back().orbit));
    }
    orbits += cycles.size();
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> jobs;
    for (std::size_t u = 0; u < cycles.size(); ++u)
      for (std::size_t v = u + 1; v < cycles.size(); ++v)
        for (std::size_t r = 0; r < plan.splice_ratios.size(); ++r) jobs.emplace_back(u, v, r);
    std::vector<std::pair<long, Vec2>> spliced(jobs.size());
    std::vector<double> splice_error(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t k) {
      const auto [u, v, r] = jobs[k];
      const auto [a, b] = plan.splice_ratios[r];
      const SpliceResult s = splice_periodic(sys, cycles[u], cycles[v], a, b);
      spliced[k] = {long(s.orbit.length()), s.rotation};
      splice_error[k] = max_step_error(sys, s.orbit);
    });
    orbits += jobs.size();
    for (double e : splice_error) step_error = std::max(step_error, e);
    for (std::size_t k = 0; k < jobs.size(); ++k) {
      cloud.push_back(spliced[k].second);
      tags.push_back(SampleTag{spliced[k].first, int(np + k), p0.lift(), false});
    }
  }

  RotSetEstimate est;
  for (std::size_t i : canonical_order(cloud)) {
    est.cloud.push_back(cloud[i]);
    est.tags.push_back(tags[i]);
  }
  est.n_min = tail.front();
  est.n_max = n_max;
  est.hausdorff_to_half_n = n_half == n_max ? 0.0 : hausdorff(at_max, at_half);
  attach_diagnostics(est, plan.resolution);
  if (audit) *audit = PseudoAudit{orbits, step_error};
  return est;
}

}  // namespace rotset
