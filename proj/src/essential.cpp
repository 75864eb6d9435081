#include "rotset/essential.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "rotset/parallel.hpp"
#include "rotset/rotation.hpp"

namespace rotset {

namespace {

// Breadth-first search over 4-connected cells accepted by `inside`, keeping
// the integer lift of every visited cell. A component is essential when some
// cell is reached twice with different lifts.
class LiftedSearch {
 public:
  explicit LiftedSearch(int n) : n_(n), seen_(std::size_t(n) * n, 0), lift_(seen_.size()) {}

  template <typename Inside>
  bool component(int i0, int j0, Inside&& inside, std::vector<Cell>* cells) {
    const GridSet shape(n_);
    bool essential = false;
    std::deque<Cell> queue;
    seen_[shape.index(i0, j0)] = 1;
    lift_[shape.index(i0, j0)] = {0, 0};
    queue.emplace_back(i0, j0);
    static constexpr int kSteps[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    while (!queue.empty()) {
      const auto [i, j] = queue.front();
      queue.pop_front();
      if (cells) cells->emplace_back(i, j);
      const Cell base = lift_[shape.index(i, j)];
      for (const auto& st : kSteps) {
        int ni = i + st[0], nj = j + st[1];
        Cell lift = base;
        if (ni == n_) { ni = 0; ++lift.first; }
        if (ni < 0) { ni = n_ - 1; --lift.first; }
        if (nj == n_) { nj = 0; ++lift.second; }
        if (nj < 0) { nj = n_ - 1; --lift.second; }
        if (!inside(ni, nj)) continue;
        const std::size_t k = shape.index(ni, nj);
        if (seen_[k]) {
          if (lift_[k] != lift) essential = true;
          continue;
        }
        seen_[k] = 1;
        lift_[k] = lift;
        queue.emplace_back(ni, nj);
      }
    }
    return essential;
  }

  bool seen(std::size_t k) const { return seen_[k] != 0; }

 private:
  int n_;
  std::vector<std::uint8_t> seen_;
  std::vector<Cell> lift_;
};

bool essential_cells(const GridSet& s, const std::vector<Cell>& cells) {
  LiftedSearch search(s.resolution());
  auto inside = [&](int i, int j) { return s.test(i, j); };
  for (const auto& [i, j] : cells)
    if (!search.seen(s.index(i, j)) && search.component(i, j, inside, nullptr)) return true;
  return false;
}

int default_subsamples(const Cocycle& c) {
  int s = 2;
  for (const auto& m : c.maps()) s = std::max(s, sound_subsamples(m));
  return s;
}

// Incremental closure: only cells added in the previous round are imaged.
class Closure {
 public:
  Closure(const Cocycle& c, const GridSet& seed, int subsamples)
      : c_(c), subsamples_(subsamples), set_(seed) {
    for (const auto& m : c.maps()) set_ |= grid_image(m, seed, subsamples);
    for (const auto& cell : set_.cells()) {
      all_.push_back(cell);
      if (!seed.test(cell)) frontier_.push_back(cell);
    }
    rounds_ = 1;
  }

  // Returns false once a round adds nothing.
  bool step() {
    std::vector<Cell> added;
    for (const auto& m : c_.maps()) set_.mark_image(m, frontier_, subsamples_, &added);
    ++rounds_;
    frontier_ = std::move(added);
    all_.insert(all_.end(), frontier_.begin(), frontier_.end());
    return !frontier_.empty();
  }

  const GridSet& set() const { return set_; }
  const std::vector<Cell>& cells() const { return all_; }
  int rounds() const { return rounds_; }
  bool settled() const { return frontier_.empty(); }

 private:
  const Cocycle& c_;
  int subsamples_;
  GridSet set_;
  std::vector<Cell> frontier_, all_;
  int rounds_ = 0;
};

}  // namespace

GridSet grid_image(const LiftedMap& map, const GridSet& s, int subsamples) {
  if (subsamples < 2) throw std::invalid_argument("subsamples must be >= 2");
  return s.image(map, subsamples, true);
}

ClosureResult forward_closure(const Cocycle& c, const GridSet& seed, int cap, int subsamples) {
  if (cap < 1) throw std::invalid_argument("cap must be >= 1");
  Closure closure(c, seed, subsamples > 0 ? subsamples : default_subsamples(c));
  while (!closure.settled() && closure.rounds() < cap) closure.step();
  ClosureResult out;
  out.converged = closure.settled();
  out.set = closure.set();
  out.rounds = closure.rounds();
  return out;
}

bool is_essential_set(const GridSet& s) { return essential_cells(s, s.cells()); }

GridSet fill_set(const GridSet& s) {
  const int n = s.resolution();
  GridSet out = s;
  LiftedSearch search(n);
  auto outside = [&](int i, int j) { return !s.test(i, j); };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (s.test(i, j) || search.seen(s.index(i, j))) continue;
      std::vector<Cell> component;
      if (!search.component(i, j, outside, &component))
        for (const auto& cell : component) out.set(cell);
    }
  return out;
}

std::size_t ClassificationMap::count(Label label) const {
  return std::size_t(std::count(labels.begin(), labels.end(), label));
}

ClassificationMap classify_points(const Cocycle& c, int base_resolution, double ball_radius,
                                  int cap, int subsamples) {
  if (base_resolution < 1) throw std::invalid_argument("base_resolution must be >= 1");
  if (!(ball_radius >= 2.0 / base_resolution))
    throw std::invalid_argument("ball_radius must be >= 2/base_resolution");
  if (cap < 1) throw std::invalid_argument("cap must be >= 1");
  ClassificationMap out;
  out.resolution = base_resolution;
  out.ball_radius = ball_radius;
  out.cap = cap;
  out.subsamples = subsamples > 0 ? subsamples : default_subsamples(c);
  const int n = base_resolution;
  out.labels.assign(std::size_t(n) * n, Label::Undecided);
  const GridSet shape(n);
  parallel_for(out.labels.size(), [&](std::size_t k) {
    const int i = int(k % n), j = int(k / n);
    const GridSet seed = GridSet::ball(n, TorusPoint(shape.center(i, j)), ball_radius);
    Closure closure(c, seed, out.subsamples);
    // Essentiality only grows with the closure, so checking on a doubling
    // schedule gives the same label as checking every round.
    int next_check = 8;
    bool essential = false;
    while (closure.rounds() < cap) {
      const bool changed = closure.step();
      if (!changed) break;
      if (closure.rounds() >= next_check) {
        next_check *= 2;
        if (essential_cells(closure.set(), closure.cells())) {
          essential = true;
          break;
        }
      }
    }
    if (!essential) essential = essential_cells(closure.set(), closure.cells());
    out.labels[k] = essential           ? Label::Essential
                    : closure.settled() ? Label::Inessential
                                        : Label::Undecided;
  });
  return out;
}

double displacement_probe(const Cocycle& c, const std::vector<WordStream>& words,
                          int base_grid, long n_max) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (words.empty()) throw std::invalid_argument("words must be nonempty");
  for (const auto& w : words) require_compatible(c, w);
  const auto points = base_grid_points(base_grid);
  std::vector<double> best(words.size() * points.size(), 0.0);
  parallel_for(best.size(), [&](std::size_t job) {
    const WordStream& w = words[job / points.size()];
    const LiftPoint start = points[job % points.size()].lift();
    CocycleWalker walker(c, start);
    double worst = 0.0;
    for (long i = 0; i < n_max; ++i) {
      walker.apply(w.symbol_at(i));
      worst = std::max(worst, (walker.point() - start).norm());
    }
    best[job] = worst;
  });
  return *std::max_element(best.begin(), best.end());
}

}  // namespace rotset
