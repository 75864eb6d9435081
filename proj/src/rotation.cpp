#include "rotset/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "rotset/parallel.hpp"

namespace rotset {

namespace {

struct Samples {
  PointCloud cloud;
  std::vector<SampleTag> tags;

  void add(const Vec2& v, const SampleTag& tag) {
    cloud.push_back(v);
    tags.push_back(tag);
  }
  void append(const Samples& other) {
    cloud.insert(cloud.end(), other.cloud.begin(), other.cloud.end());
    tags.insert(tags.end(), other.tags.begin(), other.tags.end());
  }
};

// Keeps one sample per 1e-6 key, in canonical (sorted) order.
void canonicalize(Samples& s) {
  Samples out;
  for (std::size_t i : canonical_order(s.cloud)) out.add(s.cloud[i], s.tags[i]);
  s = std::move(out);
}

struct PerWordRun {
  Samples samples;     // rho at K periods
  PointCloud half;     // rho at K/2 periods (empty when K < 2)
  Polygon hull;
  PointCloud fill;
};

PerWordRun run_per_word(const Cocycle& c, const PeriodicWord& w, long K, int grid,
                        int word_id, const PerWordOptions& options) {
  if (K < 1) throw std::invalid_argument("K must be >= 1");
  if (grid < 1) throw std::invalid_argument("grid must be >= 1");
  const WordStream stream = WordStream::periodic(w.symbols);
  require_compatible(c, stream);
  const long period = long(w.period());
  std::vector<long> ns;
  if (K >= 2) ns.push_back((K / 2) * period);
  ns.push_back(K * period);

  const auto points = base_grid_points(grid);
  std::vector<Vec2> full(points.size()), half(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    sample_rho(c, stream, points[i].lift(), ns, [&](std::size_t k, const Vec2& r) {
      (k + 1 == ns.size() ? full : half)[i] = r;
    });
  });

  PerWordRun run;
  for (std::size_t i = 0; i < points.size(); ++i) {
    run.samples.add(full[i], SampleTag{K * period, word_id, points[i].lift(), false});
    if (K >= 2) run.half.push_back(half[i]);
  }
  run.hull = convex_hull(run.samples.cloud);
  if (options.convex_fill) run.fill = hull_fill(run.hull, options.fill_spacing);
  return run;
}

RotSetEstimate finish(Samples samples, double resolution, long n_min, long n_max,
                      double half_distance) {
  canonicalize(samples);
  RotSetEstimate est;
  est.cloud = std::move(samples.cloud);
  est.tags = std::move(samples.tags);
  est.n_min = n_min;
  est.n_max = n_max;
  est.hausdorff_to_half_n = half_distance;
  attach_diagnostics(est, resolution);
  return est;
}

}  // namespace

void SamplingPlan::validate() const {
  if (base_grid < 1) throw std::invalid_argument("plan.base_grid must be >= 1");
  if (words.empty()) throw std::invalid_argument("plan.words must be nonempty");
  if (n_list.empty()) throw std::invalid_argument("plan.n_list must be nonempty");
  if (n_list.front() < 1) throw std::invalid_argument("plan.n_list entries must be >= 1");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      throw std::invalid_argument("plan.n_list must be strictly increasing");
}

std::vector<long> SamplingPlan::tail() const {
  return {n_list.begin() + std::ptrdiff_t(n_list.size() / 2), n_list.end()};
}

void require_compatible(const Cocycle& c, const WordStream& w) {
  if (w.min_alphabet() > c.alphabet_size())
    throw std::invalid_argument("word " + w.describe() +
                                " uses symbols outside the cocycle alphabet");
}

std::vector<TorusPoint> base_grid_points(int grid) {
  std::vector<TorusPoint> pts;
  pts.reserve(std::size_t(grid) * std::size_t(grid));
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j) pts.emplace_back(double(i) / grid, double(j) / grid);
  return pts;
}

SamplingPlan default_plan(int alphabet_size, std::uint64_t seed) {
  if (alphabet_size < 1) throw std::invalid_argument("alphabet_size must be >= 1");
  SamplingPlan plan;
  plan.base_grid = 32;
  plan.n_list = {25, 50, 100, 150, 200};

  int max_period = 6;
  while (max_period > 1 &&
         periodic_words_upto(alphabet_size, max_period).size() > 200)
    --max_period;
  for (auto& w : periodic_words_upto(alphabet_size, max_period))
    plan.words.push_back(WordStream::periodic(w.symbols));

  for (Symbol a = 0; a < alphabet_size; ++a)
    for (Symbol b = 0; b < alphabet_size; ++b) {
      if (a == b) continue;
      for (long m : {10L, 50L}) {
        plan.words.push_back(WordStream::block({{a, m}, {b, m}}));
        plan.words.push_back(WordStream::block({{a, 3 * m}, {b, m}}));
      }
    }

  std::uint64_t stream_seed = seed;
  if (alphabet_size == 2) {
    for (int k = 1; k <= 9; ++k) {
      const double b = 0.1 * k;
      plan.words.push_back(WordStream::random(stream_seed++, {b, 1.0 - b}));
    }
  } else if (alphabet_size > 2) {
    plan.words.push_back(WordStream::random(
        stream_seed++, std::vector<double>(alphabet_size, 1.0 / alphabet_size)));
    for (int s = 0; s < alphabet_size; ++s) {
      std::vector<double> bias(alphabet_size, 0.1 / (alphabet_size - 1));
      bias[s] = 0.9;
      plan.words.push_back(WordStream::random(stream_seed++, bias));
    }
  }
  return plan;
}

void add_bias_sweep(SamplingPlan& plan, int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("bias sweep count must be >= 1");
  for (int k = 0; k < count; ++k) {
    const double b = (k + 0.5) / count;
    plan.words.push_back(WordStream::random(seed + std::uint64_t(k), {b, 1.0 - b}));
  }
}

PointCloud sample_Dn(const Cocycle& c, const SamplingPlan& plan, long n) {
  plan.validate();
  if (std::find(plan.n_list.begin(), plan.n_list.end(), n) == plan.n_list.end())
    throw std::invalid_argument("n is not in plan.n_list");
  for (const auto& w : plan.words) require_compatible(c, w);
  const auto points = base_grid_points(plan.base_grid);
  PointCloud cloud(plan.words.size() * points.size());
  parallel_for(cloud.size(), [&](std::size_t job) {
    const auto& w = plan.words[job / points.size()];
    const auto& p = points[job % points.size()];
    cloud[job] = (advance(c, w, p.lift(), n) - p.lift()) / double(n);
  });
  return cloud;
}

RotSetEstimate estimate_mz(const Cocycle& c, const SamplingPlan& plan,
                           const EstimateOptions& options) {
  plan.validate();
  for (const auto& w : plan.words) require_compatible(c, w);
  const std::vector<long> tail = plan.tail();
  const long n_max = plan.n_max();
  const long n_half = std::max(1L, n_max / 2);
  std::set<long> wanted(tail.begin(), tail.end());
  wanted.insert(n_half);
  const std::vector<long> ns(wanted.begin(), wanted.end());
  const std::set<long> tail_set(tail.begin(), tail.end());

  const auto points = base_grid_points(plan.base_grid);
  std::vector<Samples> per_word(plan.words.size());
  std::vector<PointCloud> at_max(plan.words.size()), at_half(plan.words.size());
  parallel_for(plan.words.size(), [&](std::size_t wi) {
    const auto& w = plan.words[wi];
    for (const auto& p : points)
      sample_rho(c, w, p.lift(), ns, [&](std::size_t k, const Vec2& r) {
        if (tail_set.count(ns[k]))
          per_word[wi].add(r, SampleTag{ns[k], int(wi), p.lift(), false});
        if (ns[k] == n_max) at_max[wi].push_back(r);
        if (ns[k] == n_half) at_half[wi].push_back(r);
      });
  });

  Samples all;
  PointCloud full_max, full_half;
  for (std::size_t wi = 0; wi < plan.words.size(); ++wi) {
    all.append(per_word[wi]);
    full_max.insert(full_max.end(), at_max[wi].begin(), at_max[wi].end());
    full_half.insert(full_half.end(), at_half[wi].begin(), at_half[wi].end());
  }

  long n_min = tail.front();
  if (options.fill_periodic_words) {
    for (std::size_t wi = 0; wi < plan.words.size(); ++wi) {
      const auto& w = plan.words[wi];
      if (!w.is_periodic()) continue;
      const PeriodicWord word = w.periodic_word();
      const long period = long(word.period());
      const long K = std::max(1L, (n_max + period - 1) / period);
      PerWordOptions pw{true, options.fill_spacing};
      const PerWordRun run = run_per_word(c, word, K, plan.base_grid, int(wi), pw);
      all.append(run.samples);
      for (const auto& v : run.fill)
        all.add(v, SampleTag{K * period, int(wi), SampleTag{}.base, true});
      n_min = std::min(n_min, K * period);
    }
  }
  const double half_distance =
      n_half == n_max ? 0.0 : hausdorff(full_max, full_half);
  return finish(std::move(all), options.fill_spacing, n_min,
                n_max, half_distance);
}

RotSetEstimate per_word_rotation_set(const Cocycle& c, const PeriodicWord& w,
                                     long K, int grid, const PerWordOptions& options) {
  PerWordRun run = run_per_word(c, w, K, grid, 0, options);
  const double half_distance = run.half.empty() ? 0.0 : hausdorff(run.samples.cloud, run.half);
  Samples all = run.samples;
  const long n = K * long(w.period());
  for (const auto& v : run.fill) all.add(v, SampleTag{n, 0, SampleTag{}.base, true});
  return finish(std::move(all), options.fill_spacing, n, n, half_distance);
}

RotSetEstimate periodic_union(const Cocycle& c, int max_period, long K, int grid,
                              const PerWordOptions& options) {
  if (max_period < 1) throw std::invalid_argument("max_period must be >= 1");
  const auto words = periodic_words_upto(c.alphabet_size(), max_period);
  Samples all;
  PointCloud full, half;
  long n_min = std::numeric_limits<long>::max(), n_max = 0;
  for (std::size_t wi = 0; wi < words.size(); ++wi) {
    const PerWordRun run = run_per_word(c, words[wi], K, grid, int(wi), options);
    const long n = K * long(words[wi].period());
    n_min = std::min(n_min, n);
    n_max = std::max(n_max, n);
    all.append(run.samples);
    for (const auto& v : run.fill) all.add(v, SampleTag{n, int(wi), SampleTag{}.base, true});
    full.insert(full.end(), run.samples.cloud.begin(), run.samples.cloud.end());
    half.insert(half.end(), run.half.begin(), run.half.end());
  }
  const double half_distance = half.empty() ? 0.0 : hausdorff(full, half);
  return finish(std::move(all), options.fill_spacing, n_min, n_max, half_distance);
}

InclusionReport inclusion_check(const PointCloud& points, const RotSetEstimate& mz,
                                double tol) {
  if (points.empty() || mz.cloud.empty()) throw std::invalid_argument("empty input");
  const geom::KdTree<double> tree(mz.cloud);
  InclusionReport report;
  report.tol = tol;
  for (const auto& p : points) {
    const double d = tree.nearest_distance(p);
    if (d > report.max_violation) {
      report.max_violation = d;
      report.worst = p;
    }
  }
  return report;
}

void attach_diagnostics(RotSetEstimate& est, double resolution) {
  if (est.cloud.empty()) throw std::invalid_argument("empty input");
  if (!(resolution > 0)) throw std::invalid_argument("resolution must be positive");
  est.resolution = resolution;
  est.hull = convex_hull(est.cloud);
  PointCloud thinned;
  for (std::size_t i : canonical_order(est.cloud, resolution))
    thinned.push_back(est.cloud[i]);
  const double spacing =
      thinned.size() < 2 ? resolution : median_nn_spacing(thinned);
  est.connectivity_eps = 2.0 * std::max(spacing, 1e-12);
  est.is_connected = eps_connected(est.cloud, est.connectivity_eps);
  est.convexity_defect =
      est.cloud.size() < 3 ? 0.0 : convexity_defect(est.cloud, est.connectivity_eps);
}

}  // namespace rotset
