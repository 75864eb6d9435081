#include "rotset/io/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <openssl/evp.h>

#include "rotset/essential.hpp"
#include "rotset/io/output.hpp"
#include "rotset/parallel.hpp"
#include "rotset/pseudo.hpp"
#include "rotset/rotation.hpp"

namespace rotset::io {

namespace fs = std::filesystem;

namespace {

const json kEmpty = json::object();

const json& section(const json& doc, const std::string& key) {
  return doc.contains(key) ? doc.at(key) : kEmpty;
}

std::vector<long> get_long_list(const json& j, const std::string& key, const std::string& path) {
  const json& list = require(j, key, path);
  if (!list.is_array()) throw ConfigError("expected an array", path + "." + key);
  std::vector<long> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (!list[i].is_number_integer())
      throw ConfigError("expected an integer", path + "." + key + "[" + std::to_string(i) + "]");
    out.push_back(list[i].get<long>());
  }
  return out;
}

bool get_bool(const json& j, const std::string& key, const std::string& path, bool fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw ConfigError("expected a boolean", path + "." + key);
  return j.at(key).get<bool>();
}

template <typename F>
auto checked(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what(), path);
  }
}

SamplingPlan parse_plan(const json& j, int alphabet, std::uint64_t seed, const std::string& path) {
  SamplingPlan plan = default_plan(alphabet, seed);
  if (j.empty()) return plan;
  plan.base_grid = int(get_integer(j, "base_grid", path, plan.base_grid));
  if (j.contains("n_list")) plan.n_list = get_long_list(j, "n_list", path);
  if (j.contains("words")) {
    const json& list = j.at("words");
    if (!list.is_array()) throw ConfigError("expected an array", path + ".words");
    plan.words.clear();
    for (std::size_t i = 0; i < list.size(); ++i)
      plan.words.push_back(parse_word(list[i], path + ".words[" + std::to_string(i) + "]"));
  }
  if (j.contains("bias_sweep")) {
    if (alphabet != 2) throw ConfigError("bias_sweep needs a two-map cocycle", path + ".bias_sweep");
    const long count = get_integer(j, "bias_sweep", path);
    if (count < 1) throw ConfigError("must be >= 1", path + ".bias_sweep");
    add_bias_sweep(plan, int(count), seed + 1000);
  }
  checked(path, [&] {
    plan.validate();
    return 0;
  });
  return plan;
}

PseudoPlan parse_pseudo_plan(const json& j, std::uint64_t seed, const std::string& path) {
  PseudoPlan plan = default_pseudo_plan(seed);
  if (j.empty()) return plan;
  if (j.contains("base_grid")) {
    plan.base_points = base_grid_points(int(get_integer(j, "base_grid", path)));
  }
  if (j.contains("policies")) {
    const json& list = j.at("policies");
    if (!list.is_array()) throw ConfigError("expected an array", path + ".policies");
    plan.policies.clear();
    for (std::size_t i = 0; i < list.size(); ++i)
      plan.policies.push_back(parse_policy(list[i], path + ".policies[" + std::to_string(i) + "]"));
  }
  if (j.contains("n_list")) plan.n_list = get_long_list(j, "n_list", path);
  if (j.contains("splice_ratios")) {
    const json& list = j.at("splice_ratios");
    if (!list.is_array()) throw ConfigError("expected an array", path + ".splice_ratios");
    plan.splice_ratios.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      const json& r = list[i];
      if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number_integer())
        throw ConfigError("expected [a, b]", path + ".splice_ratios[" + std::to_string(i) + "]");
      plan.splice_ratios.emplace_back(r[0].get<long>(), r[1].get<long>());
    }
  }
  plan.cycle_length = get_integer(j, "cycle_length", path, plan.cycle_length);
  plan.k_cap = int(get_integer(j, "k_cap", path, plan.k_cap));
  plan.resolution = get_number(j, "resolution", path, plan.resolution);
  checked(path, [&] {
    plan.validate();
    return 0;
  });
  return plan;
}

PseudoSystem parse_pseudo_system(const json& j, const std::string& path) {
  const LiftedMap g = parse_map(require(j, "map", path), path + ".map");
  const double eps = get_number(j, "eps", path);
  const int grid = int(get_integer(j, "grid", path));
  const int sub = int(get_integer(j, "subsamples", path, 0));
  return checked(path, [&] { return PseudoSystem(g, eps, grid, sub); });
}

// Union of several estimates, retagged, with fresh diagnostics.
RotSetEstimate merge(const std::vector<RotSetEstimate>& parts, double resolution) {
  RotSetEstimate all;
  PointCloud cloud;
  std::vector<SampleTag> tags;
  all.n_min = parts.empty() ? 0 : parts.front().n_min;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    for (std::size_t i = 0; i < parts[k].cloud.size(); ++i) {
      cloud.push_back(parts[k].cloud[i]);
      SampleTag t = parts[k].tags[i];
      t.word_id = int(k);
      tags.push_back(t);
    }
    all.n_min = std::min(all.n_min, parts[k].n_min);
    all.n_max = std::max(all.n_max, parts[k].n_max);
    all.hausdorff_to_half_n = std::max(all.hausdorff_to_half_n, parts[k].hausdorff_to_half_n);
  }
  for (std::size_t i : canonical_order(cloud)) {
    all.cloud.push_back(cloud[i]);
    all.tags.push_back(tags[i]);
  }
  attach_diagnostics(all, resolution);
  return all;
}

void write_estimate(const fs::path& dir, const RotSetEstimate& est, json summary_extra) {
  fs::create_directories(dir);
  write_file(dir / "points.csv", points_csv(est));
  json summary = summary_json(est);
  for (auto& [k, v] : summary_extra.items()) summary[k] = v;
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  write_file(dir / "plot.svg", plot_svg(est));
}

PointCloud segment_sample(const Vec2& a, const Vec2& b, double spacing) {
  const int steps = std::max(1, int(std::ceil((b - a).norm() / spacing)));
  PointCloud out;
  for (int i = 0; i <= steps; ++i) out.push_back(a + (b - a) * (double(i) / steps));
  return out;
}

PointCloud two_squares(double spacing) {
  PointCloud out;
  const int steps = int(std::lround(1.0 / spacing));
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; j <= steps; ++j) {
      out.emplace_back(i * spacing, j * spacing);
      out.emplace_back(-i * spacing, -j * spacing);
    }
  return out;
}

TorusPoint counter_point(std::uint64_t seed, std::uint64_t i) {
  return TorusPoint(counter_uniform(seed, 2 * i), counter_uniform(seed, 2 * i + 1));
}

std::vector<CriterionResult> run_mz(const ExperimentConfig& cfg, const fs::path& out) {
  const Cocycle c = parse_cocycle(require(cfg.doc, "cocycle", ""), "cocycle");
  const json& pj = section(cfg.doc, "plan");
  const SamplingPlan plan = parse_plan(pj, c.alphabet_size(), cfg.seed, "plan");
  EstimateOptions opt;
  opt.fill_periodic_words = get_bool(pj, "fill_periodic_words", "plan", true);
  opt.fill_spacing = get_number(pj, "fill_spacing", "plan", opt.fill_spacing);
  const RotSetEstimate est = checked("plan", [&] { return estimate_mz(c, plan, opt); });

  json extra = {{"words", plan.words.size()}, {"base_grid", plan.base_grid}, {"n_list", plan.n_list}};
  const json& cmp = section(cfg.doc, "compare_periodic_union");
  if (!cmp.empty()) {
    const int max_period = int(get_integer(cmp, "max_period", "compare_periodic_union", 4));
    const long K = get_integer(cmp, "K", "compare_periodic_union", 50);
    const int grid = int(get_integer(cmp, "grid", "compare_periodic_union", 16));
    const RotSetEstimate per = checked("compare_periodic_union", [&] {
      return periodic_union(c, max_period, K, grid, PerWordOptions{true, opt.fill_spacing});
    });
    extra["periodic_union_hausdorff"] = hausdorff(per.cloud, est.cloud);
  }
  write_estimate(out, est, extra);
  return {{"connected", est.is_connected, {{"connectivity_eps", est.connectivity_eps}}}};
}

std::vector<CriterionResult> run_per_words(const ExperimentConfig& cfg, const fs::path& out) {
  const Cocycle c = parse_cocycle(require(cfg.doc, "cocycle", ""), "cocycle");
  const json& pw = require(cfg.doc, "per_words", "");
  const long K = get_integer(pw, "K", "per_words", 1000);
  const int grid = int(get_integer(pw, "grid", "per_words", 16));
  PerWordOptions opt;
  opt.convex_fill = get_bool(pw, "fill", "per_words", true);
  opt.fill_spacing = get_number(pw, "fill_spacing", "per_words", opt.fill_spacing);
  const json& list = require(pw, "words", "per_words");
  if (!list.is_array() || list.empty()) throw ConfigError("expected a nonempty array", "per_words.words");
  std::vector<RotSetEstimate> parts;
  json words = json::array();
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = "per_words.words[" + std::to_string(i) + "]";
    const WordStream w = parse_word(list[i].is_array() ? json{{"type", "periodic"}, {"symbols", list[i]}}
                                                       : list[i],
                                    path);
    if (!w.is_periodic()) throw ConfigError("expected a periodic word", path);
    const PeriodicWord word = w.periodic_word();
    parts.push_back(checked(path, [&] { return per_word_rotation_set(c, word, K, grid, opt); }));
    json s = summary_json(parts.back());
    s["symbols"] = word.symbols;
    words.push_back(s);
  }
  write_estimate(out, merge(parts, opt.fill_spacing), {{"per_word", words}, {"K", K}, {"grid", grid}});
  return {};
}

std::vector<CriterionResult> run_pseudo(const ExperimentConfig& cfg, const fs::path& out) {
  const json& pj = require(cfg.doc, "pseudo", "");
  const PseudoSystem sys = parse_pseudo_system(pj, "pseudo");
  const PseudoPlan plan = parse_pseudo_plan(section(pj, "plan"), cfg.seed, "pseudo.plan");
  const int starts = int(get_integer(pj, "coverage_starts", "pseudo", 10));
  const int k_cap = int(get_integer(pj, "coverage_k_cap", "pseudo", 2000));
  if (starts < 0) throw ConfigError("must be >= 0", "pseudo.coverage_starts");
  if (k_cap < 1) throw ConfigError("must be >= 1", "pseudo.coverage_k_cap");

  json bounds = json::array();
  int n0 = 0;
  bool covered = true;
  for (int i = 0; i < starts; ++i) {
    const auto k = coverage_bound(sys, counter_point(cfg.seed, std::uint64_t(i)), k_cap);
    if (k) {
      bounds.push_back(*k);
      n0 = std::max(n0, *k);
    } else {
      bounds.push_back(nullptr);
      covered = false;
    }
  }
  PseudoAudit audit;
  const RotSetEstimate est = pseudo_rotset(sys, plan, &audit);
  json extra = {{"eps", sys.eps()}, {"grid", sys.grid()}, {"subsamples", sys.subsamples()},
                {"orbits", audit.orbits}, {"max_step_error", audit.max_step_error},
                {"coverage_bounds", bounds}, {"N0", covered && starts > 0 ? json(n0) : json(nullptr)}};
  write_estimate(out, est, extra);
  return {{"covered", covered, {{"N0", n0}}},
          {"valid_orbits", audit.max_step_error < sys.eps(), {{"max_step_error", audit.max_step_error}}}};
}

std::vector<CriterionResult> run_essential(const ExperimentConfig& cfg, const fs::path& out) {
  const Cocycle c = parse_cocycle(require(cfg.doc, "cocycle", ""), "cocycle");
  const json& ej = section(cfg.doc, "essential");
  const int n = int(get_integer(ej, "resolution", "essential", 128));
  const double radius = get_number(ej, "ball_radius", "essential", 4.0 / n);
  const int cap = int(get_integer(ej, "cap", "essential", 500));
  const int sub = int(get_integer(ej, "subsamples", "essential", 0));
  const ClassificationMap map =
      checked("essential", [&] { return classify_points(c, n, radius, cap, sub); });
  json summary = classification_json(map);
  const json& probe = section(ej, "probe");
  if (!probe.empty()) {
    std::vector<WordStream> words;
    const json& list = require(probe, "words", "essential.probe");
    if (!list.is_array()) throw ConfigError("expected an array", "essential.probe.words");
    for (std::size_t i = 0; i < list.size(); ++i)
      words.push_back(parse_word(list[i], "essential.probe.words[" + std::to_string(i) + "]"));
    const int grid = int(get_integer(probe, "base_grid", "essential.probe", 16));
    const long n_max = get_integer(probe, "n_max", "essential.probe", 1000);
    summary["displacement_probe"] = {
        {"n_max", n_max},
        {"value", checked("essential.probe", [&] { return displacement_probe(c, words, grid, n_max); })}};
  }
  fs::create_directories(out);
  write_file(out / "classification.pgm", classification_pgm(map));
  write_file(out / "classification.json", summary.dump(2) + "\n");
  return {{"decided", map.count(Label::Undecided) == 0,
           {{"undecided", map.count(Label::Undecided)}}}};
}

std::vector<CriterionResult> run_paper(const ExperimentConfig& cfg, const fs::path& out) {
  const json& pj = section(cfg.doc, "paper");
  std::vector<CriterionResult> results;

  {  // E1: discontinuity of rotation along measures supported on 0^{k-1}1.
    const json& e = section(pj, "e1");
    const long K = get_integer(e, "K", "paper.e1", 10000);
    const int grid = int(get_integer(e, "grid", "paper.e1", 16));
    const int k_max = int(get_integer(e, "k_max", "paper.e1", 8));
    const Cocycle c({maps::sine_shear(), maps::sqrt2_translation()});
    std::vector<RotSetEstimate> parts;
    json per_k = json::array();
    bool pass = true;
    for (int k = 1; k <= k_max; ++k) {
      PeriodicWord w{std::vector<Symbol>(std::size_t(k - 1), 0)};
      w.symbols.push_back(1);
      parts.push_back(per_word_rotation_set(c, w, K, grid));
      const double d = hausdorff(parts.back().cloud, PointCloud{Vec2(0, std::sqrt(2.0) / k)});
      pass = pass && d <= 0.05;
      per_k.push_back({{"k", k}, {"hausdorff", d}});
    }
    parts.push_back(per_word_rotation_set(c, PeriodicWord{{0}}, K, grid));
    const double d0 =
        hausdorff(parts.back().cloud, segment_sample(Vec2(-1, 0), Vec2(1, 0), 0.01));
    pass = pass && d0 <= 0.05;
    write_estimate(out / "e1", merge(parts, 0.01), {{"per_k", per_k}, {"word0_hausdorff", d0}});
    results.push_back({"E1", pass, {{"per_k", per_k}, {"word0_hausdorff", d0}}});
  }

  {  // E2: non-convex MZ set of {mz_square, its inverse}.
    const Cocycle c({maps::mz_square(), invert(maps::mz_square())});
    const SamplingPlan plan = default_plan(2, cfg.seed);
    const RotSetEstimate est = estimate_mz(c, plan);
    const double d = hausdorff(est.cloud, two_squares(0.02));
    const bool pass = d <= 0.15 && est.convexity_defect >= 0.15 && est.is_connected;
    json m = {{"hausdorff", d}, {"convexity_defect", est.convexity_defect},
              {"is_connected", est.is_connected}};
    write_estimate(out / "e2", est, m);
    results.push_back({"E2", pass, m});
  }

  {  // E3: conservative pseudo-orbit convexity.
    const json& e = section(pj, "e3");
    const int starts = int(get_integer(e, "starts", "paper.e3", 10));
    const long cycle = get_integer(e, "cycle_length", "paper.e3", 300);
    const PseudoSystem sys(maps::double_shear(0.3), 0.05, 128);
    int n0 = 0;
    bool covered = true;
    for (int i = 0; i < starts; ++i) {
      const auto k = coverage_bound(sys, counter_point(cfg.seed, std::uint64_t(i)), 2000);
      covered = covered && k.has_value();
      if (k) n0 = std::max(n0, *k);
    }
    PseudoAudit audit;
    const RotSetEstimate est = pseudo_rotset(sys, default_pseudo_plan(cfg.seed), &audit);

    ConnectorPlanner planner(sys, 400);
    const TorusPoint p0(0.0, 0.0);
    const Cycle A = close_cycle(sys, planner, policy_orbit(sys, p0, PushPolicy::constant({1, 0}), cycle));
    const Cycle B = close_cycle(sys, planner, policy_orbit(sys, p0, PushPolicy::constant({0, 1}), cycle));
    json splices = json::array();
    bool splice_ok = true;
    for (long a = 0; a <= 4; ++a) {
      const SpliceResult s = splice_periodic(sys, A, B, a, 4);
      const double t = double(a) / 4.0;
      const Vec2 target = t * A.open_rotation() + (1 - t) * B.open_rotation();
      const double err = (s.rotation - target).norm();
      const double tol = 0.05 + double(s.connector_steps) / double(s.orbit.length());
      const bool ok = err <= tol && is_valid(sys, s.orbit);
      splice_ok = splice_ok && ok;
      splices.push_back({{"a", a}, {"b", 4}, {"rotation", {s.rotation.x(), s.rotation.y()}},
                         {"error", err}, {"tolerance", tol}, {"steps", s.orbit.length()}});
    }
    const bool pass = covered && est.convexity_defect <= 0.05 && splice_ok &&
                      audit.max_step_error < sys.eps();
    json m = {{"N0", covered ? json(n0) : json(nullptr)},
              {"convexity_defect", est.convexity_defect},
              {"max_step_error", audit.max_step_error},
              {"splices", splices}};
    write_estimate(out / "e3", est, m);
    results.push_back({"E3", pass, m});
  }
  return results;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::MzEstimate: return "mz-estimate";
    case ExperimentKind::PerWords: return "per-words";
    case ExperimentKind::PseudoRotset: return "pseudo-rotset";
    case ExperimentKind::EssentialMap: return "essential-map";
    case ExperimentKind::PaperExamples: return "paper-examples";
  }
  return "?";
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  cfg.text = text;
  try {
    cfg.doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what(), "config");
  }
  if (!cfg.doc.is_object()) throw ConfigError("expected an object", "config");
  const json& kind = require(cfg.doc, "experiment", "");
  if (!kind.is_string()) throw ConfigError("expected a string", "experiment");
  const std::string k = kind.get<std::string>();
  bool found = false;
  for (auto e : {ExperimentKind::MzEstimate, ExperimentKind::PerWords, ExperimentKind::PseudoRotset,
                 ExperimentKind::EssentialMap, ExperimentKind::PaperExamples})
    if (to_string(e) == k) {
      cfg.kind = e;
      found = true;
    }
  if (!found) throw ConfigError("unknown experiment kind", "experiment");
  cfg.seed = std::uint64_t(get_integer(cfg.doc, "seed", "", 1));
  cfg.threads = int(get_integer(cfg.doc, "threads", "", 1));
  if (cfg.threads < 0) throw ConfigError("must be >= 0", "threads");
  return cfg;
}

bool RunReport::all_passed() const {
  for (const auto& c : criteria)
    if (!c.pass) return false;
  return true;
}

json RunReport::to_json() const {
  json crit = json::array();
  for (const auto& c : criteria) crit.push_back({{"id", c.id}, {"pass", c.pass}, {"measured", c.measured}});
  return {{"config", config}, {"config_hash", config_hash}, {"wall_time_s", wall_time_s},
          {"criteria", crit}};
}

std::string git_blob_sha1(const std::string& content) {
  const std::string blob = "blob " + std::to_string(content.size()) + std::string(1, '\0') + content;
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(blob.data(), blob.size(), digest, &len, EVP_sha1(), nullptr) != 1)
    throw std::runtime_error("SHA-1 failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

RunReport run_experiment(const ExperimentConfig& cfg, const fs::path& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir))
    throw std::runtime_error("cannot create output directory " + out_dir.string());
  thread_setting().store(cfg.threads);

  RunReport report;
  report.config = cfg.doc;
  report.config["seed"] = cfg.seed;
  report.config["threads"] = cfg.threads;
  report.config_hash = git_blob_sha1(cfg.text);
  switch (cfg.kind) {
    case ExperimentKind::MzEstimate: report.criteria = run_mz(cfg, out_dir); break;
    case ExperimentKind::PerWords: report.criteria = run_per_words(cfg, out_dir); break;
    case ExperimentKind::PseudoRotset: report.criteria = run_pseudo(cfg, out_dir); break;
    case ExperimentKind::EssentialMap: report.criteria = run_essential(cfg, out_dir); break;
    case ExperimentKind::PaperExamples: report.criteria = run_paper(cfg, out_dir); break;
  }
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_file(out_dir / "report.json", report.to_json().dump(2) + "\n");
  return report;
}

}  // namespace rotset::io
