#include "rotset/io/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rotset::io {

namespace {

constexpr double kCanvas = 800.0;

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string points_csv(const RotSetEstimate& est) {
  std::string out = "vx,vy,n,word_id,base_x,base_y\n";
  for (std::size_t i = 0; i < est.cloud.size(); ++i) {
    const SampleTag& t = est.tags[i];
    out += format_number(est.cloud[i].x()) + "," + format_number(est.cloud[i].y()) + "," +
           std::to_string(t.n) + "," + std::to_string(t.word_id) + ",";
    if (!t.derived && !std::isnan(t.base.x()))
      out += format_number(t.base.x()) + "," + format_number(t.base.y());
    else
      out += ",";
    out += "\n";
  }
  return out;
}

nlohmann::json summary_json(const RotSetEstimate& est) {
  nlohmann::json hull = nlohmann::json::array();
  for (const auto& v : est.hull.vertices) hull.push_back({v.x(), v.y()});
  std::size_t derived = 0;
  for (const auto& t : est.tags) derived += t.derived ? 1 : 0;
  return {{"points", est.cloud.size()},
          {"derived_points", derived},
          {"hull", hull},
          {"is_connected", est.is_connected},
          {"connectivity_eps", est.connectivity_eps},
          {"convexity_defect", est.convexity_defect},
          {"hausdorff_to_half_n", est.hausdorff_to_half_n},
          {"resolution", est.resolution},
          {"n_min", est.n_min},
          {"n_max", est.n_max}};
}

std::string plot_svg(const RotSetEstimate& est) {
  if (est.cloud.empty()) throw std::invalid_argument("empty estimate");
  double x0 = est.cloud[0].x(), x1 = x0, y0 = est.cloud[0].y(), y1 = y0;
  for (const auto& p : est.cloud) {
    x0 = std::min(x0, p.x());
    x1 = std::max(x1, p.x());
    y0 = std::min(y0, p.y());
    y1 = std::max(y1, p.y());
  }
  // A zero extent gets a unit window so a single point lands in the middle.
  const double w = x1 - x0 > 0 ? x1 - x0 : 1.0, h = y1 - y0 > 0 ? y1 - y0 : 1.0;
  const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
  x0 = cx - 0.6 * w;
  x1 = cx + 0.6 * w;
  y0 = cy - 0.6 * h;
  y1 = cy + 0.6 * h;
  auto px = [&](double x) { return (x - x0) / (x1 - x0) * kCanvas; };
  auto py = [&](double y) { return kCanvas - (y - y0) / (y1 - y0) * kCanvas; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" "
         "viewBox=\"0 0 800 800\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"white\" stroke=\"black\"/>\n";
  if (x0 < 0 && x1 > 0)
    out << "<line x1=\"" << fixed2(px(0)) << "\" y1=\"0\" x2=\"" << fixed2(px(0))
        << "\" y2=\"800\" stroke=\"#999\" stroke-width=\"0.5\"/>\n";
  if (y0 < 0 && y1 > 0)
    out << "<line x1=\"0\" y1=\"" << fixed2(py(0)) << "\" x2=\"800\" y2=\"" << fixed2(py(0))
        << "\" stroke=\"#999\" stroke-width=\"0.5\"/>\n";
  out << "<text x=\"4\" y=\"796\" font-size=\"10\">x [" << format_number(x0) << ", "
      << format_number(x1) << "] y [" << format_number(y0) << ", " << format_number(y1)
      << "]</text>\n";
  out << "<g fill=\"#1f4e9c\">\n";
  for (const auto& p : est.cloud)
    out << "<circle cx=\"" << fixed2(px(p.x())) << "\" cy=\"" << fixed2(py(p.y()))
        << "\" r=\"1.5\"/>\n";
  out << "</g>\n";
  if (!est.hull.degenerate()) {
    out << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"1\" points=\"";
    const auto& v = est.hull.vertices;
    for (std::size_t i = 0; i <= v.size(); ++i) {
      const auto& p = v[i % v.size()];
      out << (i ? " " : "") << fixed2(px(p.x())) << "," << fixed2(py(p.y()));
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string classification_pgm(const ClassificationMap& map) {
  const int n = map.resolution;
  std::ostringstream out;
  out << "P2\n" << n << " " << n << "\n2\n";
  for (int j = n - 1; j >= 0; --j) {
    for (int i = 0; i < n; ++i) out << (i ? " " : "") << int(map.at(i, j));
    out << "\n";
  }
  return out.str();
}

nlohmann::json classification_json(const ClassificationMap& map) {
  return {{"resolution", map.resolution},
          {"ball_radius", map.ball_radius},
          {"cap", map.cap},
          {"subsamples", map.subsamples},
          {"inessential", map.count(Label::Inessential)},
          {"essential", map.count(Label::Essential)},
          {"undecided", map.count(Label::Undecided)},
          {"fraction_inessential", map.fraction(Label::Inessential)},
          {"fraction_essential", map.fraction(Label::Essential)}};
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace rotset::io
