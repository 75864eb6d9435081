// Deterministic writers: points CSV, summary JSON, SVG plot, PGM grid.
#ifndef ROTSET_IO_OUTPUT_HPP
#define ROTSET_IO_OUTPUT_HPP

#include <filesystem>
#include <string>

#include "json.hpp"
#include "rotset/essential.hpp"
#include "rotset/rotation.hpp"

namespace rotset::io {

/// Shortest round-trip decimal form.
std::string format_number(double v);

/// Columns vx,vy,n,word_id,base_x,base_y; base is empty for derived rows.
std::string points_csv(const RotSetEstimate& est);
nlohmann::json summary_json(const RotSetEstimate& est);
/// 800 x 800 canvas over the cloud's bounding box padded by 10%; points as
/// r = 1.5 dots, hull as a closed polyline (omitted when degenerate).
std::string plot_svg(const RotSetEstimate& est);

/// Plain PGM (P2), maxval 2: 0 inessential, 1 essential, 2 undecided.
/// The first row is the top of the torus (j = N - 1).
std::string classification_pgm(const ClassificationMap& map);
nlohmann::json classification_json(const ClassificationMap& map);

/// Throws std::runtime_error when the file cannot be written.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace rotset::io

#endif  // ROTSET_IO_OUTPUT_HPP
