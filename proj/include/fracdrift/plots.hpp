#pragma once

#include <string>
#include <vector>

namespace fracdrift::plots {

/// Deterministic SVG line plot; an empty series yields empty axes.
std::string render_line_svg(const std::vector<double>& x, const std::vector<double>& y,
                            const std::string& title);

/// One SVG per value column of a norms.csv (first column is time). Returns
/// the emitted file names.
std::vector<std::string> emit_plots(const std::string& csv_path, const std::string& out_dir);

}  // namespace fracdrift::plots
