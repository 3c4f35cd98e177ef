// report.hpp — deterministic artifact emission: 17-significant-digit CSV
// tables, JSON mirrors of the same fields, and static SVG diagnostics.

#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace nodal::cli {

// Fixed %.17g rendering used for every number the CLI emits.
std::string fmt17(double v);

// A CSV table with a fixed header; rows are emitted in insertion order so
// that identical runs produce byte-identical files.
class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header);
    void add_row(std::vector<std::string> cells);
    std::string text() const;
    void write(const std::string& path) const;
    std::size_t rows() const { return rows_.size(); }

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

void write_text(const std::string& path, const std::string& text);
void write_json(const std::string& path, const nlohmann::json& j);

// Minimal polyline plot: each series is a named list of (x, y) points drawn
// into a fixed 800x600 viewport with autoscaled axes.  Diagnostic only.
struct SvgSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<SvgSeries>& series);

}  // namespace nodal::cli
