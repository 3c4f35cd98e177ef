// report.cpp — CSV/JSON/SVG emission helpers shared by all CLI tasks.

#include "report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace nodal::cli {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char ch : cell) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += '"';
    return out;
}

}  // namespace

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != header_.size())
        throw std::logic_error("CsvTable: row width does not match header");
    rows_.push_back(std::move(cells));
}

std::string CsvTable::text() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < header_.size(); ++i) {
        if (i) os << ',';
        os << csv_escape(header_[i]);
    }
    os << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << csv_escape(row[i]);
        }
        os << '\n';
    }
    return os.str();
}

void CsvTable::write(const std::string& path) const { write_text(path, text()); }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

void write_json(const std::string& path, const nlohmann::json& j) {
    write_text(path, j.dump(2) + "\n");
}

namespace {

const char* kPalette[] = {"#1f6fb2", "#c44e52", "#55a868", "#8172b2",
                          "#ccb974", "#64b5cd", "#4c4c4c", "#dd8452"};

}  // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<SvgSeries>& series) {
    const double W = 800.0, H = 600.0, pad = 60.0;
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series)
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (!(xmin <= xmax)) { xmin = 0.0; xmax = 1.0; ymin = 0.0; ymax = 1.0; }
    if (xmax - xmin < 1e-300) { xmin -= 0.5; xmax += 0.5; }
    if (ymax - ymin < 1e-300) { ymin -= 0.5; ymax += 0.5; }

    auto px = [&](double x) { return pad + (x - xmin) / (xmax - xmin) * (W - 2 * pad); };
    auto py = [&](double y) { return H - pad - (y - ymin) / (ymax - ymin) * (H - 2 * pad); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
       << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"30\" text-anchor=\"middle\" "
          "font-family=\"monospace\" font-size=\"16\">" << title << "</text>\n";
    os << "<rect x=\"" << pad << "\" y=\"" << pad << "\" width=\"" << W - 2 * pad
       << "\" height=\"" << H - 2 * pad
       << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"1\"/>\n";
    char lab[64];
    std::snprintf(lab, sizeof(lab), "%.6g", xmin);
    os << "<text x=\"" << pad << "\" y=\"" << H - pad + 20
       << "\" font-family=\"monospace\" font-size=\"12\">" << lab << "</text>\n";
    std::snprintf(lab, sizeof(lab), "%.6g", xmax);
    os << "<text x=\"" << W - pad << "\" y=\"" << H - pad + 20
       << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"12\">"
       << lab << "</text>\n";
    std::snprintf(lab, sizeof(lab), "%.6g", ymin);
    os << "<text x=\"" << pad - 6 << "\" y=\"" << H - pad
       << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"12\">"
       << lab << "</text>\n";
    std::snprintf(lab, sizeof(lab), "%.6g", ymax);
    os << "<text x=\"" << pad - 6 << "\" y=\"" << pad + 4
       << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"12\">"
       << lab << "</text>\n";

    std::size_t ci = 0;
    for (const auto& s : series) {
        const char* color = kPalette[ci % (sizeof(kPalette) / sizeof(kPalette[0]))];
        os << "<polyline fill=\"none\" stroke=\"" << color
           << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (const auto& [x, y] : s.points) {
            if (!std::isfinite(x) || !std::isfinite(y)) continue;
            if (!first) os << ' ';
            char pt[64];
            std::snprintf(pt, sizeof(pt), "%.3f,%.3f", px(x), py(y));
            os << pt;
            first = false;
        }
        os << "\"/>\n";
        if (!s.label.empty())
            os << "<text x=\"" << pad + 10 << "\" y=\"" << pad + 20 + 16.0 * ci
               << "\" font-family=\"monospace\" font-size=\"12\" fill=\"" << color
               << "\">" << s.label << "</text>\n";
        ++ci;
    }
    os << "</svg>\n";
    write_text(path, os.str());
}

}  // namespace nodal::cli
