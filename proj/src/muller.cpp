#include "gpfv/muller.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace gpfv {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

double parse_cell(const std::string& s, std::size_t row) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("trajectory row " + std::to_string(row) + ": bad number '" + s + "'");
    }
}

// Fixed-precision coordinates keep the SVG bytes stable.
std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

Trajectory read_trajectory_csv(std::istream& in) {
    Trajectory tr;
    std::string line;
    bool header = false;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto cells = split(line);
        if (!header) {
            if (cells.size() < 2 || cells[0] != "t" || cells[1] != "N") {
                throw std::invalid_argument("trajectory header must start with t,N");
            }
            tr.labels.assign(cells.begin() + 2, cells.end());
            header = true;
            continue;
        }
        ++row;
        if (cells.size() != tr.labels.size() + 2) {
            throw std::invalid_argument("trajectory row " + std::to_string(row) + ": wrong number of columns");
        }
        tr.times.push_back(parse_cell(cells[0], row));
        tr.totals.push_back(parse_cell(cells[1], row));
        std::vector<double> m;
        for (std::size_t k = 2; k < cells.size(); ++k) m.push_back(parse_cell(cells[k], row));
        tr.masses.push_back(std::move(m));
    }
    if (!header) throw std::invalid_argument("trajectory has no header");
    return tr;
}

std::string band_color(std::size_t index) {
    // Golden-angle hue steps, fixed saturation and lightness.
    const double h = std::fmod(static_cast<double>(index) * 137.50776405, 360.0) / 60.0;
    const double s = 0.62, l = 0.55;
    const double c = (1.0 - std::abs(2.0 * l - 1.0)) * s;
    const double x = c * (1.0 - std::abs(std::fmod(h, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    switch (static_cast<int>(h)) {
        case 0: r = c; g = x; break;
        case 1: r = x; g = c; break;
        case 2: g = c; b = x; break;
        case 3: g = x; b = c; break;
        case 4: r = x; b = c; break;
        default: r = c; b = x; break;
    }
    const double mlight = l - c / 2.0;
    auto byte = [&](double v) { return static_cast<int>(std::lround((v + mlight) * 255.0)); };
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", byte(r), byte(g), byte(b));
    return buf;
}

std::string muller_svg(const Trajectory& tr, const MullerStyle& style) {
    if (tr.times.empty()) throw std::invalid_argument("empty trajectory: nothing to plot");
    if (tr.labels.empty()) throw std::invalid_argument("trajectory has no tracked atom");
    const double margin = 40.0;
    const double w = style.width - 2 * margin;
    const double h = style.height - 2 * margin;
    const double t0 = tr.times.front();
    const double t1 = tr.times.back() > t0 ? tr.times.back() : t0 + 1.0;
    double top = 0.0;
    for (const auto& m : tr.masses) {
        double s = 0.0;
        for (double v : m) s += v;
        top = std::max(top, s);
    }
    if (!(top > 0.0)) top = 1.0;
    auto px = [&](double t) { return margin + w * (t - t0) / (t1 - t0); };
    auto py = [&](double v) { return margin + h * (1.0 - v / top); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << coord(style.width) << "\" height=\""
        << coord(style.height) << "\" viewBox=\"0 0 " << coord(style.width) << ' ' << coord(style.height) << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!style.title.empty()) {
        svg << "<text x=\"" << coord(margin) << "\" y=\"" << coord(margin * 0.6) << "\" font-family=\"sans-serif\" "
            << "font-size=\"14\">" << style.title << "</text>\n";
    }

    const std::size_t rows = tr.times.size();
    std::vector<double> lower(rows, 0.0);
    for (std::size_t k = 0; k < tr.labels.size(); ++k) {
        std::vector<double> upper(rows);
        bool any = false;
        for (std::size_t r = 0; r < rows; ++r) {
            upper[r] = lower[r] + tr.masses[r][k];
            any = any || tr.masses[r][k] > 0.0;
        }
        if (any) {
            svg << "<polygon data-type=\"" << tr.labels[k] << "\" fill=\"" << band_color(k) << "\" points=\"";
            for (std::size_t r = 0; r < rows; ++r) svg << coord(px(tr.times[r])) << ',' << coord(py(upper[r])) << ' ';
            for (std::size_t r = rows; r-- > 0;) {
                svg << coord(px(tr.times[r])) << ',' << coord(py(lower[r])) << (r ? " " : "");
            }
            svg << "\"/>\n";
        }
        lower = std::move(upper);
    }
    svg << "<line x1=\"" << coord(margin) << "\" y1=\"" << coord(margin + h) << "\" x2=\"" << coord(margin + w)
        << "\" y2=\"" << coord(margin + h) << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << coord(margin) << "\" y1=\"" << coord(margin) << "\" x2=\"" << coord(margin) << "\" y2=\""
        << coord(margin + h) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << coord(margin + w) << "\" y=\"" << coord(margin + h + 20) << "\" font-family=\"sans-serif\" "
        << "font-size=\"11\" text-anchor=\"end\">t = " << coord(t1) << "</text>\n";
    svg << "<text x=\"" << coord(margin - 5) << "\" y=\"" << coord(margin + 4) << "\" font-family=\"sans-serif\" "
        << "font-size=\"11\" text-anchor=\"end\">" << coord(top) << "</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace gpfv
