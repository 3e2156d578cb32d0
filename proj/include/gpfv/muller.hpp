#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gpfv {

/// Atom masses over time, as written by write_trajectory_csv.
struct Trajectory {
    std::vector<std::string> labels;          ///< one per type column
    std::vector<double> times;
    std::vector<double> totals;               ///< N column
    std::vector<std::vector<double>> masses;  ///< masses[row][type]
};

Trajectory read_trajectory_csv(std::istream& in);

struct MullerStyle {
    double width = 800.0;
    double height = 400.0;
    std::string title;
};

/// Stacked absolute masses, type 0 at the bottom; the top edge is the N envelope.
/// Throws std::invalid_argument on a trajectory without rows or type columns.
std::string muller_svg(const Trajectory& trajectory, const MullerStyle& style = {});

/// Fill colour of band i ("#rrggbb"); fixed by the index alone.
std::string band_color(std::size_t index);

}  // namespace gpfv
