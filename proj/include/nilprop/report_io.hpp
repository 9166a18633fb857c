#pragma once

#include <filesystem>
#include <vector>

#include "nilprop/stats.hpp"

namespace nilprop {

/// Writes the simulation output set into `dir`:
///   z_values_<k>.csv  : one standardized mean per line
///   hist_<k>.csv      : bin_left,bin_right,density,overlay
///   qq_<k>.csv        : theoretical,empirical
///   ks_summary.csv    : size,D,p (one row per subset size)
/// and, when `with_svg` is set, plots_<k>.svg with the histogram + normal
/// overlay and the Q-Q scatter with identity line. Returns the paths written.
/// Output is byte-stable for identical reports.
std::vector<std::filesystem::path> write_simulation_outputs(
    const SimulationReport& report, const std::filesystem::path& dir,
    bool with_svg = true);

} // namespace nilprop
