#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sqd/sqd.hpp"

namespace sqd {

struct AnalysisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Exponential scaling fit m(L) ~ exp(alpha L), computed as ordinary least
/// squares on (L, ln m).
struct ScalingFit {
    double alpha = 0.0;
    double log_prefactor = 0.0;
    double r_squared = 0.0;
    std::vector<std::pair<int, double>> points;

    double predict(int L) const;
};

ScalingFit fit_exponential(std::span<const std::pair<int, double>> points);

struct KNeffRow {
    int L = 0;
    double k = 0.0;
    double neff = 0.0;
    double ratio = 0.0;
    bool k_ge_neff = false;
};

struct KNeffReport {
    std::vector<KNeffRow> rows;
    double min_ratio = 0.0;
    bool all_satisfied = false;
};

/// Per-L comparison of required subspace size against effective support.
/// Both series must share the same L grid, in order.
KNeffReport compare_k_to_neff(std::span<const std::pair<int, double>> k_series,
                              std::span<const std::pair<int, double>> neff_series);

/// Trace steps projected onto (cumulative mass, fidelity), sorted by mass.
std::vector<std::pair<double, double>> mass_fidelity_curve(const SubspaceTrace& trace);

/// Minimal SVG line plot with a log-scaled y axis, one polyline per series.
struct PlotSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
};
void write_svg_plot(std::ostream& os, const std::string& title,
                    std::span<const PlotSeries> series, bool log_y = true);

}  // namespace sqd
