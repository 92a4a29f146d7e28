#include "sqd/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace sqd {

double ScalingFit::predict(int L) const { return std::exp(log_prefactor + alpha * L); }

ScalingFit fit_exponential(std::span<const std::pair<int, double>> points) {
    if (points.size() < 3) throw AnalysisError("exponential fit needs at least 3 points");
    for (const auto& [L, m] : points)
        if (!(m > 0.0)) throw AnalysisError("exponential fit requires positive m values");

    const double n = static_cast<double>(points.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [L, m] : points) {
        const double x = L, y = std::log(m);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw AnalysisError("degenerate L grid");

    ScalingFit fit;
    fit.alpha = (n * sxy - sx * sy) / denom;
    fit.log_prefactor = (sy - fit.alpha * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double ymean = sy / n;
    for (const auto& [L, m] : points) {
        const double y = std::log(m);
        const double yhat = fit.log_prefactor + fit.alpha * L;
        ss_res += (y - yhat) * (y - yhat);
        ss_tot += (y - ymean) * (y - ymean);
    }
    fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.r_squared = std::clamp(fit.r_squared, 0.0, 1.0);
    fit.points.assign(points.begin(), points.end());
    return fit;
}

KNeffReport compare_k_to_neff(std::span<const std::pair<int, double>> k_series,
                              std::span<const std::pair<int, double>> neff_series) {
    if (k_series.size() != neff_series.size())
        throw AnalysisError("k and N_eff series have different lengths");
    KNeffReport report;
    report.min_ratio = std::numeric_limits<double>::infinity();
    report.all_satisfied = true;
    for (std::size_t i = 0; i < k_series.size(); ++i) {
        if (k_series[i].first != neff_series[i].first)
            throw AnalysisError("k and N_eff series are on different L grids");
        KNeffRow row;
        row.L = k_series[i].first;
        row.k = k_series[i].second;
        row.neff = neff_series[i].second;
        row.ratio = row.neff > 0 ? row.k / row.neff : std::numeric_limits<double>::infinity();
        row.k_ge_neff = row.k >= row.neff;
        report.min_ratio = std::min(report.min_ratio, row.ratio);
        report.all_satisfied = report.all_satisfied && row.k_ge_neff;
        report.rows.push_back(row);
    }
    return report;
}

std::vector<std::pair<double, double>> mass_fidelity_curve(const SubspaceTrace& trace) {
    if (trace.steps.empty()) throw AnalysisError("empty trace");
    std::vector<std::pair<double, double>> curve;
    curve.reserve(trace.steps.size());
    for (const auto& s : trace.steps) curve.emplace_back(s.mass, s.fidelity);
    std::sort(curve.begin(), curve.end());
    return curve;
}

void write_svg_plot(std::ostream& os, const std::string& title,
                    std::span<const PlotSeries> series, bool log_y) {
    const int W = 720, H = 480, ML = 70, MR = 20, MT = 40, MB = 50;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            if (log_y && y <= 0) continue;
            const double yy = log_y ? std::log10(y) : y;
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, yy);
            ymax = std::max(ymax, yy);
        }
    if (xmin > xmax) {
        xmin = 0;
        xmax = 1;
        ymin = 0;
        ymax = 1;
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    auto px = [&](double x) { return ML + (x - xmin) / (xmax - xmin) * (W - ML - MR); };
    auto py = [&](double y) {
        const double yy = log_y ? std::log10(y) : y;
        return H - MB - (yy - ymin) / (ymax - ymin) * (H - MT - MB);
    };
    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                   "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title
       << "</text>\n";
    os << "<line x1=\"" << ML << "\" y1=\"" << H - MB << "\" x2=\"" << W - MR << "\" y2=\""
       << H - MB << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ML << "\" y1=\"" << MT << "\" x2=\"" << ML << "\" y2=\"" << H - MB
       << "\" stroke=\"black\"/>\n";
    // y tick labels (decades when log)
    char buf[64];
    for (int d = static_cast<int>(std::ceil(ymin)); d <= static_cast<int>(std::floor(ymax));
         ++d) {
        const double yv = log_y ? std::pow(10.0, d) : d;
        const double y = py(yv);
        std::snprintf(buf, sizeof buf, log_y ? "1e%d" : "%d", d);
        os << "<line x1=\"" << ML - 4 << "\" y1=\"" << y << "\" x2=\"" << ML << "\" y2=\"" << y
           << "\" stroke=\"black\"/><text x=\"" << ML - 8 << "\" y=\"" << y + 4
           << "\" text-anchor=\"end\" font-size=\"11\">" << buf << "</text>\n";
    }
    int ci = 0;
    for (const auto& s : series) {
        const char* color = colors[ci % 8];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : s.points) {
            if (log_y && y <= 0) continue;
            os << px(x) << "," << py(y) << " ";
        }
        os << "\"/>\n";
        os << "<text x=\"" << W - MR - 10 << "\" y=\"" << MT + 16 * (ci + 1)
           << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << color << "\">" << s.name
           << "</text>\n";
        ++ci;
    }
    os << "</svg>\n";
}

}  // namespace sqd
