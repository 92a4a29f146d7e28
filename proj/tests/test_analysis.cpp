#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "sqd/analysis.hpp"

using namespace sqd;

namespace {

const std::vector<std::pair<int, double>> kRefHeis1D = {
    {6, 18},  {8, 54},    {10, 160},  {12, 472},
    {14, 1327}, {16, 3877}, {18, 10704}, {20, 29721}};

}  // namespace

TEST_SUITE("analysis") {

TEST_CASE("points on an exact exponential are fitted exactly") {
    std::vector<std::pair<int, double>> pts;
    for (int L = 4; L <= 12; L += 2) pts.emplace_back(L, std::exp(0.5 * L));
    const ScalingFit fit = fit_exponential(pts);
    CHECK(fit.alpha == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(fit.log_prefactor == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.predict(14) == doctest::Approx(std::exp(7.0)).epsilon(1e-10));
}

TEST_CASE("constant series fits alpha = 0") {
    std::vector<std::pair<int, double>> pts = {{4, 7.0}, {6, 7.0}, {8, 7.0}};
    const ScalingFit fit = fit_exponential(pts);
    CHECK(fit.alpha == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(fit.r_squared == 1.0);  // clamped: zero variance means a perfect fit
}

TEST_CASE("k-series OLS matches the frozen oracle") {
    const ScalingFit fit = fit_exponential(kRefHeis1D);
    CHECK(fit.alpha == doctest::Approx(0.529215665531497).epsilon(1e-12));
    CHECK(fit.log_prefactor == doctest::Approx(-0.236930713747950).epsilon(1e-11));
    CHECK(fit.r_squared == doctest::Approx(0.999821044063403).epsilon(1e-12));
}

TEST_CASE("fit is invariant under point reordering") {
    auto shuffled = kRefHeis1D;
    std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(5));
    const ScalingFit a = fit_exponential(kRefHeis1D);
    const ScalingFit b = fit_exponential(shuffled);
    CHECK(a.alpha == doctest::Approx(b.alpha).epsilon(1e-14));
    CHECK(a.log_prefactor == doctest::Approx(b.log_prefactor).epsilon(1e-14));
}

TEST_CASE("refitting predicted points is idempotent to 1e-12") {
    const ScalingFit fit = fit_exponential(kRefHeis1D);
    std::vector<std::pair<int, double>> pred;
    for (const auto& [L, m] : kRefHeis1D) pred.emplace_back(L, fit.predict(L));
    const ScalingFit refit = fit_exponential(pred);
    CHECK(std::abs(refit.alpha - fit.alpha) < 1e-12);
    CHECK(std::abs(refit.log_prefactor - fit.log_prefactor) < 1e-12);
    CHECK(refit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fit preconditions") {
    CHECK_THROWS_AS(fit_exponential(std::vector<std::pair<int, double>>{{1, 2.0}, {2, 3.0}}),
                    AnalysisError);
    CHECK_THROWS_AS(
        fit_exponential(std::vector<std::pair<int, double>>{{1, 2.0}, {2, -3.0}, {3, 4.0}}),
        AnalysisError);
    CHECK_THROWS_AS(
        fit_exponential(std::vector<std::pair<int, double>>{{2, 2.0}, {2, 3.0}, {2, 4.0}}),
        AnalysisError);
}

TEST_CASE("k vs N_eff report: reference panel points") {
    const std::vector<std::pair<int, double>> k = {{6, 18}, {20, 20231}};
    const std::vector<std::pair<int, double>> neff = {{6, 11.168}, {20, 5749.42}};
    const KNeffReport rep = compare_k_to_neff(k, neff);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[0].ratio == doctest::Approx(18.0 / 11.168).epsilon(1e-12));
    CHECK(rep.rows[1].ratio == doctest::Approx(20231.0 / 5749.42).epsilon(1e-12));
    CHECK(rep.rows[1].ratio == doctest::Approx(3.52).epsilon(0.01));
    CHECK(rep.all_satisfied);
    CHECK(rep.min_ratio == doctest::Approx(18.0 / 11.168).epsilon(1e-12));
}

TEST_CASE("identical series give unit ratios") {
    const std::vector<std::pair<int, double>> s = {{4, 2.0}, {6, 5.0}, {8, 11.0}};
    const KNeffReport rep = compare_k_to_neff(s, s);
    for (const auto& row : rep.rows) CHECK(row.ratio == 1.0);
    CHECK(rep.min_ratio == 1.0);
}

TEST_CASE("grid mismatch raises an alignment error") {
    const std::vector<std::pair<int, double>> a = {{4, 2.0}, {6, 5.0}};
    const std::vector<std::pair<int, double>> b = {{4, 2.0}, {8, 5.0}};
    const std::vector<std::pair<int, double>> c = {{4, 2.0}};
    CHECK_THROWS_AS(compare_k_to_neff(a, b), AnalysisError);
    CHECK_THROWS_AS(compare_k_to_neff(a, c), AnalysisError);
}

TEST_CASE("mass-fidelity curve is the sorted (mass, F_E) projection") {
    SubspaceTrace tr;
    tr.steps = {{1, 1, -0.25, 1.0 / 3.0, 0.5}, {2, 2, -0.75, 1.0, 1.0}};
    const auto curve = mass_fidelity_curve(tr);
    REQUIRE(curve.size() == 2);
    CHECK(curve[0] == std::pair{0.5, 1.0 / 3.0});
    CHECK(curve[1] == std::pair{1.0, 1.0});
    SubspaceTrace empty;
    CHECK_THROWS_AS(mass_fidelity_curve(empty), AnalysisError);
}

TEST_CASE("svg plot renders series and decade ticks") {
    std::vector<PlotSeries> series;
    series.push_back({"k", {{6, 18}, {8, 54}, {10, 160}}});
    std::ostringstream os;
    write_svg_plot(os, "test plot", series);
    const std::string svg = os.str();
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("polyline") != std::string::npos);
    CHECK(svg.find("1e2") != std::string::npos);
    CHECK(svg.find("test plot") != std::string::npos);
}

}  // TEST_SUITE
