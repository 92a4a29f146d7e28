// Timing comparison of the OpenMP matvec kernels against their serial
// reference implementations, on full-space and sector-projected operators.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <vector>

#include "sqd/eigensolver.hpp"
#include "sqd/hamiltonian.hpp"
#include "sqd/lattice.hpp"

using Clock = std::chrono::steady_clock;

namespace {

std::vector<double> random_unit(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<double> x(n);
    double norm2 = 0.0;
    for (auto& v : x) {
        v = ((rng() >> 11) * 0x1.0p-53) - 0.5;
        norm2 += v * v;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& v : x) v *= inv;
    return x;
}

template <class F>
double time_ms(int reps, F&& f) {
    const auto t0 = Clock::now();
    for (int i = 0; i < reps; ++i) f();
    const auto t1 = Clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

void bench_full(int n_sites, int reps) {
    const auto H = sqd::SparseHamiltonian::heisenberg(sqd::build_chain(n_sites), 1.0);
    const auto x = random_unit(H.dimension(), 42);
    std::vector<double> ys, yp;
    const double t_serial = time_ms(reps, [&] { ys = H.apply_serial(x); });
    const double t_parallel = time_ms(reps, [&] { yp = H.apply(x); });
    std::printf("heisenberg chain:%-2d  dim=%-8llu serial %8.3f ms  parallel %8.3f ms  "
                "speedup %5.2fx  max|diff| %g\n",
                n_sites, static_cast<unsigned long long>(H.dimension()), t_serial, t_parallel,
                t_serial / t_parallel, max_abs_diff(ys, yp));
}

void bench_projected(int n_sites, int reps) {
    const auto H = sqd::SparseHamiltonian::heisenberg(sqd::build_chain(n_sites), 1.0);
    const auto basis = H.default_sector_basis();
    const auto M = H.project(basis);
    const auto x = random_unit(M.size, 43);
    std::vector<double> ys(M.size), yp(M.size);
    const double t_serial = time_ms(reps, [&] { M.apply_serial(x, ys); });
    const double t_parallel = time_ms(reps, [&] { M.apply(x, yp); });
    std::printf("sector     chain:%-2d  k=%-10llu serial %8.3f ms  parallel %8.3f ms  "
                "speedup %5.2fx  max|diff| %g\n",
                n_sites, static_cast<unsigned long long>(M.size), t_serial, t_parallel,
                t_serial / t_parallel, max_abs_diff(ys, yp));
}

}  // namespace

int main(int argc, char** argv) {
    int max_sites = argc > 1 ? std::atoi(argv[1]) : 20;
    if (max_sites < 12) max_sites = 12;
    std::printf("matvec kernels: OpenMP row-parallel vs serial reference\n");
    for (int n = 12; n <= max_sites; n += 4) bench_full(n, n <= 16 ? 20 : 5);
    for (int n = 12; n <= max_sites; n += 4) bench_projected(n, n <= 16 ? 20 : 5);
    return 0;
}
