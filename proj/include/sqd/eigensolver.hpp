#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "sqd/hamiltonian.hpp"

namespace sqd {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConvergenceError : SolverError {
    ConvergenceError(const std::string& msg, double residual)
        : SolverError(msg), best_residual(residual) {}
    double best_residual;
};

struct EigenResult {
    double value = 0.0;
    std::vector<double> vector;  // unit norm, sign-fixed; empty for value-only calls
    int iterations = 0;
    double residual = 0.0;
};

struct SolverOpts {
    double tol = 1e-10;
    int max_iter = 0;  // 0: 10*sqrt(dim) + 200
    std::uint64_t seed = 1;
};

/// Flips the sign so the largest-magnitude component is strictly positive
/// (first occurrence wins on exact magnitude ties).
void fix_sign(std::span<double> v);

/// Lowest eigenpair of a symmetric operator by Lanczos with full
/// reorthogonalization. `op(x, y)` must write y = A x. Deterministic for a
/// fixed seed. Throws ConvergenceError if the residual tolerance is not met
/// within max_iter matvecs.
EigenResult lanczos_ground(const std::function<void(std::span<const double>, std::span<double>)>& op,
                           std::uint64_t dim, const SolverOpts& opts = {},
                           bool want_vector = true);

EigenResult lanczos_ground(const ProjectedMatrix& M, const SolverOpts& opts = {},
                           bool want_vector = true);
EigenResult lanczos_ground(const SparseHamiltonian& H, const SolverOpts& opts = {},
                           bool want_vector = true);

/// Exact lowest eigenvalue of a symmetric matrix via a direct solver.
/// Throws if the matrix deviates from symmetry by more than 1e-10.
double dense_eigmin(const Eigen::MatrixXd& M);

/// Lowest eigenvalue of a projected matrix: dense direct solve up to
/// k = 2000, Lanczos above.
double projected_eigmin(const ProjectedMatrix& M, const SolverOpts& opts = {});

/// Symmetry sector descriptor. Heisenberg sectors fix the total popcount;
/// Hubbard sectors fix the per-spin-block popcounts.
struct Sector {
    enum class Kind { TotalPopcount, BlockPopcounts } kind = Kind::TotalPopcount;
    int a = 0;  // popcount, or n_up
    int b = 0;  // n_down (BlockPopcounts only)
};

std::vector<Configuration> enumerate_sector(const SparseHamiltonian& H, const Sector& sector);

/// Ground state of H restricted to a symmetry sector, scattered back into
/// full-dimension coordinates.
EigenResult sector_ground(const SparseHamiltonian& H, const Sector& sector,
                          const SolverOpts& opts = {});

}  // namespace sqd
