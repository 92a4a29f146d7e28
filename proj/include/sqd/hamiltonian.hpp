#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqd/basis.hpp"
#include "sqd/lattice.hpp"

namespace sqd {

struct HamiltonianError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Model { Heisenberg, Hubbard };

/// Sparse symmetric matrix restricted to an ordered configuration subset.
/// Entry (a, b) is <configs[a]| H |configs[b]>; since the basis states are
/// computational-basis vectors this is exactly the submatrix of H.
struct ProjectedMatrix {
    std::uint64_t size = 0;
    std::vector<std::uint64_t> row_ptr;
    std::vector<std::uint32_t> col;
    std::vector<double> val;

    void apply(std::span<const double> x, std::span<double> y) const;
    void apply_serial(std::span<const double> x, std::span<double> y) const;
};

/// Real symmetric Hamiltonian over D = 2^n_qubits computational-basis states.
///
/// Heisenberg:  H = J sum_bonds (SxSx + SySy + SzSz), spin-1/2, bit 1 = up.
/// Hubbard:     H = -t sum_{bonds,spin} (c+ c + h.c.) + U sum_i n_up n_down,
///              Jordan-Wigner encoded with spin-up occupations on qubits
///              0..N-1 (snake order) and spin-down on qubits N..2N-1.
///
/// Rows are generated on the fly; for n_qubits <= 16 a CSR copy of the full
/// matrix is built at construction and used by apply().
class SparseHamiltonian {
  public:
    static SparseHamiltonian heisenberg(const Lattice& lattice, double J);
    static SparseHamiltonian hubbard(const Lattice& lattice, double t, double U, int n_up,
                                     int n_down);

    Model model() const { return model_; }
    int n_qubits() const { return n_qubits_; }
    std::uint64_t dimension() const { return std::uint64_t{1} << n_qubits_; }
    const Lattice& lattice() const { return lattice_; }
    int n_up() const { return n_up_; }
    int n_down() const { return n_down_; }
    std::string model_label() const;

    /// Invokes fn(col, value) for every nonzero entry of the given row,
    /// diagonal included. Column order is unspecified; no duplicates.
    void for_each_in_row(Configuration row,
                         const std::function<void(Configuration, double)>& fn) const;

    /// Row entries sorted by column.
    std::vector<std::pair<Configuration, double>> row(Configuration r) const;

    /// y = H x over the full dimension. OpenMP-parallel over rows; the
    /// result is bitwise identical to apply_serial for any schedule.
    std::vector<double> apply(std::span<const double> x) const;
    /// Serial reference implementation.
    std::vector<double> apply_serial(std::span<const double> x) const;

    /// Submatrix on an ordered, duplicate-free configuration list.
    ProjectedMatrix project(std::span<const Configuration> configs) const;

    /// Basis of the symmetry sector that hosts the ground state by default:
    /// popcount floor(L/2) for Heisenberg, the (n_up, n_down) block for
    /// Hubbard.
    std::vector<Configuration> default_sector_basis() const;

    /// Text triplet export: "# dim=<D> model=<tag>" then "row col value".
    void export_triplets(std::ostream& os) const;

  private:
    SparseHamiltonian() = default;
    void build_cache();

    Model model_ = Model::Heisenberg;
    Lattice lattice_;
    int n_qubits_ = 0;
    double coupling_j_ = 0.0;  // Heisenberg
    double hop_t_ = 0.0;       // Hubbard
    double onsite_u_ = 0.0;    // Hubbard
    int n_up_ = -1;
    int n_down_ = -1;

    // full-matrix CSR cache for n_qubits <= 16
    bool cached_ = false;
    std::vector<std::uint64_t> cache_ptr_;
    std::vector<std::uint32_t> cache_col_;
    std::vector<double> cache_val_;
};

}  // namespace sqd
