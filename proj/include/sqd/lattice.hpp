#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sqd {

struct LatticeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class LatticeKind { Chain, Rect };

/// A 1-D chain or 2-D rectangular lattice with nearest-neighbor bonds.
/// Sites are identified by their linear index along the snake path:
/// row r runs left-to-right when r is even, right-to-left when r is odd.
/// Chains use the identity ordering. All Hamiltonian builders address
/// sites (and hence qubits) through these linear indices.
struct Lattice {
    LatticeKind kind = LatticeKind::Chain;
    int height = 1;
    int width = 0;
    bool periodic = false;
    // unordered site pairs, stored with first < second, sorted, unique
    std::vector<std::pair<int, int>> bonds;

    int sites() const { return height * width; }

    /// Snake-path linear index of lattice coordinate (row, col).
    int site_index(int row, int col) const;

    /// CLI spec string, e.g. "chain:6" or "rect:3x4:periodic".
    std::string label() const;
};

Lattice build_chain(int n_sites, bool periodic = false);
Lattice build_rect(int height, int width, bool periodic = false);

/// Parses "chain:<n>" or "rect:<h>x<w>" with optional ":periodic" suffix.
Lattice parse_lattice(const std::string& spec);

}  // namespace sqd
