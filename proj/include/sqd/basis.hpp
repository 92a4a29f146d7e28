#pragma once

#include <cstdint>
#include <vector>

namespace sqd {

using Configuration = std::uint64_t;

/// All n_qubit bit patterns with the given popcount, in ascending numeric
/// order (Gosper's hack).
std::vector<Configuration> popcount_sector(int n_qubits, int popcount);

/// All configurations of a Hubbard (n_up, n_down) sector: low n_sites qubits
/// hold the spin-up occupations, high n_sites qubits the spin-down ones.
/// Ascending numeric order.
std::vector<Configuration> hubbard_sector(int n_sites, int n_up, int n_down);

}  // namespace sqd
