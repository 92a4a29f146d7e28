#include "sqd/basis.hpp"

#include <bit>
#include <stdexcept>

namespace sqd {

std::vector<Configuration> popcount_sector(int n_qubits, int popcount) {
    if (n_qubits < 1 || n_qubits > 63) throw std::invalid_argument("n_qubits out of range");
    if (popcount < 0 || popcount > n_qubits) throw std::invalid_argument("popcount out of range");
    std::vector<Configuration> out;
    if (popcount == 0) {
        out.push_back(0);
        return out;
    }
    Configuration v = (Configuration{1} << popcount) - 1;
    const Configuration limit = Configuration{1} << n_qubits;
    while (v < limit) {
        out.push_back(v);
        Configuration t = v | (v - 1);
        v = (t + 1) | (((~t & (t + 1)) - 1) >> (std::countr_zero(v) + 1));
    }
    return out;
}

std::vector<Configuration> hubbard_sector(int n_sites, int n_up, int n_down) {
    auto ups = popcount_sector(n_sites, n_up);
    auto downs = popcount_sector(n_sites, n_down);
    std::vector<Configuration> out;
    out.reserve(ups.size() * downs.size());
    for (Configuration d : downs)
        for (Configuration u : ups) out.push_back(u | (d << n_sites));
    return out;
}

}  // namespace sqd
