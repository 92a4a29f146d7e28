#include "sqd/groundstate.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace sqd {

std::vector<double> probabilities(std::span<const double> psi) {
    double n2 = 0.0;
    for (double a : psi) n2 += a * a;
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-10)
        throw GroundStateError("amplitude vector is not normalized");
    std::vector<double> p(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) p[i] = psi[i] * psi[i];
    return p;
}

double shannon_entropy(std::span<const double> p) {
    double s = 0.0;
    for (double q : p)
        if (q > 0.0) s -= q * std::log(q);
    return s;
}

double effective_support(std::span<const double> p) { return std::exp(shannon_entropy(p)); }

GroundState GroundState::from_vector(double energy, std::span<const double> psi, int n_qubits,
                                     std::map<std::string, std::string> metadata) {
    if (psi.size() != (std::uint64_t{1} << n_qubits))
        throw GroundStateError("amplitude vector length does not match qubit count");
    double n2 = 0.0;
    for (double a : psi) n2 += a * a;
    if (std::abs(std::sqrt(n2) - 1.0) > 1e-10)
        throw GroundStateError("amplitude vector is not normalized");

    GroundState gs;
    gs.energy_ = energy;
    gs.n_qubits_ = n_qubits;
    gs.metadata_ = std::move(metadata);
    for (std::uint64_t i = 0; i < psi.size(); ++i)
        if (psi[i] * psi[i] > kSupportCutoff) gs.support_.emplace_back(i, psi[i]);
    std::sort(gs.support_.begin(), gs.support_.end(), [](const auto& a, const auto& b) {
        const double pa = a.second * a.second, pb = b.second * b.second;
        if (pa != pb) return pa > pb;
        return a.first < b.first;
    });
    // Degenerate probabilities (symmetry partners) only agree to solver
    // precision; group them within a relative tolerance and order each group
    // by ascending configuration bits so the tie-break is deterministic.
    for (std::size_t lo = 0; lo < gs.support_.size();) {
        const double head = gs.support_[lo].second * gs.support_[lo].second;
        std::size_t hi = lo + 1;
        while (hi < gs.support_.size() &&
               gs.support_[hi].second * gs.support_[hi].second >= head * (1.0 - 1e-9))
            ++hi;
        std::sort(gs.support_.begin() + lo, gs.support_.begin() + hi,
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        lo = hi;
    }
    gs.index_by_config();
    return gs;
}

void GroundState::index_by_config() {
    by_config_ = support_;
    std::sort(by_config_.begin(), by_config_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
}

double GroundState::probability(Configuration c) const {
    if (c >= dimension()) throw GroundStateError("configuration index out of range");
    auto it = std::lower_bound(by_config_.begin(), by_config_.end(), c,
                               [](const auto& a, Configuration v) { return a.first < v; });
    if (it == by_config_.end() || it->first != c) return 0.0;
    return it->second * it->second;
}

double GroundState::shannon_entropy() const {
    double s = 0.0;
    for (const auto& [c, a] : support_) {
        const double p = a * a;
        s -= p * std::log(p);
    }
    return s;
}

double GroundState::effective_support() const { return std::exp(shannon_entropy()); }

double GroundState::cumulative_mass(std::span<const Configuration> configs) const {
    double s = 0.0;
    for (Configuration c : configs) s += probability(c);
    return s;
}

void GroundState::dump(std::ostream& os) const {
    char buf[128];
    os << "# sqd-groundstate v1\n";
    for (const auto& [k, v] : metadata_) os << "# " << k << "=" << v << "\n";
    std::snprintf(buf, sizeof buf, "# n_qubits=%d energy=%.17g support=%zu\n", n_qubits_,
                  energy_, support_.size());
    os << buf;
    for (const auto& [c, a] : support_) {
        std::snprintf(buf, sizeof buf, "%" PRIu64 " %.17g\n", static_cast<std::uint64_t>(c), a);
        os << buf;
    }
    os << "# end\n";
}

GroundState GroundState::load(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "# sqd-groundstate v1")
        throw GroundStateError("bad ground-state dump header");
    GroundState gs;
    long long expected = -1;
    bool have_dims = false;
    bool ended = false;
    while (std::getline(is, line)) {
        if (line == "# end") {
            ended = true;
            break;
        }
        if (line.rfind("# n_qubits=", 0) == 0) {
            std::size_t sup = 0;
            if (std::sscanf(line.c_str(), "# n_qubits=%d energy=%lg support=%zu", &gs.n_qubits_,
                            &gs.energy_, &sup) != 3)
                throw GroundStateError("bad ground-state dimension line");
            expected = static_cast<long long>(sup);
            have_dims = true;
            continue;
        }
        if (line.rfind("# ", 0) == 0) {
            auto eq = line.find('=');
            if (eq != std::string::npos)
                gs.metadata_[line.substr(2, eq - 2)] = line.substr(eq + 1);
            continue;
        }
        if (line.empty()) continue;
        std::uint64_t c;
        double a;
        if (std::sscanf(line.c_str(), "%" SCNu64 " %lg", &c, &a) != 2)
            throw GroundStateError("bad support line: '" + line + "'");
        gs.support_.emplace_back(c, a);
    }
    if (!have_dims || !ended) throw GroundStateError("truncated ground-state dump");
    if (expected != static_cast<long long>(gs.support_.size()))
        throw GroundStateError("support count mismatch in ground-state dump");
    gs.index_by_config();
    return gs;
}

}  // namespace sqd
