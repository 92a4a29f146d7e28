#include "sqd/sqd.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace sqd {

std::string InclusionStrategy::label() const {
    if (kind == Kind::Ordered) return "ordered";
    return "sampled:" + std::to_string(seed);
}

std::uint64_t next_increment(int n_qubits, const ScheduleConfig& cfg) {
    if (n_qubits < 1) throw SqdError("qubit count must be positive");
    if (n_qubits > cfg.large_threshold_qubits) return cfg.large_increment;
    return static_cast<std::uint64_t>(cfg.per_qubit) * n_qubits;
}

double energy_fidelity(double e0k, double e0) {
    if (e0 == 0.0) throw SqdError("energy fidelity undefined for E0 = 0");
    return 1.0 - std::abs(e0k - e0) / std::abs(e0);
}

ConfigSampler::ConfigSampler(const GroundState& gs, std::uint64_t seed) : gs_(gs), rng_(seed) {
    cdf_.reserve(gs.support().size());
    double acc = 0.0;
    for (const auto& [c, a] : gs.support()) {
        acc += a * a;
        cdf_.push_back(acc);
    }
    if (cdf_.empty()) throw SqdError("cannot sample from empty support");
}

Configuration ConfigSampler::draw() {
    const double u = ((rng_() >> 11) * 0x1.0p-53) * cdf_.back();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return gs_.support()[static_cast<std::size_t>(it - cdf_.begin())].first;
}

namespace {

double solve_subspace(const SparseHamiltonian& H, std::span<const Configuration> configs,
                      const SolverOpts& solver) {
    return projected_eigmin(H.project(configs), solver);
}

}  // namespace

SubspaceTrace run_trace(const GroundState& gs, const SparseHamiltonian& H,
                        const InclusionStrategy& strategy, const StopRule& stop,
                        const ScheduleConfig& schedule, const SolverOpts& solver) {
    if (gs.n_qubits() != H.n_qubits())
        throw SqdError("ground state and Hamiltonian dimensions differ");
    const auto& support = gs.support();
    const std::uint64_t support_size = support.size();
    const std::uint64_t inc = next_increment(H.n_qubits(), schedule);

    SubspaceTrace trace;
    trace.strategy = strategy;
    trace.schedule = schedule;
    trace.e0 = gs.energy();

    std::vector<Configuration> configs;  // inclusion order
    double mass = 0.0;
    std::uint64_t m = 0;

    std::optional<ConfigSampler> sampler;
    std::unordered_set<Configuration> seen;
    if (strategy.kind == InclusionStrategy::Kind::Sampled) {
        sampler.emplace(gs, strategy.seed);
        seen.reserve(1024);
    }

    while (true) {
        if (m >= stop.max_m)
            throw CapExceededError("iteration cap exceeded before the stopping rule fired",
                                   std::move(trace));
        const std::uint64_t step_m = std::min(m + inc, stop.max_m);
        if (strategy.kind == InclusionStrategy::Kind::Ordered) {
            const std::uint64_t new_k = std::min(step_m, support_size);
            for (std::uint64_t i = configs.size(); i < new_k; ++i) {
                configs.push_back(support[i].first);
                mass += support[i].second * support[i].second;
            }
            m = std::max(step_m, new_k);  // m tracks the schedule; k caps at support
        } else {
            while (m < step_m) {
                const Configuration c = sampler->draw();
                ++m;
                if (seen.insert(c).second) {
                    configs.push_back(c);
                    mass += gs.probability(c);
                }
            }
        }

        TraceStep step;
        step.m = m;
        step.k = configs.size();
        step.e0k = solve_subspace(H, configs, solver);
        step.fidelity = energy_fidelity(step.e0k, trace.e0);
        step.mass = mass;
        trace.steps.push_back(step);

        if (stop.target_fidelity && step.fidelity >= *stop.target_fidelity) {
            trace.reached_target = true;
            break;
        }
        if (step.k >= support_size) {
            trace.support_exhausted = true;
            trace.reached_target =
                stop.target_fidelity ? step.fidelity >= *stop.target_fidelity : false;
            break;
        }
    }
    return trace;
}

MinM min_m_from_trace(const GroundState& gs, const SparseHamiltonian& H,
                      const SubspaceTrace& trace, double threshold,
                      const SolverOpts& solver) {
    if (threshold <= 0.0 || threshold > 1.0) throw SqdError("threshold must be in (0, 1]");
    std::size_t hit_idx = trace.steps.size();
    for (std::size_t i = 0; i < trace.steps.size(); ++i)
        if (trace.steps[i].fidelity >= threshold) {
            hit_idx = i;
            break;
        }
    if (hit_idx == trace.steps.size())
        throw SqdError("trace never reaches the fidelity threshold");

    const TraceStep& hit = trace.steps[hit_idx];
    MinM result;
    result.m_schedule = hit.m;
    result.k_schedule = hit.k;
    result.fidelity = hit.fidelity;
    result.k_exact = hit.k;

    if (trace.strategy.kind == InclusionStrategy::Kind::Ordered) {
        // F_E is monotone in k for nested ordered prefixes: bisect inside
        // the final increment for the exact minimal subspace size.
        const auto& support = gs.support();
        std::uint64_t lo = hit_idx > 0 ? trace.steps[hit_idx - 1].k + 1 : 1;
        std::uint64_t hi = hit.k;
        std::vector<Configuration> prefix;
        prefix.reserve(hi);
        for (std::uint64_t i = 0; i < hi; ++i) prefix.push_back(support[i].first);
        while (lo < hi) {
            const std::uint64_t mid = lo + (hi - lo) / 2;
            const double e0k =
                solve_subspace(H, std::span(prefix.data(), mid), solver);
            if (energy_fidelity(e0k, trace.e0) >= threshold)
                hi = mid;
            else
                lo = mid + 1;
        }
        result.k_exact = lo;
    }
    return result;
}

MinM find_min_m(const GroundState& gs, const SparseHamiltonian& H,
                const InclusionStrategy& strategy, double threshold,
                const ScheduleConfig& schedule, const SolverOpts& solver) {
    if (threshold <= 0.0 || threshold > 1.0) throw SqdError("threshold must be in (0, 1]");
    StopRule stop;
    stop.target_fidelity = threshold;
    SubspaceTrace trace = run_trace(gs, H, strategy, stop, schedule, solver);
    if (!trace.reached_target)
        throw SqdError("fidelity threshold not reached even at full support");
    return min_m_from_trace(gs, H, trace, threshold, solver);
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> sampling_efficiency_trace(
    const GroundState& gs, std::uint64_t seed, std::uint64_t max_m, std::uint64_t record_every) {
    if (record_every == 0) throw SqdError("record interval must be positive");
    ConfigSampler sampler(gs, seed);
    std::unordered_set<Configuration> seen;
    std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
    for (std::uint64_t m = 1; m <= max_m; ++m) {
        seen.insert(sampler.draw());
        if (m % record_every == 0 || m == max_m) out.emplace_back(m, seen.size());
    }
    return out;
}

}  // namespace sqd
