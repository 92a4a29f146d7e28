#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqd/eigensolver.hpp"
#include "sqd/groundstate.hpp"
#include "sqd/hamiltonian.hpp"

namespace sqd {

struct SqdError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// How configurations enter the subspace.
/// Ordered: deterministically, in descending ground-state probability,
/// ties broken by ascending configuration bits (so m = k).
/// Sampled: i.i.d. draws from p_i with a seeded PRNG (std::mt19937_64 with
/// 53-bit uniform doubles and inverse-CDF lookup); m counts draws, k counts
/// distinct configurations.
struct InclusionStrategy {
    enum class Kind { Ordered, Sampled } kind = Kind::Ordered;
    std::uint64_t seed = 0;

    static InclusionStrategy ordered() { return {Kind::Ordered, 0}; }
    static InclusionStrategy sampled(std::uint64_t seed) { return {Kind::Sampled, seed}; }
    std::string label() const;
};

struct ScheduleConfig {
    int per_qubit = 1;            // increment = per_qubit * n_qubits for small systems
    int large_increment = 1000;   // fixed increment once n_qubits exceeds the threshold
    int large_threshold_qubits = 16;
};

/// Increment of the subspace growth schedule.
std::uint64_t next_increment(int n_qubits, const ScheduleConfig& cfg = {});

/// F_E = 1 - |E0k - E0| / |E0|. Throws for E0 = 0.
double energy_fidelity(double e0k, double e0);

struct TraceStep {
    std::uint64_t m = 0;  // draws (Sampled) or inclusions (Ordered) so far
    std::uint64_t k = 0;  // unique configurations in the subspace
    double e0k = 0.0;     // projected ground energy
    double fidelity = 0.0;
    double mass = 0.0;    // cumulative ground-state probability in the subspace
};

struct SubspaceTrace {
    std::vector<TraceStep> steps;
    InclusionStrategy strategy;
    ScheduleConfig schedule;
    double e0 = 0.0;  // reference exact energy
    bool reached_target = false;
    bool support_exhausted = false;
};

struct StopRule {
    std::optional<double> target_fidelity;  // stop once F_E >= target
    std::uint64_t max_m = 50'000'000;       // hard cap on iterations
};

struct CapExceededError : SqdError {
    CapExceededError(const std::string& msg, SubspaceTrace partial)
        : SqdError(msg), trace(std::move(partial)) {}
    SubspaceTrace trace;
};

/// Runs the incremental subspace experiment: grow the configuration set per
/// the schedule, project H onto it, solve for the lowest eigenvalue, record
/// one step per increment. Stops at the target fidelity, at full support,
/// or throws CapExceededError (carrying the partial trace) at the m cap.
SubspaceTrace run_trace(const GroundState& gs, const SparseHamiltonian& H,
                        const InclusionStrategy& strategy, const StopRule& stop,
                        const ScheduleConfig& schedule = {}, const SolverOpts& solver = {});

struct MinM {
    std::uint64_t m_schedule = 0;  // first scheduled m with F_E >= threshold
    std::uint64_t k_schedule = 0;  // unique configurations at that step
    std::uint64_t k_exact = 0;     // Ordered only: exact minimal k (bisected)
    double fidelity = 0.0;         // fidelity at the reported step
};

/// Minimal iteration count reaching the fidelity threshold. Ordered runs
/// are additionally bisected to the exact minimal subspace size.
MinM find_min_m(const GroundState& gs, const SparseHamiltonian& H,
                const InclusionStrategy& strategy, double threshold,
                const ScheduleConfig& schedule = {}, const SolverOpts& solver = {});

/// Same extraction from an already-computed trace (its first step at or above
/// the threshold); avoids re-running the schedule when one trace serves
/// several thresholds. Throws if the trace never reaches the threshold.
MinM min_m_from_trace(const GroundState& gs, const SparseHamiltonian& H,
                      const SubspaceTrace& trace, double threshold,
                      const SolverOpts& solver = {});

/// Unique-configuration growth under sampling: (m, k) after every increment.
std::vector<std::pair<std::uint64_t, std::uint64_t>> sampling_efficiency_trace(
    const GroundState& gs, std::uint64_t seed, std::uint64_t max_m,
    std::uint64_t record_every = 1);

/// Inverse-CDF sampler over the ground-state support.
class ConfigSampler {
  public:
    ConfigSampler(const GroundState& gs, std::uint64_t seed);
    Configuration draw();

  private:
    const GroundState& gs_;
    std::vector<double> cdf_;
    std::mt19937_64 rng_;
};

}  // namespace sqd
