#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sqd/analysis.hpp"
#include "sqd/config.hpp"
#include "sqd/groundstate.hpp"
#include "sqd/sqd.hpp"

namespace sqd {

struct RunnerError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// FNV-1a 64-bit content hash, reported as 16 hex digits in manifests.
std::uint64_t fnv1a64(std::string_view data);
std::string hash_hex(std::uint64_t h);

/// The Hamiltonian for one (config, lattice) instance. For Hubbard the
/// particle numbers follow the config's filling policy; Auto runs a
/// ground-energy scan over every (n_up, n_down) block and keeps the global
/// minimum (ties broken toward balanced, then smaller n_up).
SparseHamiltonian instance_hamiltonian(const ExperimentConfig& cfg, const Lattice& lat);

/// Sector hosting the ground state: total popcount floor(L/2) for
/// Heisenberg, the Hamiltonian's (n_up, n_down) block for Hubbard.
Sector instance_sector(const SparseHamiltonian& H);

/// Sector-restricted exact ground state with metadata (model, lattice,
/// sector, seed, tol) recorded for later replay.
GroundState solve_instance(const ExperimentConfig& cfg, const Lattice& lat);

/// Rebuilds the Hamiltonian a dump was produced from, using its metadata.
SparseHamiltonian hamiltonian_from_metadata(const std::map<std::string, std::string>& md);

/// One CSV row per trace step:
/// model,lattice,n_qubits,strategy,seed,threshold,m,k,E0k,E0,F_E,cumulative_mass
void write_trace_csv(std::ostream& os, const std::string& model, const std::string& lattice,
                     int n_qubits, const InclusionStrategy& strategy, double threshold,
                     const SubspaceTrace& trace);

/// Runs an SQD trace against a stored ground-state dump without re-solving
/// the full problem. Corrupt dumps raise GroundStateError.
SubspaceTrace replay_trace(const std::string& dump_path, const InclusionStrategy& strategy,
                           double threshold, const ScheduleConfig& schedule = {},
                           const SolverOpts& solver = {}, std::uint64_t max_m = 50'000'000);

struct ManifestEntry {
    std::string path;  // relative to the output dir
    std::uint64_t bytes = 0;
    std::string hash;  // fnv1a64 hex
};

struct InstanceReport {
    std::string model;
    std::string lattice;
    bool ok = false;
    std::string error;
};

struct RunResult {
    std::vector<ManifestEntry> files;
    std::vector<InstanceReport> instances;
    bool all_ok = false;
    std::string output_dir;
};

/// Full sweep: per lattice solve (cached), dump, per-(strategy, threshold)
/// trace CSVs and min-m records, then analysis CSVs/plots and manifest.json.
/// Instance failures are isolated and recorded; all_ok reflects them.
RunResult run_experiment(const ExperimentConfig& cfg, int threads = 1);

/// Recomputes scaling.csv, kneff.csv and the plots from minm.csv and
/// neff.csv already present in out_dir. Returns the files it wrote.
std::vector<ManifestEntry> analyze_outputs(const std::string& out_dir);

}  // namespace sqd
