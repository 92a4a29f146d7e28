#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqd/eigensolver.hpp"
#include "sqd/lattice.hpp"
#include "sqd/sqd.hpp"

namespace sqd {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Which particle sector a Hubbard instance is solved in.
/// Auto scans all (n_up, n_down) blocks and keeps the global minimum;
/// Half fixes n_up = ceil(N/2), n_down = floor(N/2); Explicit is user-given.
enum class Filling { Auto, Half, Explicit };

/// One experiment grid, parsed from a sectioned key-value file:
///
///   [experiment]
///   model = heisenberg            # or hubbard
///   J = 1.0                       # Heisenberg coupling
///   t = 1.0                       # Hubbard hopping
///   U = 2.0                       # Hubbard on-site repulsion
///   filling = auto                # auto | half | <n_up>,<n_down>
///   lattices = chain:6, chain:8   # lattice spec strings
///   strategies = ordered, sampled:7
///   thresholds = 0.90, 0.95, 0.99
///   out = out
///   allow_large = false
///
///   [schedule]
///   per_qubit = 1
///   large_increment = 1000
///   large_threshold_qubits = 16
///
///   [solver]
///   tol = 1e-10
///   max_iter = 0
///   seed = 1
///   max_m = 50000000
///
/// Lines starting with '#' and blank lines are ignored. Unknown sections or
/// keys, unparsable values, and invariant violations all raise ConfigError.
struct ExperimentConfig {
    Model model = Model::Heisenberg;
    double J = 1.0;
    double t = 1.0;
    double U = 2.0;
    Filling filling = Filling::Auto;
    int n_up = -1;    // Explicit filling only
    int n_down = -1;  // Explicit filling only

    std::vector<Lattice> lattices;
    std::vector<InclusionStrategy> strategies;
    std::vector<double> thresholds = {0.90, 0.95, 0.99};

    ScheduleConfig schedule;
    SolverOpts solver;
    std::uint64_t max_m = 50'000'000;

    std::string output_dir = "out";
    bool allow_large = false;
    int max_qubits = 20;  // hard instance-size gate unless allow_large

    /// Qubit count of one lattice instance under this config's model.
    int instance_qubits(const Lattice& lat) const;

    /// Throws ConfigError on any violated invariant.
    void validate() const;
};

ExperimentConfig parse_config(std::istream& is);
ExperimentConfig parse_config_file(const std::string& path);

/// "auto", "half", or "<n_up>,<n_down>".
std::string filling_label(const ExperimentConfig& cfg);

std::string model_name(Model m);  // "heisenberg" / "hubbard"
Model parse_model(const std::string& name);

}  // namespace sqd
