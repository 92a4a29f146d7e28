#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sqd/basis.hpp"

namespace sqd {

struct GroundStateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Squared amplitudes of a unit vector. Throws if the norm is off by more
/// than 1e-10.
std::vector<double> probabilities(std::span<const double> psi);

/// S = -sum p_i ln p_i (natural log); zero-probability terms contribute 0.
double shannon_entropy(std::span<const double> p);

/// N_eff = e^S.
double effective_support(std::span<const double> p);

/// Exact ground state as an amplitude/probability store over the
/// configurations that carry weight above the support cutoff.
class GroundState {
  public:
    static constexpr double kSupportCutoff = 1e-16;

    /// Builds from a unit amplitude vector of length 2^n_qubits.
    static GroundState from_vector(double energy, std::span<const double> psi, int n_qubits,
                                   std::map<std::string, std::string> metadata = {});

    double energy() const { return energy_; }
    int n_qubits() const { return n_qubits_; }
    std::uint64_t dimension() const { return std::uint64_t{1} << n_qubits_; }

    /// (configuration, amplitude) pairs sorted by descending probability,
    /// ties broken by ascending configuration bits.
    const std::vector<std::pair<Configuration, double>>& support() const { return support_; }

    const std::map<std::string, std::string>& metadata() const { return metadata_; }

    double probability(Configuration c) const;
    double shannon_entropy() const;
    double effective_support() const;
    double cumulative_mass(std::span<const Configuration> configs) const;

    /// Versioned text dump; see load() for the format contract.
    void dump(std::ostream& os) const;
    /// Parses a dump. Truncated or malformed input throws GroundStateError.
    static GroundState load(std::istream& is);

  private:
    double energy_ = 0.0;
    int n_qubits_ = 0;
    std::vector<std::pair<Configuration, double>> support_;       // descending p
    std::vector<std::pair<Configuration, double>> by_config_;     // ascending config
    std::map<std::string, std::string> metadata_;

    void index_by_config();
};

}  // namespace sqd
