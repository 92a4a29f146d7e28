#include "sqd/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

namespace sqd {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0' || !std::isfinite(x))
        throw ConfigError("bad numeric value for '" + key + "': " + v);
    return x;
}

long long parse_int(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("bad integer value for '" + key + "': " + v);
    return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("bad boolean value for '" + key + "': " + v);
}

InclusionStrategy parse_strategy(const std::string& s) {
    if (s == "ordered") return InclusionStrategy::ordered();
    if (s.rfind("sampled:", 0) == 0) {
        const std::string seed = s.substr(8);
        char* end = nullptr;
        const unsigned long long v = std::strtoull(seed.c_str(), &end, 10);
        if (end == seed.c_str() || *end != '\0')
            throw ConfigError("bad sampled seed in strategy '" + s + "'");
        return InclusionStrategy::sampled(v);
    }
    if (s == "sampled") return InclusionStrategy::sampled(0);
    throw ConfigError("unknown strategy '" + s + "' (want ordered or sampled:<seed>)");
}

void parse_filling(ExperimentConfig& cfg, const std::string& v) {
    if (v == "auto") {
        cfg.filling = Filling::Auto;
        return;
    }
    if (v == "half") {
        cfg.filling = Filling::Half;
        return;
    }
    int nu = 0, nd = 0;
    char extra = 0;
    if (std::sscanf(v.c_str(), "%d,%d%c", &nu, &nd, &extra) != 2 || nu < 0 || nd < 0)
        throw ConfigError("bad filling '" + v + "' (want auto, half, or <n_up>,<n_down>)");
    cfg.filling = Filling::Explicit;
    cfg.n_up = nu;
    cfg.n_down = nd;
}

}  // namespace

std::string model_name(Model m) { return m == Model::Heisenberg ? "heisenberg" : "hubbard"; }

Model parse_model(const std::string& name) {
    if (name == "heisenberg") return Model::Heisenberg;
    if (name == "hubbard") return Model::Hubbard;
    throw ConfigError("unknown model '" + name + "'");
}

std::string filling_label(const ExperimentConfig& cfg) {
    switch (cfg.filling) {
        case Filling::Auto: return "auto";
        case Filling::Half: return "half";
        default: return std::to_string(cfg.n_up) + "," + std::to_string(cfg.n_down);
    }
}

int ExperimentConfig::instance_qubits(const Lattice& lat) const {
    return model == Model::Hubbard ? 2 * lat.sites() : lat.sites();
}

void ExperimentConfig::validate() const {
    if (lattices.empty()) throw ConfigError("no lattices specified");
    if (strategies.empty()) throw ConfigError("no strategies specified");
    if (thresholds.empty()) throw ConfigError("no thresholds specified");
    for (double th : thresholds)
        if (!(th > 0.0) || th > 1.0)
            throw ConfigError("threshold " + std::to_string(th) + " outside (0, 1]");
    std::set<std::uint64_t> seeds;
    int n_sampled = 0;
    for (const auto& s : strategies)
        if (s.kind == InclusionStrategy::Kind::Sampled) {
            ++n_sampled;
            if (!seeds.insert(s.seed).second)
                throw ConfigError("duplicate sampled seed " + std::to_string(s.seed));
        }
    for (const auto& lat : lattices) {
        const int q = instance_qubits(lat);
        if (q > max_qubits && !allow_large)
            throw ConfigError("instance " + lat.label() + " needs " + std::to_string(q) +
                              " qubits; rerun with allow_large to exceed " +
                              std::to_string(max_qubits));
        if (q > 63) throw ConfigError("instance " + lat.label() + " exceeds 63-qubit capacity");
    }
    if (model == Model::Hubbard && filling == Filling::Explicit) {
        for (const auto& lat : lattices)
            if (n_up > lat.sites() || n_down > lat.sites())
                throw ConfigError("filling " + filling_label(*this) +
                                  " does not fit lattice " + lat.label());
    }
    if (schedule.per_qubit < 1 || schedule.large_increment < 1)
        throw ConfigError("schedule increments must be positive");
    if (!(solver.tol > 0.0)) throw ConfigError("solver tolerance must be positive");
    if (max_m == 0) throw ConfigError("max_m must be positive");
}

ExperimentConfig parse_config(std::istream& is) {
    ExperimentConfig cfg;
    bool saw_thresholds = false;
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
            section = line.substr(1, line.size() - 2);
            if (section != "experiment" && section != "schedule" && section != "solver")
                throw ConfigError("unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");

        if (section == "experiment") {
            if (key == "model") cfg.model = parse_model(value);
            else if (key == "J") cfg.J = parse_double(key, value);
            else if (key == "t") cfg.t = parse_double(key, value);
            else if (key == "U") cfg.U = parse_double(key, value);
            else if (key == "filling") parse_filling(cfg, value);
            else if (key == "lattices") {
                cfg.lattices.clear();
                for (const auto& spec : split_list(value)) {
                    try {
                        cfg.lattices.push_back(parse_lattice(spec));
                    } catch (const LatticeError& e) {
                        throw ConfigError(std::string("bad lattice spec: ") + e.what());
                    }
                }
            } else if (key == "strategies") {
                cfg.strategies.clear();
                for (const auto& s : split_list(value)) cfg.strategies.push_back(parse_strategy(s));
            } else if (key == "thresholds") {
                cfg.thresholds.clear();
                for (const auto& s : split_list(value))
                    cfg.thresholds.push_back(parse_double(key, s));
                saw_thresholds = true;
            } else if (key == "out") cfg.output_dir = value;
            else if (key == "allow_large") cfg.allow_large = parse_bool(key, value);
            else throw ConfigError("unknown key '" + key + "' in [experiment]");
        } else if (section == "schedule") {
            if (key == "per_qubit") cfg.schedule.per_qubit = static_cast<int>(parse_int(key, value));
            else if (key == "large_increment")
                cfg.schedule.large_increment = static_cast<int>(parse_int(key, value));
            else if (key == "large_threshold_qubits")
                cfg.schedule.large_threshold_qubits = static_cast<int>(parse_int(key, value));
            else throw ConfigError("unknown key '" + key + "' in [schedule]");
        } else {  // solver
            if (key == "tol") cfg.solver.tol = parse_double(key, value);
            else if (key == "max_iter") cfg.solver.max_iter = static_cast<int>(parse_int(key, value));
            else if (key == "seed")
                cfg.solver.seed = static_cast<std::uint64_t>(parse_int(key, value));
            else if (key == "max_m") cfg.max_m = static_cast<std::uint64_t>(parse_int(key, value));
            else throw ConfigError("unknown key '" + key + "' in [solver]");
        }
    }
    if (cfg.strategies.empty()) cfg.strategies.push_back(InclusionStrategy::ordered());
    if (!saw_thresholds) cfg.thresholds = {0.90, 0.95, 0.99};
    std::sort(cfg.thresholds.begin(), cfg.thresholds.end());
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    return parse_config(f);
}

}  // namespace sqd
