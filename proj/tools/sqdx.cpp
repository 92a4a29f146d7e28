// sqdx: solve / trace / sweep / analyze / replay for lattice SQD experiments.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sqd/config.hpp"
#include "sqd/runner.hpp"

namespace {

struct CommonOpts {
    std::string model = "heisenberg";
    std::string lattice;
    bool periodic = false;
    double J = 1.0, t = 1.0, U = 2.0;
    std::string filling = "auto";
    double tol = 1e-10;
    std::uint64_t seed = 0;
    bool allow_large = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--model", o.model, "heisenberg or hubbard")
        ->check(CLI::IsMember({"heisenberg", "hubbard"}));
    cmd->add_option("--lattice", o.lattice, "lattice spec, e.g. chain:6 or rect:3x4")
        ->required();
    cmd->add_flag("--periodic", o.periodic, "add wrap-around bonds");
    cmd->add_option("--J", o.J, "Heisenberg coupling");
    cmd->add_option("--t", o.t, "Hubbard hopping");
    cmd->add_option("--U", o.U, "Hubbard on-site repulsion");
    cmd->add_option("--filling", o.filling, "auto | half | <n_up>,<n_down>");
    cmd->add_option("--tol", o.tol, "eigensolver residual tolerance");
    cmd->add_flag("--allow-large", o.allow_large, "lift the 20-qubit instance gate");
}

sqd::ExperimentConfig to_config(const CommonOpts& o) {
    std::ostringstream ini;
    ini << "[experiment]\n"
        << "model = " << o.model << "\n"
        << "J = " << o.J << "\nt = " << o.t << "\nU = " << o.U << "\n"
        << "filling = " << o.filling << "\n"
        << "lattices = " << o.lattice << (o.periodic ? ":periodic" : "") << "\n"
        << "allow_large = " << (o.allow_large ? "true" : "false") << "\n"
        << "[solver]\ntol = " << o.tol << "\n";
    std::istringstream is(ini.str());
    sqd::ExperimentConfig cfg = sqd::parse_config(is);
    if (o.periodic && cfg.lattices[0].label().find("periodic") == std::string::npos)
        throw sqd::ConfigError("lattice spec rejected the periodic flag");
    return cfg;
}

std::ostream& open_out(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw sqd::RunnerError("cannot write " + path);
    return file;
}

sqd::InclusionStrategy make_strategy(const std::string& name, std::uint64_t seed) {
    if (name == "ordered") return sqd::InclusionStrategy::ordered();
    if (name == "sampled") return sqd::InclusionStrategy::sampled(seed);
    throw sqd::ConfigError("unknown strategy '" + name + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sample-based quantum diagonalization on Heisenberg/Hubbard lattices"};
    app.require_subcommand(1);

    CommonOpts solve_opts, trace_opts;
    std::string solve_out = "-";
    auto* solve = app.add_subcommand("solve", "exact ground state of one instance");
    add_common(solve, solve_opts);
    solve->add_option("--out", solve_out, "dump file ('-' for stdout)");

    std::string trace_out = "-", trace_strategy = "ordered";
    double trace_threshold = 0.99;
    auto* trace = app.add_subcommand("trace", "single SQD subspace trace");
    add_common(trace, trace_opts);
    trace->add_option("--strategy", trace_strategy, "ordered or sampled")
        ->check(CLI::IsMember({"ordered", "sampled"}));
    trace->add_option("--seed", trace_opts.seed, "sampling seed");
    trace->add_option("--threshold", trace_threshold, "target energy fidelity");
    trace->add_option("--out", trace_out, "trace CSV ('-' for stdout)");

    std::string sweep_config, sweep_out;
    int sweep_threads = 1;
    bool sweep_allow_large = false;
    auto* sweep = app.add_subcommand("sweep", "full experiment grid from a config file");
    sweep->add_option("--config", sweep_config, "experiment config file")->required();
    sweep->add_option("--out", sweep_out, "override the config's output dir");
    sweep->add_option("--threads", sweep_threads, "instance-level worker count");
    sweep->add_flag("--allow-large", sweep_allow_large, "lift the 20-qubit instance gate");

    std::string analyze_out;
    auto* analyze = app.add_subcommand("analyze", "refit curves from existing CSVs");
    analyze->add_option("--out", analyze_out, "dir holding minm.csv and neff.csv")->required();

    std::string replay_dump, replay_out = "-", replay_strategy = "ordered";
    double replay_threshold = 0.99;
    std::uint64_t replay_seed = 0;
    auto* replay = app.add_subcommand("replay", "re-run a trace from a ground-state dump");
    replay->add_option("--dump", replay_dump, "ground-state dump file")->required();
    replay->add_option("--strategy", replay_strategy, "ordered or sampled")
        ->check(CLI::IsMember({"ordered", "sampled"}));
    replay->add_option("--seed", replay_seed, "sampling seed");
    replay->add_option("--threshold", replay_threshold, "target energy fidelity");
    replay->add_option("--out", replay_out, "trace CSV ('-' for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) {
            sqd::ExperimentConfig cfg = to_config(solve_opts);
            sqd::GroundState gs = sqd::solve_instance(cfg, cfg.lattices[0]);
            std::ofstream file;
            gs.dump(open_out(file, solve_out));
            std::fprintf(stderr, "E0 = %.17g  support = %zu  N_eff = %.17g\n", gs.energy(),
                         gs.support().size(), gs.effective_support());
        } else if (trace->parsed()) {
            sqd::ExperimentConfig cfg = to_config(trace_opts);
            sqd::GroundState gs = sqd::solve_instance(cfg, cfg.lattices[0]);
            sqd::SparseHamiltonian H = sqd::hamiltonian_from_metadata(gs.metadata());
            sqd::StopRule stop;
            stop.target_fidelity = trace_threshold;
            sqd::SubspaceTrace tr = sqd::run_trace(
                gs, H, make_strategy(trace_strategy, trace_opts.seed), stop, cfg.schedule,
                cfg.solver);
            std::ofstream file;
            sqd::write_trace_csv(open_out(file, trace_out), sqd::model_name(cfg.model),
                                 cfg.lattices[0].label(), H.n_qubits(),
                                 make_strategy(trace_strategy, trace_opts.seed),
                                 trace_threshold, tr);
        } else if (sweep->parsed()) {
            sqd::ExperimentConfig cfg = sqd::parse_config_file(sweep_config);
            if (!sweep_out.empty()) cfg.output_dir = sweep_out;
            if (sweep_allow_large) cfg.allow_large = true;
            cfg.validate();
            sqd::RunResult res = sqd::run_experiment(cfg, sweep_threads);
            for (const auto& inst : res.instances)
                std::fprintf(stderr, "%-10s %-20s %s%s%s\n", inst.model.c_str(),
                             inst.lattice.c_str(), inst.ok ? "ok" : "failed",
                             inst.ok ? "" : ": ", inst.ok ? "" : inst.error.c_str());
            std::printf("%s/manifest.json\n", res.output_dir.c_str());
            return res.all_ok ? 0 : 1;
        } else if (analyze->parsed()) {
            for (const auto& f : sqd::analyze_outputs(analyze_out))
                std::printf("%s  %s\n", f.hash.c_str(), f.path.c_str());
        } else if (replay->parsed()) {
            sqd::SubspaceTrace tr = sqd::replay_trace(
                replay_dump, make_strategy(replay_strategy, replay_seed), replay_threshold);
            std::ifstream dump(replay_dump);
            sqd::GroundState gs = sqd::GroundState::load(dump);
            std::ofstream file;
            sqd::write_trace_csv(open_out(file, replay_out),
                                 gs.metadata().count("model") ? gs.metadata().at("model") : "?",
                                 gs.metadata().count("lattice") ? gs.metadata().at("lattice")
                                                                : "?",
                                 gs.n_qubits(), make_strategy(replay_strategy, replay_seed),
                                 replay_threshold, tr);
        }
    } catch (const sqd::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
