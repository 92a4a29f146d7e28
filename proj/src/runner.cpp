#include "sqd/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include <json.hpp>

namespace fs = std::filesystem;

namespace sqd {

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmtg(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

std::string sanitize(std::string s) {
    for (char& c : s)
        if (c == ':' || c == ',' || c == '/') c = '-';
    return s;
}

int lattice_dim(const std::string& label) { return label.rfind("chain", 0) == 0 ? 1 : 2; }

/// Writes content atomically (temp file + rename) and returns its manifest
/// entry with the path relative to root.
ManifestEntry atomic_write(const fs::path& root, const std::string& rel,
                           const std::string& content) {
    const fs::path target = root / rel;
    fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw RunnerError("cannot write " + tmp.string());
        f << content;
    }
    fs::rename(tmp, target);
    return {rel, content.size(), hash_hex(fnv1a64(content))};
}

std::string sector_label(const Sector& s) {
    if (s.kind == Sector::Kind::TotalPopcount) return "popcount:" + std::to_string(s.a);
    return "block:" + std::to_string(s.a) + "," + std::to_string(s.b);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

struct MinMRecord {
    std::string model, lattice;
    int n_qubits = 0;
    std::string strategy;
    std::uint64_t seed = 0;
    double threshold = 0.0;
    std::uint64_t m = 0, k_schedule = 0, k_exact = 0;
    double fidelity = 0.0;
};

struct NeffRecord {
    std::string model, lattice;
    int n_qubits = 0;
    double energy = 0.0, entropy = 0.0, neff = 0.0;
};

std::string minm_csv(const std::vector<MinMRecord>& rows) {
    std::string out = "model,lattice,n_qubits,strategy,seed,threshold,m,k_schedule,k_exact,fidelity\n";
    for (const auto& r : rows) {
        out += r.model + "," + r.lattice + "," + std::to_string(r.n_qubits) + "," + r.strategy +
               "," + std::to_string(r.seed) + "," + fmtg(r.threshold) + "," + std::to_string(r.m) +
               "," + std::to_string(r.k_schedule) + "," + std::to_string(r.k_exact) + "," +
               fmt17(r.fidelity) + "\n";
    }
    return out;
}

std::string neff_csv(const std::vector<NeffRecord>& rows) {
    std::string out = "model,lattice,n_qubits,energy,entropy,neff\n";
    for (const auto& r : rows)
        out += r.model + "," + r.lattice + "," + std::to_string(r.n_qubits) + "," +
               fmt17(r.energy) + "," + fmt17(r.entropy) + "," + fmt17(r.neff) + "\n";
    return out;
}

/// scaling.csv, kneff.csv and the SVG plots from parsed records.
std::vector<ManifestEntry> write_analysis(const fs::path& root,
                                          const std::vector<MinMRecord>& minm,
                                          const std::vector<NeffRecord>& neff) {
    std::vector<ManifestEntry> files;

    // scaling.csv: one fit per (model, dim, threshold, strategy) with >= 3 sizes.
    // Ordered series fit the exact minimal k, sampled series the iteration count m.
    std::string scaling = "model,dim,threshold,strategy,alpha,log_prefactor,r2\n";
    std::map<std::tuple<std::string, int, double, std::string>,
             std::vector<std::pair<int, double>>> groups;
    for (const auto& r : minm) {
        const double y = r.strategy == "ordered" ? static_cast<double>(r.k_exact)
                                                 : static_cast<double>(r.m);
        groups[{r.model, lattice_dim(r.lattice), r.threshold, r.strategy}].emplace_back(
            r.n_qubits, y);
    }
    for (auto& [key, pts] : groups) {
        std::sort(pts.begin(), pts.end());
        std::map<int, double> uniq(pts.begin(), pts.end());
        if (uniq.size() < 3) continue;
        std::vector<std::pair<int, double>> series(uniq.begin(), uniq.end());
        const ScalingFit fit = fit_exponential(series);
        scaling += std::get<0>(key) + "," + std::to_string(std::get<1>(key)) + "," +
                   fmtg(std::get<2>(key)) + "," + std::get<3>(key) + "," + fmt17(fit.alpha) +
                   "," + fmt17(fit.log_prefactor) + "," + fmt17(fit.r_squared) + "\n";
    }
    files.push_back(atomic_write(root, "scaling.csv", scaling));

    // kneff.csv: ordered minimal k at the strictest threshold vs N_eff.
    double max_thr = 0.0;
    for (const auto& r : minm)
        if (r.strategy == "ordered") max_thr = std::max(max_thr, r.threshold);
    std::string kneff = "model,L,k,neff,ratio\n";
    std::vector<std::pair<double, double>> k_pts, neff_pts;
    for (const auto& r : minm) {
        if (r.strategy != "ordered" || r.threshold != max_thr) continue;
        for (const auto& n : neff) {
            if (n.lattice != r.lattice || n.model != r.model) continue;
            const double ratio = n.neff > 0 ? r.k_exact / n.neff : 0.0;
            kneff += r.model + "," + std::to_string(r.n_qubits) + "," +
                     std::to_string(r.k_exact) + "," + fmt17(n.neff) + "," + fmt17(ratio) + "\n";
            k_pts.emplace_back(r.n_qubits, static_cast<double>(r.k_exact));
            neff_pts.emplace_back(n.n_qubits, n.neff);
        }
    }
    files.push_back(atomic_write(root, "kneff.csv", kneff));

    if (!k_pts.empty()) {
        std::sort(k_pts.begin(), k_pts.end());
        std::sort(neff_pts.begin(), neff_pts.end());
        std::vector<PlotSeries> series;
        series.push_back({"k (ordered, F_E >= " + fmtg(max_thr) + ")", k_pts});
        series.push_back({"N_eff", neff_pts});
        std::ostringstream svg;
        write_svg_plot(svg, "Minimal subspace size vs system size", series, /*log_y=*/true);
        files.push_back(atomic_write(root, "plots/kneff.svg", svg.str()));
    }

    // scaling plot: one series per (threshold, strategy), k or m vs qubits.
    std::vector<PlotSeries> scaling_series;
    for (auto& [key, pts] : groups) {
        std::sort(pts.begin(), pts.end());
        std::vector<std::pair<double, double>> p;
        for (auto [L, y] : pts) p.emplace_back(L, y);
        scaling_series.push_back({std::get<3>(key) + " @" + fmtg(std::get<2>(key)) + " (" +
                                      std::to_string(std::get<1>(key)) + "D)",
                                  std::move(p)});
    }
    if (!scaling_series.empty()) {
        std::ostringstream svg;
        write_svg_plot(svg, "Subspace growth", scaling_series, /*log_y=*/true);
        files.push_back(atomic_write(root, "plots/scaling.svg", svg.str()));
    }
    return files;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

SparseHamiltonian instance_hamiltonian(const ExperimentConfig& cfg, const Lattice& lat) {
    if (cfg.model == Model::Heisenberg) return SparseHamiltonian::heisenberg(lat, cfg.J);

    const int n = lat.sites();
    int n_up = 0, n_down = 0;
    switch (cfg.filling) {
        case Filling::Explicit:
            n_up = cfg.n_up;
            n_down = cfg.n_down;
            break;
        case Filling::Half:
            n_up = (n + 1) / 2;
            n_down = n / 2;
            break;
        case Filling::Auto: {
            // Scan every particle-number block for the global ground energy.
            SparseHamiltonian scan = SparseHamiltonian::hubbard(lat, cfg.t, cfg.U, 0, 0);
            double best = std::numeric_limits<double>::infinity();
            std::vector<std::tuple<double, int, int>> energies;
            for (int nu = 0; nu <= n; ++nu)
                for (int nd = 0; nd <= n; ++nd) {
                    auto basis = hubbard_sector(n, nu, nd);
                    const double e = projected_eigmin(scan.project(basis), SolverOpts{});
                    energies.emplace_back(e, nu, nd);
                    best = std::min(best, e);
                }
            // Degenerate blocks tie-break toward balance, then smaller n_up.
            int best_balance = std::numeric_limits<int>::max();
            for (const auto& [e, nu, nd] : energies) {
                if (e > best + 1e-8) continue;
                const int balance = std::abs(nu - nd);
                if (balance < best_balance || (balance == best_balance && nu < n_up)) {
                    best_balance = balance;
                    n_up = nu;
                    n_down = nd;
                }
            }
            break;
        }
    }
    return SparseHamiltonian::hubbard(lat, cfg.t, cfg.U, n_up, n_down);
}

Sector instance_sector(const SparseHamiltonian& H) {
    if (H.model() == Model::Heisenberg)
        return {Sector::Kind::TotalPopcount, H.n_qubits() / 2, 0};
    return {Sector::Kind::BlockPopcounts, H.n_up(), H.n_down()};
}

GroundState solve_instance(const ExperimentConfig& cfg, const Lattice& lat) {
    SparseHamiltonian H = instance_hamiltonian(cfg, lat);
    const Sector sector = instance_sector(H);
    EigenResult res = sector_ground(H, sector, cfg.solver);

    std::map<std::string, std::string> md;
    md["model"] = model_name(cfg.model);
    md["lattice"] = lat.label();
    md["sector"] = sector_label(sector);
    md["seed"] = std::to_string(cfg.solver.seed);
    md["tol"] = fmt17(cfg.solver.tol);
    if (cfg.model == Model::Heisenberg) {
        md["J"] = fmt17(cfg.J);
    } else {
        md["t"] = fmt17(cfg.t);
        md["U"] = fmt17(cfg.U);
    }
    return GroundState::from_vector(res.value, res.vector, H.n_qubits(), std::move(md));
}

SparseHamiltonian hamiltonian_from_metadata(const std::map<std::string, std::string>& md) {
    auto need = [&](const std::string& key) -> const std::string& {
        auto it = md.find(key);
        if (it == md.end()) throw RunnerError("dump metadata missing '" + key + "'");
        return it->second;
    };
    const Lattice lat = parse_lattice(need("lattice"));
    const std::string& model = need("model");
    if (model == "heisenberg") return SparseHamiltonian::heisenberg(lat, std::stod(need("J")));
    if (model == "hubbard") {
        int nu = 0, nd = 0;
        if (std::sscanf(need("sector").c_str(), "block:%d,%d", &nu, &nd) != 2)
            throw RunnerError("bad hubbard sector in dump metadata: " + need("sector"));
        return SparseHamiltonian::hubbard(lat, std::stod(need("t")), std::stod(need("U")), nu, nd);
    }
    throw RunnerError("unknown model in dump metadata: " + model);
}

void write_trace_csv(std::ostream& os, const std::string& model, const std::string& lattice,
                     int n_qubits, const InclusionStrategy& strategy, double threshold,
                     const SubspaceTrace& trace) {
    os << "model,lattice,n_qubits,strategy,seed,threshold,m,k,E0k,E0,F_E,cumulative_mass\n";
    const std::string strat =
        strategy.kind == InclusionStrategy::Kind::Ordered ? "ordered" : "sampled";
    for (const auto& s : trace.steps) {
        os << model << "," << lattice << "," << n_qubits << "," << strat << "," << strategy.seed
           << "," << fmtg(threshold) << "," << s.m << "," << s.k << "," << fmt17(s.e0k) << ","
           << fmt17(trace.e0) << "," << fmt17(s.fidelity) << "," << fmt17(s.mass) << "\n";
        if (s.fidelity >= threshold) break;
    }
}

SubspaceTrace replay_trace(const std::string& dump_path, const InclusionStrategy& strategy,
                           double threshold, const ScheduleConfig& schedule,
                           const SolverOpts& solver, std::uint64_t max_m) {
    std::ifstream f(dump_path);
    if (!f) throw RunnerError("cannot open ground-state dump: " + dump_path);
    GroundState gs = GroundState::load(f);
    SparseHamiltonian H = hamiltonian_from_metadata(gs.metadata());
    StopRule stop;
    stop.target_fidelity = threshold;
    stop.max_m = max_m;
    return run_trace(gs, H, strategy, stop, schedule, solver);
}

RunResult run_experiment(const ExperimentConfig& cfg, int threads) {
    cfg.validate();
    const fs::path root = cfg.output_dir;
    fs::create_directories(root);

    struct InstanceOutputs {
        InstanceReport report;
        std::vector<ManifestEntry> files;
        std::vector<MinMRecord> minm;
        std::vector<NeffRecord> neff;
    };
    std::vector<InstanceOutputs> slots(cfg.lattices.size());

    auto run_instance = [&](std::size_t idx) {
        const Lattice& lat = cfg.lattices[idx];
        InstanceOutputs& out = slots[idx];
        out.report.model = model_name(cfg.model);
        out.report.lattice = lat.label();
        try {
            const std::string base =
                model_name(cfg.model) + "_" + sanitize(lat.label());
            const std::string gs_rel = "groundstates/" + base + "_tol" +
                                       fmtg(cfg.solver.tol) + ".gs";

            // The dump doubles as the cache: reuse it when it already exists.
            GroundState gs = [&] {
                std::ifstream cached(root / gs_rel);
                if (cached) {
                    GroundState g = GroundState::load(cached);
                    std::string content;
                    {
                        std::ostringstream os;
                        g.dump(os);
                        content = os.str();
                    }
                    out.files.push_back({gs_rel, content.size(), hash_hex(fnv1a64(content))});
                    return g;
                }
                GroundState g = solve_instance(cfg, lat);
                std::ostringstream os;
                g.dump(os);
                out.files.push_back(atomic_write(root, gs_rel, os.str()));
                return g;
            }();

            SparseHamiltonian H = hamiltonian_from_metadata(gs.metadata());
            out.neff.push_back({model_name(cfg.model), lat.label(), H.n_qubits(), gs.energy(),
                                gs.shannon_entropy(), gs.effective_support()});

            const double max_thr =
                *std::max_element(cfg.thresholds.begin(), cfg.thresholds.end());
            SolverOpts sub_solver = cfg.solver;
            bool mass_plot_done = false;
            for (const auto& strategy : cfg.strategies) {
                StopRule stop;
                stop.target_fidelity = max_thr;
                stop.max_m = cfg.max_m;
                SubspaceTrace trace =
                    run_trace(gs, H, strategy, stop, cfg.schedule, sub_solver);
                if (!trace.reached_target)
                    throw SqdError("trace for " + strategy.label() +
                                   " stopped below the top threshold");

                for (double thr : cfg.thresholds) {
                    std::ostringstream csv;
                    write_trace_csv(csv, model_name(cfg.model), lat.label(), H.n_qubits(),
                                    strategy, thr, trace);
                    const std::string rel = "traces/" + base + "_" +
                                            sanitize(strategy.label()) + "_t" + fmtg(thr) +
                                            ".csv";
                    out.files.push_back(atomic_write(root, rel, csv.str()));

                    MinM mm = min_m_from_trace(gs, H, trace, thr, sub_solver);
                    out.minm.push_back({model_name(cfg.model), lat.label(), H.n_qubits(),
                                        strategy.kind == InclusionStrategy::Kind::Ordered
                                            ? "ordered"
                                            : "sampled",
                                        strategy.seed, thr, mm.m_schedule, mm.k_schedule,
                                        mm.k_exact, mm.fidelity});
                }

                if (!mass_plot_done) {
                    auto curve = mass_fidelity_curve(trace);
                    std::vector<PlotSeries> series;
                    series.push_back({strategy.label(), curve});
                    std::ostringstream svg;
                    write_svg_plot(svg, "Fidelity vs cumulative mass: " + lat.label(), series,
                                   /*log_y=*/false);
                    out.files.push_back(
                        atomic_write(root, "plots/mass_fidelity_" + base + ".svg", svg.str()));
                    mass_plot_done = true;
                }
            }
            out.report.ok = true;
        } catch (const std::exception& e) {
            out.report.ok = false;
            out.report.error = e.what();
        }
    };

    if (threads <= 1) {
        for (std::size_t i = 0; i < cfg.lattices.size(); ++i) run_instance(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const std::size_t nworkers =
            std::min<std::size_t>(threads, cfg.lattices.size());
        for (std::size_t w = 0; w < nworkers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < cfg.lattices.size();
                     i = next.fetch_add(1))
                    run_instance(i);
            });
        for (auto& th : pool) th.join();
    }

    RunResult result;
    result.output_dir = root.string();
    std::vector<MinMRecord> minm;
    std::vector<NeffRecord> neff;
    for (auto& slot : slots) {
        result.instances.push_back(slot.report);
        result.files.insert(result.files.end(), slot.files.begin(), slot.files.end());
        minm.insert(minm.end(), slot.minm.begin(), slot.minm.end());
        neff.insert(neff.end(), slot.neff.begin(), slot.neff.end());
    }
    result.files.push_back(atomic_write(root, "minm.csv", minm_csv(minm)));
    result.files.push_back(atomic_write(root, "neff.csv", neff_csv(neff)));
    for (auto& f : write_analysis(root, minm, neff)) result.files.push_back(std::move(f));

    std::sort(result.files.begin(), result.files.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.path < b.path; });
    result.all_ok = std::all_of(result.instances.begin(), result.instances.end(),
                                [](const InstanceReport& r) { return r.ok; });

    nlohmann::json manifest;
    manifest["format"] = "sqd-manifest/1";
    manifest["model"] = model_name(cfg.model);
    manifest["all_ok"] = result.all_ok;
    manifest["files"] = nlohmann::json::array();
    for (const auto& f : result.files)
        manifest["files"].push_back({{"path", f.path}, {"bytes", f.bytes}, {"fnv1a64", f.hash}});
    manifest["instances"] = nlohmann::json::array();
    for (const auto& r : result.instances)
        manifest["instances"].push_back({{"model", r.model},
                                         {"lattice", r.lattice},
                                         {"status", r.ok ? "ok" : "failed"},
                                         {"error", r.error}});
    atomic_write(root, "manifest.json", manifest.dump(2) + "\n");
    return result;
}

std::vector<ManifestEntry> analyze_outputs(const std::string& out_dir) {
    const fs::path root = out_dir;
    auto read_lines = [](const fs::path& p) {
        std::ifstream f(p);
        if (!f) throw RunnerError("cannot open " + p.string());
        std::vector<std::string> lines;
        std::string line;
        while (std::getline(f, line))
            if (!line.empty()) lines.push_back(line);
        return lines;
    };

    std::vector<MinMRecord> minm;
    {
        auto lines = read_lines(root / "minm.csv");
        for (std::size_t i = 1; i < lines.size(); ++i) {
            auto f = split_csv(lines[i]);
            if (f.size() != 10) throw RunnerError("malformed minm.csv row: " + lines[i]);
            MinMRecord r;
            r.model = f[0];
            r.lattice = f[1];
            r.n_qubits = std::stoi(f[2]);
            r.strategy = f[3];
            r.seed = std::stoull(f[4]);
            r.threshold = std::stod(f[5]);
            r.m = std::stoull(f[6]);
            r.k_schedule = std::stoull(f[7]);
            r.k_exact = std::stoull(f[8]);
            r.fidelity = std::stod(f[9]);
            minm.push_back(std::move(r));
        }
    }
    std::vector<NeffRecord> neff;
    {
        auto lines = read_lines(root / "neff.csv");
        for (std::size_t i = 1; i < lines.size(); ++i) {
            auto f = split_csv(lines[i]);
            if (f.size() != 6) throw RunnerError("malformed neff.csv row: " + lines[i]);
            neff.push_back({f[0], f[1], std::stoi(f[2]), std::stod(f[3]), std::stod(f[4]),
                            std::stod(f[5])});
        }
    }
    return write_analysis(root, minm, neff);
}

}  // namespace sqd
