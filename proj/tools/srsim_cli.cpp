// Command-line front end: parses a flat key=value config plus flag
// overrides, dispatches the optimizer / analysis / Monte Carlo sweeps, and
// writes CSV results with a JSON manifest sidecar.
#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "srsim/analysis.hpp"
#include "srsim/channel.hpp"
#include "srsim/composite.hpp"
#include "srsim/optimizer.hpp"
#include "srsim/simulator.hpp"

using json = nlohmann::json;
using namespace srsim;

namespace {

constexpr const char* kVersion = "srsim 1.0.0";
constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitRuntime = 4;

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Flat key=value config file: one assignment per line, '#' starts a comment.

std::map<std::string, std::string> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(path + ":" + std::to_string(lineno) +
                               ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw config_error(path + ":" + std::to_string(lineno) + ": empty key");
        kv[key] = val;
    }
    return kv;
}

double to_double(const std::string& key, const std::string& val) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(val, &pos);
        if (pos != val.size()) throw std::invalid_argument(val);
        return d;
    } catch (const std::exception&) {
        throw config_error("config key '" + key + "': not a number: " + val);
    }
}

std::uint64_t to_u64(const std::string& key, const std::string& val) {
    try {
        std::size_t pos = 0;
        const unsigned long long u = std::stoull(val, &pos);
        if (pos != val.size()) throw std::invalid_argument(val);
        return u;
    } catch (const std::exception&) {
        throw config_error("config key '" + key + "': not a non-negative integer: " + val);
    }
}

bool to_bool(const std::string& key, const std::string& val) {
    if (val == "1" || val == "true" || val == "yes") return true;
    if (val == "0" || val == "false" || val == "no") return false;
    throw config_error("config key '" + key + "': not a boolean: " + val);
}

std::vector<double> to_grid(const std::string& key, const std::string& val) {
    std::vector<double> grid;
    std::stringstream ss(val);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) grid.push_back(to_double(key, item));
    if (grid.empty()) throw config_error("config key '" + key + "': empty grid");
    return grid;
}

// ---------------------------------------------------------------------------
// Resolved run settings: simulator config plus sweep grids and output paths.

struct RunSettings {
    SimConfig sim;
    double d1 = 80.0, d2 = 75.0, d3 = 10.0;
    double xi1 = 3.5, xi2 = 2.2, xi3 = 2.8;
    bool direct_blocked = false;
    std::optional<double> ris_x;  // overrides the circle-intersection placement
    std::map<std::string, std::vector<double>> grids;
    std::map<std::string, std::string> snapshot;  // resolved key -> value
};

void record(RunSettings& rs, const std::string& key, const std::string& val) {
    rs.snapshot[key] = val;
}

void apply_key(RunSettings& rs, const std::string& key, const std::string& val) {
    SimConfig& sim = rs.sim;
    if (key == "trials") sim.trials = to_u64(key, val);
    else if (key == "seed") sim.seed = to_u64(key, val);
    else if (key == "scheme") sim.scheme = scheme_from_name(val);
    else if (key == "eta") sim.eta = to_double(key, val);
    else if (key == "workers") sim.workers = static_cast<unsigned>(to_u64(key, val));
    else if (key == "s_const") sim.s_name = val;
    else if (key == "c_const") sim.c_name = val;
    else if (key == "n_elements") sim.n_elements = to_u64(key, val);
    else if (key == "n1") sim.fixed_n1 = to_u64(key, val);
    else if (key == "p_t_dbm") sim.p_t_dbm = to_double(key, val);
    else if (key == "sigma2_dbm") sim.sigma2_dbm = to_double(key, val);
    else if (key == "symbols_per_realization")
        sim.symbols_per_realization = to_u64(key, val);
    else if (key == "model") {
        if (val == "los") sim.model = ChannelModel::Los;
        else if (val == "rician") sim.model = ChannelModel::Rician;
        else throw config_error("config key 'model': expected los or rician, got " + val);
    } else if (key == "csi") {
        if (val == "perfect") sim.csi = CsiMode::Perfect;
        else if (val == "ls") sim.csi = CsiMode::LeastSquares;
        else throw config_error("config key 'csi': expected perfect or ls, got " + val);
    } else if (key == "training_reps") sim.training_reps = to_u64(key, val);
    else if (key == "kappa_g") sim.fading.kappa_incident = to_double(key, val);
    else if (key == "kappa_h") sim.fading.kappa_reflect = to_double(key, val);
    else if (key == "kappa_hd") sim.fading.kappa_direct = to_double(key, val);
    else if (key == "d1") rs.d1 = to_double(key, val);
    else if (key == "d2") rs.d2 = to_double(key, val);
    else if (key == "d3") rs.d3 = to_double(key, val);
    else if (key == "xi1") rs.xi1 = to_double(key, val);
    else if (key == "xi2") rs.xi2 = to_double(key, val);
    else if (key == "xi3") rs.xi3 = to_double(key, val);
    else if (key == "direct_blocked") rs.direct_blocked = to_bool(key, val);
    else if (key == "ris_x") rs.ris_x = to_double(key, val);
    else if (key == "power_grid" || key == "partition_grid" ||
             key == "elements_grid" || key == "location_grid" ||
             key == "training_grid")
        rs.grids[key] = to_grid(key, val);
    else throw config_error("unknown config key: " + key);
    record(rs, key, val);
}

void finalize_geometry(RunSettings& rs) {
    rs.sim.geometry =
        Geometry::from_distances(rs.d1, rs.d2, rs.d3, rs.xi1, rs.xi2, rs.xi3);
    if (rs.ris_x) rs.sim.geometry.ris = {*rs.ris_x, 15.0};
    rs.sim.geometry.direct_blocked = rs.direct_blocked;
}

// Flag overrides shared by every subcommand.
struct FlagOverrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::optional<std::string> out_dir;
    std::optional<std::string> scheme;
    std::optional<double> eta;
    std::optional<unsigned> workers;
};

void add_common_flags(CLI::App* cmd, FlagOverrides& fo) {
    cmd->add_option("--config", fo.config_path, "flat key=value config file");
    cmd->add_option("--seed", fo.seed, "master RNG seed");
    cmd->add_option("--trials", fo.trials, "Monte Carlo trials per point");
    cmd->add_option("--out", fo.out_dir, "output directory (default $SRSIM_OUT_DIR or .)");
    cmd->add_option("--scheme", fo.scheme,
                    "proposed | benchmark1-no-RIS | benchmark2-pure-assist | "
                    "benchmark3-pure-transmit | priority");
    cmd->add_option("--eta", fo.eta, "primary-priority distance fraction in [0,1]");
    cmd->add_option("--workers", fo.workers, "worker thread cap (default 1)");
}

RunSettings resolve(const FlagOverrides& fo) {
    RunSettings rs;
    try {
        if (!fo.config_path.empty())
            for (const auto& [k, v] : parse_config_file(fo.config_path))
                apply_key(rs, k, v);
        if (fo.seed) apply_key(rs, "seed", std::to_string(*fo.seed));
        if (fo.trials) apply_key(rs, "trials", std::to_string(*fo.trials));
        if (fo.scheme) apply_key(rs, "scheme", *fo.scheme);
        if (fo.eta) {
            std::ostringstream os;
            os << *fo.eta;
            apply_key(rs, "eta", os.str());
        }
        if (fo.workers) apply_key(rs, "workers", std::to_string(*fo.workers));
        finalize_geometry(rs);
        rs.sim.validate();
    } catch (const config_error&) {
        throw;
    } catch (const std::exception& e) {
        throw config_error(e.what());
    }
    return rs;
}

std::filesystem::path output_dir(const FlagOverrides& fo) {
    if (fo.out_dir) return *fo.out_dir;
    if (const char* env = std::getenv("SRSIM_OUT_DIR")) return env;
    return ".";
}

// ---------------------------------------------------------------------------
// Output writers.

json config_json(const RunSettings& rs) {
    const SimConfig& sim = rs.sim;
    json j;
    j["trials"] = sim.trials;
    j["seed"] = sim.seed;
    j["scheme"] = scheme_name(sim.scheme);
    j["eta"] = sim.eta;
    j["csi"] = sim.csi == CsiMode::Perfect ? "perfect" : "ls";
    j["training_reps"] = sim.training_reps;
    j["s_const"] = sim.s_name;
    j["c_const"] = sim.c_name;
    j["n_elements"] = sim.n_elements;
    j["model"] = sim.model == ChannelModel::Los ? "los" : "rician";
    j["kappa_g"] = sim.fading.kappa_incident;
    j["kappa_h"] = sim.fading.kappa_reflect;
    j["kappa_hd"] = sim.fading.kappa_direct;
    j["p_t_dbm"] = sim.p_t_dbm;
    j["sigma2_dbm"] = sim.sigma2_dbm;
    j["workers"] = sim.workers;
    j["symbols_per_realization"] = sim.symbols_per_realization;
    j["geometry"] = {{"ptx", {sim.geometry.ptx.x, sim.geometry.ptx.y}},
                     {"ris", {sim.geometry.ris.x, sim.geometry.ris.y}},
                     {"crx", {sim.geometry.crx.x, sim.geometry.crx.y}},
                     {"xi_direct", sim.geometry.xi_direct},
                     {"xi_incident", sim.geometry.xi_incident},
                     {"xi_reflect", sim.geometry.xi_reflect},
                     {"direct_blocked", sim.geometry.direct_blocked}};
    if (sim.fixed_n1) j["n1"] = *sim.fixed_n1;
    j["raw"] = rs.snapshot;
    return j;
}

void write_manifest(const std::filesystem::path& csv_path, const std::string& command,
                    const RunSettings& rs, double wall_seconds) {
    json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["output"] = csv_path.string();
    j["seed"] = rs.sim.seed;
    j["config"] = config_json(rs);
    j["wall_seconds"] = wall_seconds;
    std::filesystem::path mpath = csv_path;
    mpath += ".manifest.json";
    std::ofstream out(mpath);
    if (!out) throw std::runtime_error("cannot write manifest: " + mpath.string());
    out << j.dump(2) << "\n";
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

const char* kSweepHeader =
    "coordinate,n1,n2,px,ps,pc,ser,"
    "px_lo,px_hi,ps_lo,ps_hi,pc_lo,pc_hi,"
    "analytical_px,analytical_ps,analytical_pc\n";

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << kSweepHeader;
    for (const auto& r : rows) {
        const auto& e = r.estimate;
        const auto px_ci = e.px_ci();
        const auto ps_ci = e.ps_ci();
        const auto pc_ci = e.pc_ci();
        out << fmt(r.coordinate) << ',' << r.plan.n1 << ',' << r.plan.n2 << ','
            << fmt(e.px()) << ',' << fmt(e.ps()) << ',' << fmt(e.pc()) << ','
            << fmt(e.ser()) << ',' << fmt(px_ci.low) << ',' << fmt(px_ci.high) << ','
            << fmt(ps_ci.low) << ',' << fmt(ps_ci.high) << ','
            << fmt(e.c_by_convention ? 0.5 : pc_ci.low) << ','
            << fmt(e.c_by_convention ? 0.5 : pc_ci.high) << ','
            << fmt(r.analytical.px) << ',' << fmt(r.analytical.ps) << ','
            << fmt(r.analytical.pc) << '\n';
    }
}

std::vector<double> grid_or(const RunSettings& rs, const std::string& key,
                            std::vector<double> fallback) {
    const auto it = rs.grids.find(key);
    return it == rs.grids.end() ? fallback : it->second;
}

int run_sweep_command(const std::string& command, const FlagOverrides& fo,
                      SweepAxis axis, const std::string& grid_key,
                      std::function<std::vector<double>(const RunSettings&)> fallback) {
    RunSettings rs = resolve(fo);
    const auto grid = grid_or(rs, grid_key, fallback(rs));
    const auto dir = output_dir(fo);
    std::filesystem::create_directories(dir);
    const auto csv_path = dir / (command + ".csv");
    const auto start = std::chrono::steady_clock::now();
    const auto rows = run_sweep(rs.sim, axis, grid);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot write output: " + csv_path.string());
    write_sweep_csv(out, rows);
    write_manifest(csv_path, command, rs, wall);
    std::cout << "wrote " << csv_path.string() << " (" << rows.size() << " points)\n";
    return 0;
}

// ---------------------------------------------------------------------------
// Subcommand bodies.

int cmd_optimize(const FlagOverrides& fo) {
    const RunSettings rs = resolve(fo);
    const SimConfig& sim = rs.sim;
    const auto ch = los_realization(sim.geometry, sim.n_elements);
    const auto cascades = cascade(ch, 0).second;
    const auto s_const = make_by_name(sim.s_name);
    const auto c_const = make_by_name(sim.c_name);
    const double t =
        channel_strength_ratio(sim.geometry.rho_direct(), sim.geometry.rho_incident(),
                               sim.geometry.rho_reflect(), sim.n_elements);
    PartitionSolution sol;
    std::string method;
    if (sim.scheme == Scheme::Priority) {
        sol = partition_with_priority(ch.h_d, cascades, s_const, c_const, sim.eta);
        method = "priority-scan";
    } else if (sim.s_name == "qpsk" && sim.c_name == "bpsk") {
        sol = partition_closed_form(t, sim.n_elements);
        method = "closed-form";
    } else {
        sol = partition_oracle(ch.h_d, cascades, s_const, c_const, true);
        method = "scan";
    }
    json j;
    j["n1"] = sol.n1;
    j["n2"] = sol.n2;
    j["common_phase"] = sol.common_phase;
    j["d_min"] = sol.d_min;
    j["case"] = sol.case_tag;
    j["feasible"] = sol.feasible;
    j["priority_met"] = sol.priority_met;
    j["method"] = method;
    j["t"] = t;
    std::cout << j.dump(2) << "\n";
    if (fo.out_dir || std::getenv("SRSIM_OUT_DIR")) {
        const auto dir = output_dir(fo);
        std::filesystem::create_directories(dir);
        const auto path = dir / "optimize.json";
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write output: " + path.string());
        out << j.dump(2) << "\n";
        write_manifest(path, "optimize", rs, 0.0);
    }
    return 0;
}

int cmd_analyze(const FlagOverrides& fo) {
    RunSettings rs = resolve(fo);
    const auto grid = grid_or(rs, "power_grid", [] {
        std::vector<double> g;
        for (double p = -30.0; p <= 30.000001; p += 2.0) g.push_back(p);
        return g;
    }());
    const auto dir = output_dir(fo);
    std::filesystem::create_directories(dir);
    const auto csv_path = dir / "analyze.csv";
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("cannot write output: " + csv_path.string());
    out << "p_t_dbm,px,ps,pc,clipped\n";
    for (const double p : grid) {
        SimConfig pt = rs.sim;
        pt.p_t_dbm = p;
        const auto rep = analytical_point(pt);
        out << fmt(p) << ',' << fmt(rep.px) << ',' << fmt(rep.ps) << ','
            << fmt(rep.pc) << ',' << (rep.clipped ? 1 : 0) << '\n';
    }
    write_manifest(csv_path, "analyze", rs, 0.0);
    std::cout << "wrote " << csv_path.string() << " (" << grid.size() << " points)\n";
    return 0;
}

int cmd_constellation_dump(const FlagOverrides& fo, const std::string& name) {
    const auto c = make_by_name(name);
    std::cout << "index,label,re,im\n";
    for (unsigned k = 0; k < c.order; ++k)
        std::cout << k << ',' << c.labels[k] << ',' << fmt(c.points[k].real()) << ','
                  << fmt(c.points[k].imag()) << '\n';
    (void)fo;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS-partitioned symbiotic radio link simulator"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    FlagOverrides fo;
    std::string dump_name = "qpsk";

    auto* optimize = app.add_subcommand(
        "optimize", "solve the surface partition and print the solution as JSON");
    auto* analyze = app.add_subcommand(
        "analyze", "analytical BER curves over a transmit power grid (CSV)");
    auto* sw_part = app.add_subcommand(
        "sweep-partition", "Monte Carlo BER across assist-element counts");
    auto* sw_power = app.add_subcommand(
        "sweep-power", "Monte Carlo BER across transmit power (dBm)");
    auto* sw_elem = app.add_subcommand(
        "sweep-elements", "Monte Carlo BER across surface sizes");
    auto* sw_loc = app.add_subcommand(
        "sweep-location", "Monte Carlo BER across RIS x positions");
    auto* sw_train = app.add_subcommand(
        "sweep-training", "Monte Carlo BER across LS training repetitions");
    auto* dump = app.add_subcommand(
        "constellation-dump", "print a constellation's points and labels as CSV");
    dump->add_option("--name", dump_name, "constellation name")->capture_default_str();

    for (CLI::App* cmd :
         {optimize, analyze, sw_part, sw_power, sw_elem, sw_loc, sw_train, dump})
        add_common_flags(cmd, fo);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (optimize->parsed()) return cmd_optimize(fo);
        if (analyze->parsed()) return cmd_analyze(fo);
        if (dump->parsed()) return cmd_constellation_dump(fo, dump_name);
        if (sw_part->parsed())
            return run_sweep_command("sweep-partition", fo, SweepAxis::Partition,
                                     "partition_grid", [](const RunSettings& rs) {
                                         std::vector<double> g;
                                         const auto n = rs.sim.n_elements;
                                         const std::size_t step =
                                             std::max<std::size_t>(1, n / 20);
                                         for (std::size_t k = 0; k <= n; k += step)
                                             g.push_back(static_cast<double>(k));
                                         return g;
                                     });
        if (sw_power->parsed())
            return run_sweep_command("sweep-power", fo, SweepAxis::PowerDbm,
                                     "power_grid", [](const RunSettings&) {
                                         std::vector<double> g;
                                         for (double p = -30.0; p <= 30.000001; p += 5.0)
                                             g.push_back(p);
                                         return g;
                                     });
        if (sw_elem->parsed())
            return run_sweep_command("sweep-elements", fo, SweepAxis::Elements,
                                     "elements_grid", [](const RunSettings&) {
                                         return std::vector<double>{
                                             50, 100, 150, 200, 300, 400};
                                     });
        if (sw_loc->parsed())
            return run_sweep_command("sweep-location", fo, SweepAxis::LocationX,
                                     "location_grid", [](const RunSettings&) {
                                         std::vector<double> g;
                                         for (double x = 5.0; x <= 95.000001; x += 10.0)
                                             g.push_back(x);
                                         return g;
                                     });
        if (sw_train->parsed())
            return run_sweep_command("sweep-training", fo, SweepAxis::TrainingReps,
                                     "training_grid", [](const RunSettings&) {
                                         return std::vector<double>{1, 2, 4, 8};
                                     });
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
