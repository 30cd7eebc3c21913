// Command-line front end: thresholds, tessellation export, POVM probability
// tables, Monge distance curves, Husimi surfaces and seeded single-shot
// experiments.
//
// Exit codes: 0 success, 1 flag errors, 2 invalid parameter values,
// 3 quadrature non-convergence, 4 file I/O failures.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "classicality/gcs.hpp"
#include "classicality/geometry.hpp"
#include "classicality/io.hpp"
#include "classicality/monge.hpp"
#include "classicality/povm.hpp"
#include "classicality/threshold.hpp"

namespace {

using namespace classicality;

constexpr int exit_ok = 0;
constexpr int exit_domain = 2;
constexpr int exit_quadrature = 3;
constexpr int exit_io = 4;

// Flat key=value experiment configuration, mirrored one-to-one by flags.
struct ExperimentConfig {
    int k = 4;
    int N = 3430;
    int n = 0;
    double epsilon = 0.22;
    std::string sigma = "lambda1";  // "lambda1", "tile:<index>" or "theta,phi"
    std::string mode = "truncated";
    double tol = 1e-8;
    long long seed = 42;
};

void load_config(const std::string& path, ExperimentConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "k") cfg.k = std::stoi(value);
        else if (key == "N") cfg.N = std::stoi(value);
        else if (key == "n") cfg.n = std::stoi(value);
        else if (key == "epsilon") cfg.epsilon = std::stod(value);
        else if (key == "sigma") cfg.sigma = value;
        else if (key == "mode") cfg.mode = value;
        else if (key == "tol") cfg.tol = std::stod(value);
        else if (key == "seed") cfg.seed = std::stoll(value);
        else throw std::runtime_error("unknown config key: " + key);
    }
}

SpherePoint resolve_sigma(const std::string& spec, const Tessellation& tess) {
    if (spec == "lambda1") return tess.tile(1).sampled_point;
    if (spec.rfind("tile:", 0) == 0)
        return tess.tile(std::stoi(spec.substr(5))).sampled_point;
    const auto comma = spec.find(',');
    if (comma == std::string::npos)
        throw std::runtime_error("sigma must be 'lambda1', 'tile:<i>' or 'theta,phi'");
    return SpherePoint(std::stod(spec.substr(0, comma)),
                       std::stod(spec.substr(comma + 1)));
}

std::string output_path(const std::string& name, const std::string& explicit_path) {
    if (!explicit_path.empty()) return explicit_path;
    if (const char* dir = std::getenv("CLASSICALITY_OUT_DIR"))
        return std::string(dir) + "/" + name;
    return name;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::ios_base::failure("cannot write " + path);
    return out;
}

int run_threshold(const std::string& algebra, double epsilon,
                  std::optional<double> delta, std::optional<int> delta_from_k,
                  bool strict, int n, double bargmann_k) {
    double d;
    if (delta) {
        d = *delta;
    } else if (delta_from_k) {
        const Tessellation tess(*delta_from_k);
        d = strict ? strict_delta(tess) : inscribed_delta(tess);
    } else {
        std::cerr << "threshold: provide --delta or --delta-from-tessellation\n";
        return exit_domain;
    }
    double nt;
    if (algebra == "su2") nt = nt_su2(epsilon, d, n);
    else if (algebra == "su11") nt = nt_su11(epsilon, d, bargmann_k);
    else if (algebra == "boson") nt = nt_boson(epsilon, d);
    else { std::cerr << "threshold: unknown algebra " << algebra << "\n"; return exit_domain; }

    std::cout << "algebra=" << algebra << " epsilon=" << format_angle(epsilon)
              << " delta=" << format_angle(d);
    if (algebra == "su2") std::cout << " n=" << n;
    if (algebra == "su11") std::cout << " bargmann_k=" << format_angle(bargmann_k);
    std::cout << " Nt_real=" << format_angle(nt)
              << " Nt_int=" << integer_threshold(nt) << "\n";
    return exit_ok;
}

int run_tessellate(int k, const std::string& out_path) {
    const Tessellation tess(k);
    auto out = open_output(output_path("tessellation_k" + std::to_string(k) + ".json",
                                       out_path));
    out << tessellation_to_json(tess).dump(2) << "\n";
    return exit_ok;
}

int run_povm(const ExperimentConfig& cfg, const std::string& out_path) {
    const Tessellation tess(cfg.k);
    const SpinEnsemble ens(cfg.N, cfg.n);
    const SpherePoint sigma = resolve_sigma(cfg.sigma, tess);
    const TableMode mode =
        cfg.mode == "exact" ? TableMode::exact : TableMode::truncated;
    const ProbabilityTable table =
        probability_table(ens, sigma, tess, mode, cfg.epsilon, cfg.tol);
    auto out = open_output(output_path("povm_table.csv", out_path));
    write_probability_table_csv(out, table, cfg.tol, cfg.seed);
    return exit_ok;
}

int run_monge(int j_max, double theta, double tol, const std::string& out_path) {
    auto out = open_output(output_path("monge_curve.csv", out_path));
    out << "# theta=" << format_angle(theta) << " tol=" << format_angle(tol) << "\n";
    out << "J,theta,d_monge,d_geodesic\n";
    for (int j = 1; j <= j_max; ++j) {
        const MongeEvaluation e = monge_su2(2 * j, theta, tol);
        out << j << "," << format_angle(theta) << "," << format_angle(e.value)
            << "," << format_angle(theta) << "\n";
    }
    return exit_ok;
}

int run_husimi_grid(int N, int n, double sigma_theta, double sigma_phi,
                    int n_theta, int n_phi, const std::string& out_path) {
    const SpinEnsemble ens(N, n);
    auto out = open_output(output_path("husimi_grid.csv", out_path));
    write_husimi_grid_csv(out, ens.two_j(), SpherePoint(sigma_theta, sigma_phi),
                          n_theta, n_phi);
    return exit_ok;
}

int run_experiment(const ExperimentConfig& cfg, int shots,
                   const std::string& out_path) {
    const Tessellation tess(cfg.k);
    const SpinEnsemble ens(cfg.N, cfg.n);
    const SpherePoint sigma = resolve_sigma(cfg.sigma, tess);
    const TableMode mode =
        cfg.mode == "exact" ? TableMode::exact : TableMode::truncated;
    const ProbabilityTable table =
        probability_table(ens, sigma, tess, mode, cfg.epsilon, cfg.tol);
    auto out = open_output(output_path("experiment_outcomes.csv", out_path));
    out << "# shots=" << shots << " seed=" << cfg.seed << "\n";
    write_probability_table_csv(out, table, cfg.tol, cfg.seed);
    out << "shot,outcome\n";
    for (int shot = 0; shot < shots; ++shot) {
        const int outcome =
            sample_outcome(table, static_cast<std::uint64_t>(cfg.seed) + shot);
        out << shot << ",";
        if (outcome == 0) out << "NULL";
        else out << outcome;
        out << "\n";
    }
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"classical-likeness toolkit for spin coherent states"};
    app.require_subcommand(1);

    // threshold
    auto* threshold_cmd = app.add_subcommand("threshold", "threshold size N_t");
    std::string algebra = "su2";
    double epsilon = 0.22;
    std::optional<double> delta;
    std::optional<int> delta_from_k;
    bool strict = false;
    int n_reduction = 0;
    double bargmann_k = 0.5;
    threshold_cmd->add_option("--algebra", algebra, "su2 | su11 | boson");
    threshold_cmd->add_option("--epsilon", epsilon, "neglect threshold in (0,1)");
    threshold_cmd->add_option("--delta", delta, "instrument resolution (radians)");
    threshold_cmd->add_option("--delta-from-tessellation", delta_from_k,
                              "derive delta from T(k)");
    threshold_cmd->add_flag("--strict", strict,
                            "use the strict delta definition");
    threshold_cmd->add_option("--n", n_reduction, "reduction integer (su2)");
    threshold_cmd->add_option("--bargmann-k", bargmann_k, "Bargmann index (su11)");

    // tessellate
    auto* tessellate_cmd = app.add_subcommand("tessellate", "emit T(k) as JSON");
    int tess_k = 4;
    std::string tess_out;
    tessellate_cmd->add_option("--k", tess_k, "tessellation order")->required();
    tessellate_cmd->add_option("--output", tess_out, "output file");

    // shared experiment configuration flags
    ExperimentConfig cfg;
    std::string config_path;
    auto add_config_flags = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "flat key=value config file");
        cmd->add_option("--k", cfg.k, "tessellation order");
        cmd->add_option("--N", cfg.N, "system size");
        cmd->add_option("--n", cfg.n, "reduction integer");
        cmd->add_option("--epsilon", cfg.epsilon, "neglect threshold");
        cmd->add_option("--sigma", cfg.sigma, "lambda1 | tile:<i> | theta,phi");
        cmd->add_option("--mode", cfg.mode, "exact | truncated");
        cmd->add_option("--tol", cfg.tol, "quadrature relative tolerance");
        cmd->add_option("--seed", cfg.seed, "sampling seed");
    };

    auto* povm_cmd = app.add_subcommand("povm", "probability-table CSV");
    std::string povm_out;
    add_config_flags(povm_cmd);
    povm_cmd->add_option("--output", povm_out, "output file");

    auto* experiment_cmd =
        app.add_subcommand("experiment", "seeded single-shot outcomes");
    int shots = 1;
    std::string experiment_out;
    add_config_flags(experiment_cmd);
    experiment_cmd->add_option("--shots", shots, "number of shots");
    experiment_cmd->add_option("--output", experiment_out, "output file");

    // monge
    auto* monge_cmd = app.add_subcommand("monge", "Monge distance curve CSV");
    int j_max = 20;
    double monge_theta = pi / 3.0;
    double monge_tol = 1e-10;
    std::string monge_out, monge_config;
    monge_cmd->add_option("--config", monge_config,
                          "key=value file with j_max, theta, tol");
    monge_cmd->add_option("--j-max", j_max, "largest integer J");
    monge_cmd->add_option("--theta", monge_theta, "separation angle (radians)");
    monge_cmd->add_option("--tol", monge_tol, "series tolerance");
    monge_cmd->add_option("--output", monge_out, "output file");

    // husimi-grid
    auto* husimi_cmd = app.add_subcommand("husimi-grid", "Husimi surface CSV");
    int hg_N = 300, hg_n = 0, hg_ntheta = 90, hg_nphi = 180;
    double hg_theta = 4.0 * pi / 9.0, hg_phi = 5.0 * pi / 18.0;
    std::string husimi_out;
    husimi_cmd->add_option("--N", hg_N, "system size");
    husimi_cmd->add_option("--n", hg_n, "reduction integer");
    husimi_cmd->add_option("--sigma-theta", hg_theta, "state colatitude");
    husimi_cmd->add_option("--sigma-phi", hg_phi, "state longitude");
    husimi_cmd->add_option("--n-theta", hg_ntheta, "lattice rows");
    husimi_cmd->add_option("--n-phi", hg_nphi, "lattice columns");
    husimi_cmd->add_option("--output", husimi_out, "output file");

    CLI11_PARSE(app, argc, argv);

    try {
        // Config file first, then flags override it.
        if (!config_path.empty()) {
            ExperimentConfig file_cfg;
            load_config(config_path, file_cfg);
            auto* active = povm_cmd->parsed() ? povm_cmd : experiment_cmd;
            auto keep = [&](const std::string& flag) {
                return active->count(flag) > 0;
            };
            if (!keep("--k")) cfg.k = file_cfg.k;
            if (!keep("--N")) cfg.N = file_cfg.N;
            if (!keep("--n")) cfg.n = file_cfg.n;
            if (!keep("--epsilon")) cfg.epsilon = file_cfg.epsilon;
            if (!keep("--sigma")) cfg.sigma = file_cfg.sigma;
            if (!keep("--mode")) cfg.mode = file_cfg.mode;
            if (!keep("--tol")) cfg.tol = file_cfg.tol;
            if (!keep("--seed")) cfg.seed = file_cfg.seed;
        }

        if (threshold_cmd->parsed())
            return run_threshold(algebra, epsilon, delta, delta_from_k, strict,
                                 n_reduction, bargmann_k);
        if (tessellate_cmd->parsed()) return run_tessellate(tess_k, tess_out);
        if (povm_cmd->parsed()) return run_povm(cfg, povm_out);
        if (experiment_cmd->parsed()) return run_experiment(cfg, shots, experiment_out);
        if (monge_cmd->parsed()) {
            if (!monge_config.empty()) {
                std::ifstream in(monge_config);
                if (!in)
                    throw std::ios_base::failure("cannot open config file: " +
                                                 monge_config);
                std::string line;
                while (std::getline(in, line)) {
                    const auto hash = line.find('#');
                    if (hash != std::string::npos) line.erase(hash);
                    const auto eq = line.find('=');
                    if (eq == std::string::npos) continue;
                    std::istringstream key_in(line.substr(0, eq));
                    std::string key;
                    key_in >> key;
                    const std::string value = line.substr(eq + 1);
                    if (key == "j_max" && !monge_cmd->count("--j-max"))
                        j_max = std::stoi(value);
                    else if (key == "theta" && !monge_cmd->count("--theta"))
                        monge_theta = std::stod(value);
                    else if (key == "tol" && !monge_cmd->count("--tol"))
                        monge_tol = std::stod(value);
                }
            }
            return run_monge(j_max, monge_theta, monge_tol, monge_out);
        }
        if (husimi_cmd->parsed())
            return run_husimi_grid(hg_N, hg_n, hg_theta, hg_phi, hg_ntheta,
                                   hg_nphi, husimi_out);
    } catch (const QuadratureError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return exit_quadrature;
    } catch (const std::ios_base::failure& err) {
        std::cerr << "error: " << err.what() << "\n";
        return exit_io;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return exit_domain;
    }
    return exit_ok;
}
