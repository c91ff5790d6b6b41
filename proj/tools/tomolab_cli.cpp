// tomolab: synthesize homodyne tomograms and compute distance markers,
// normal-ordered moments, and figure-level experiment reports from them.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tomolab/tomolab.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tomolab;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_check_failure = 1;
constexpr int exit_usage = 2;

struct CommonOpts {
    std::string config_path;
    double epsilon = 1e-12;
    double x_max = 0.0;   // 0 = auto
    int n_points = 0;     // 0 = auto
    std::string output;   // empty = stdout
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--config", c.config_path, "JSON config file; flags override its values");
    cmd->add_option("--epsilon", c.epsilon, "Fock truncation tail tolerance")
        ->check(CLI::Range(1e-300, 1e-6));
    cmd->add_option("--x-max", c.x_max, "grid half-width override (symmetric grid)");
    cmd->add_option("--n-points", c.n_points, "grid point count override");
    cmd->add_option("-o,--output", c.output, "output file (default: stdout)");
}

// Applies config-file values to options the user did not pass on the line.
void apply_config(CLI::App* cmd, const json& cfg) {
    for (auto& [key, value] : cfg.items()) {
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (opt == nullptr) throw CLI::ValidationError("config: unknown key '" + key + "'");
        if (opt->count() > 0) continue;  // flag wins
        if (value.is_array()) {
            for (const auto& v : value)
                opt->add_result(v.is_string() ? v.get<std::string>() : v.dump());
        } else {
            opt->add_result(value.is_string() ? value.get<std::string>() : value.dump());
        }
        opt->run_callback();
    }
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("config: cannot open '" + path + "'");
    return json::parse(in);
}

QuadratureGrid resolve_grid(const CommonOpts& c, int max_truncation) {
    QuadratureGrid g = default_grid(max_truncation);
    if (c.x_max > 0.0) {
        g.x_min = -c.x_max;
        g.x_max = c.x_max;
        g.n_points = static_cast<int>(std::lround(500.0 * c.x_max)) + 1;
    }
    if (c.n_points > 0) g.n_points = c.n_points;
    return g;
}

json grid_json(const QuadratureGrid& g) {
    return {{"x_min", g.x_min}, {"x_max", g.x_max}, {"n_points", g.n_points}};
}

void write_text(const std::string& path, const std::string& text, const json& resolved_config) {
    if (path.empty()) {
        std::cout << text;
        std::cerr << "resolved config: " << resolved_config.dump() << '\n';
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << text;
    std::ofstream meta(path + ".meta.json");
    meta << resolved_config.dump(2) << '\n';
}

int print_checks(const ExperimentReport& rep) {
    for (const auto& c : rep.checks) {
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.description;
        if (c.tolerance > 0.0)
            std::cout << "  (measured " << c.measured << ", expected " << c.expected << " +- "
                      << c.tolerance << ")";
        else if (c.measured != 0.0)
            std::cout << "  (measured " << c.measured << ")";
        std::cout << '\n';
    }
    return rep.all_passed() ? exit_ok : exit_check_failure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"homodyne tomogram synthesis and reconstruction-free state markers"};
    app.require_subcommand(1);

    // --- tomogram ---------------------------------------------------------
    auto* cmd_tomo = app.add_subcommand("tomogram", "write a tomogram as CSV");
    CommonOpts tomo_opts;
    std::string tomo_state;
    int n_theta = 64;
    add_common(cmd_tomo, tomo_opts);
    cmd_tomo->add_option("--state", tomo_state, "state spec, e.g. pacs:alpha=0.7,m=2");
    cmd_tomo->add_option("--n-theta", n_theta, "number of slices on [0, pi)")->check(CLI::PositiveNumber);

    // --- markers ----------------------------------------------------------
    auto* cmd_markers = app.add_subcommand("markers", "distance markers between two states");
    CommonOpts marker_opts;
    std::string state_a, state_b, kind_str = "all";
    std::vector<double> thetas;
    int n_slices = 5;
    add_common(cmd_markers, marker_opts);
    cmd_markers->add_option("--state-a", state_a, "first state (f for DKL)");
    cmd_markers->add_option("--state-b", state_b, "second state (reference g)");
    cmd_markers->add_option("--kind", kind_str, "w1 | dkl | db | all");
    cmd_markers->add_option("--theta", thetas, "slice angle(s); omit for slice-averaged values");
    cmd_markers->add_option("--n-slices", n_slices, "slices for averaging")->check(CLI::PositiveNumber);

    // --- moments ----------------------------------------------------------
    auto* cmd_moments = app.add_subcommand("moments", "normal-ordered moments from tomogram slices");
    CommonOpts moment_opts;
    std::string moment_state;
    int max_order = 4;
    add_common(cmd_moments, moment_opts);
    cmd_moments->add_option("--state", moment_state, "state spec");
    cmd_moments->add_option("--max-order", max_order, "largest k+l")->check(CLI::Range(0, 12));

    // --- experiment -------------------------------------------------------
    auto* cmd_exp = app.add_subcommand("experiment", "run a named reproduction experiment");
    CommonOpts exp_opts;
    std::string exp_name;
    std::string output_dir = ".";
    int n_max = 100;
    std::vector<double> alphas;
    std::vector<int> m_values;
    std::string reference = "beta_opt";
    double r_min = 0.05, r_max = 0.8, r_step = 0.01;
    int exp_n_slices = 5;
    add_common(cmd_exp, exp_opts);
    cmd_exp->add_option("name", exp_name, "fock-distances | pacs-markers | gain-variance | svs-crossover")
        ->required();
    cmd_exp->add_option("--output-dir", output_dir, "directory for report JSON and curve CSVs");
    cmd_exp->add_option("--n-max", n_max, "largest Fock order (fock-distances)");
    cmd_exp->add_option("--alphas", alphas, "|alpha| sweep values");
    cmd_exp->add_option("--m", m_values, "added-photon numbers");
    cmd_exp->add_option("--reference", reference, "beta_opt | gain (pacs-markers)");
    cmd_exp->add_option("--r-min", r_min, "svs-crossover scan start");
    cmd_exp->add_option("--r-max", r_max, "svs-crossover scan end");
    cmd_exp->add_option("--r-step", r_step, "svs-crossover scan step");
    cmd_exp->add_option("--n-slices", exp_n_slices, "slices for marker averaging");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        CLI::App* active = app.get_subcommands().front();
        CommonOpts* common = cmd_tomo->parsed()      ? &tomo_opts
                             : cmd_markers->parsed() ? &marker_opts
                             : cmd_moments->parsed() ? &moment_opts
                                                     : &exp_opts;
        apply_config(active, load_config(common->config_path));
        // required-after-config: values may come from the config file
        auto need = [](const std::string& v, const char* flag) {
            if (v.empty()) throw CLI::ValidationError(std::string(flag) + " is required");
        };
        if (cmd_tomo->parsed()) need(tomo_state, "--state");
        if (cmd_markers->parsed()) {
            need(state_a, "--state-a");
            need(state_b, "--state-b");
        }
        if (cmd_moments->parsed()) need(moment_state, "--state");

        if (cmd_tomo->parsed()) {
            const StateSpec spec = parse_state_spec(tomo_state);
            const FockVector state = build_state(spec, tomo_opts.epsilon);
            const QuadratureGrid grid = resolve_grid(tomo_opts, state.truncation());
            const Tomogram t = full_tomogram(state, n_theta, grid);
            for (const auto& s : t.slices)
                std::cerr << "theta=" << s.theta << " integral=" << trapezoid(s.pdf, grid.step())
                          << '\n';
            std::ostringstream csv;
            write_tomogram_csv(csv, t);
            const json cfg{{"command", "tomogram"},
                           {"state", format_state_spec(spec)},
                           {"n_theta", n_theta},
                           {"epsilon", tomo_opts.epsilon},
                           {"grid", grid_json(grid)},
                           {"format", "csv"}};
            write_text(tomo_opts.output, csv.str(), cfg);
            return exit_ok;
        }

        if (cmd_markers->parsed()) {
            const StateSpec spec_a = parse_state_spec(state_a);
            const StateSpec spec_b = parse_state_spec(state_b);
            const FockVector a = build_state(spec_a, marker_opts.epsilon);
            const FockVector b = build_state(spec_b, marker_opts.epsilon);
            const QuadratureGrid grid =
                resolve_grid(marker_opts, std::max(a.truncation(), b.truncation()));
            std::vector<MarkerKind> kinds;
            if (kind_str == "all")
                kinds = {MarkerKind::W1, MarkerKind::DKL, MarkerKind::DB};
            else if (kind_str == "w1")
                kinds = {MarkerKind::W1};
            else if (kind_str == "dkl")
                kinds = {MarkerKind::DKL};
            else if (kind_str == "db")
                kinds = {MarkerKind::DB};
            else
                throw CLI::ValidationError("--kind must be w1, dkl, db or all");
            json results = json::array();
            for (MarkerKind k : kinds) {
                if (thetas.empty()) {
                    const MarkerValue v = slice_averaged(a, b, k, n_slices, grid);
                    results.push_back({{"kind", marker_name(k)},
                                       {"theta", "avg"},
                                       {"n_slices", v.n_slices},
                                       {"value", v.value},
                                       {"stateA", format_state_spec(spec_a)},
                                       {"stateB", format_state_spec(spec_b)}});
                } else {
                    for (double th : thetas)
                        results.push_back({{"kind", marker_name(k)},
                                           {"theta", th},
                                           {"n_slices", 1},
                                           {"value", marker_at(a, b, k, th, grid)},
                                           {"stateA", format_state_spec(spec_a)},
                                           {"stateB", format_state_spec(spec_b)}});
                }
            }
            const json out{{"config",
                            {{"command", "markers"},
                             {"state_a", format_state_spec(spec_a)},
                             {"state_b", format_state_spec(spec_b)},
                             {"kind", kind_str},
                             {"thetas", thetas},
                             {"n_slices", n_slices},
                             {"epsilon", marker_opts.epsilon},
                             {"grid", grid_json(grid)}}},
                           {"results", results}};
            write_text(marker_opts.output, out.dump(2) + "\n", out["config"]);
            return exit_ok;
        }

        if (cmd_moments->parsed()) {
            const StateSpec spec = parse_state_spec(moment_state);
            const FockVector state = build_state(spec, moment_opts.epsilon);
            const QuadratureGrid grid = resolve_grid(moment_opts, state.truncation());
            const MomentTable table =
                moment_table(state, max_order, grid, format_state_spec(spec));
            json entries = json::array();
            for (const auto& [kl, v] : table.entries)
                entries.push_back(
                    {{"k", kl.first}, {"l", kl.second}, {"re", v.real()}, {"im", v.imag()}});
            const json out{{"config",
                            {{"command", "moments"},
                             {"state", format_state_spec(spec)},
                             {"max_order", max_order},
                             {"epsilon", moment_opts.epsilon},
                             {"grid", grid_json(grid)}}},
                           {"source", table.source},
                           {"entries", entries}};
            write_text(moment_opts.output, out.dump(2) + "\n", out["config"]);
            return exit_ok;
        }

        // experiment
        std::optional<QuadratureGrid> grid_override;
        if (exp_opts.x_max > 0.0 || exp_opts.n_points > 0)
            grid_override = resolve_grid(exp_opts, 0);
        ExperimentReport rep;
        if (exp_name == "fock-distances") {
            rep = run_fock_distance_experiment(n_max, grid_override);
        } else if (exp_name == "pacs-markers" || exp_name == "gain-variance") {
            if (alphas.empty())
                for (double a = 0.5; a <= 2.0 + 1e-9; a += exp_name == "pacs-markers" ? 0.25 : 0.1)
                    alphas.push_back(a);
            if (m_values.empty()) m_values = {1, 2};
            if (exp_name == "pacs-markers") {
                PacsReference ref;
                if (reference == "beta_opt")
                    ref = PacsReference::BetaOpt;
                else if (reference == "gain")
                    ref = PacsReference::GainAmplified;
                else
                    throw CLI::ValidationError("--reference must be beta_opt or gain");
                rep = run_pacs_marker_experiment(alphas, m_values, ref, exp_n_slices, grid_override);
            } else {
                rep = run_gain_variance_experiment(alphas, m_values, grid_override);
            }
        } else if (exp_name == "svs-crossover") {
            std::vector<double> rs;
            for (double r = r_min; r <= r_max + 1e-9; r += r_step) rs.push_back(r);
            rep = run_svs_crossover_experiment(rs, grid_override);
        } else {
            throw CLI::ValidationError("unknown experiment '" + exp_name + "'");
        }
        rep.parameters["epsilon"] = exp_opts.epsilon;
        fs::create_directories(output_dir);
        {
            std::ofstream jf(fs::path(output_dir) / (exp_name + ".report.json"));
            jf << to_json(rep).dump(2) << '\n';
        }
        for (const auto& c : rep.curves) {
            std::ofstream cf(fs::path(output_dir) / (exp_name + "_" + c.label + ".csv"));
            write_curve_csv(cf, c);
        }
        return print_checks(rep);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const grid_error& e) {
        std::cerr << "error: " << e.what()
                  << "\nhint: widen the grid with --x-max or tighten --epsilon\n";
        return exit_check_failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_check_failure;
    }
}
