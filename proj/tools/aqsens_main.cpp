#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "aqsens/parallel.hpp"
#include "runner/studies.hpp"
#include "runner/validate.hpp"

namespace {

using namespace aqsens;
using namespace aqsens::runner;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitGate = 3;
constexpr int kExitNumerical = 4;

int default_threads() {
    if (const char* env = std::getenv("AQSENS_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed >= 1) return parsed;
    }
    return resolve_threads(0);
}

std::string scenario_id_from_path(const std::filesystem::path& path) {
    return path.stem().string();
}

struct SeriesCsv {
    std::vector<double> times;
    std::vector<double> infidelity;
};

SeriesCsv read_series_csv(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("fit-lambda: cannot open " + path.string());
    SeriesCsv out;
    std::string line;
    int line_no = 0;
    int time_col = 0;
    int infid_col = 1;
    bool header_checked = false;
    while (std::getline(file, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string current;
        for (const char c : line) {
            if (c == ',') {
                cells.push_back(current);
                current.clear();
            } else {
                current += c;
            }
        }
        cells.push_back(current);
        if (!header_checked) {
            header_checked = true;
            char* end = nullptr;
            std::strtod(cells[0].c_str(), &end);
            const bool numeric = end != cells[0].c_str() && *end == '\0';
            if (!numeric) {
                // header row: locate the schema columns
                time_col = -1;
                infid_col = -1;
                for (std::size_t c = 0; c < cells.size(); ++c) {
                    if (cells[c] == "time_inv_coupling" || cells[c] == "time")
                        time_col = static_cast<int>(c);
                    if (cells[c] == "infidelity") infid_col = static_cast<int>(c);
                }
                if (time_col < 0 || infid_col < 0)
                    throw ConfigError("fit-lambda: " + path.string() +
                                      ": header lacks time/infidelity columns");
                continue;
            }
        }
        if (static_cast<int>(cells.size()) <= std::max(time_col, infid_col)) {
            std::ostringstream msg;
            msg << "fit-lambda: " << path.string() << ": row " << line_no << ": too few columns";
            throw ConfigError(msg.str());
        }
        try {
            std::size_t used = 0;
            const double t = std::stod(cells[static_cast<std::size_t>(time_col)], &used);
            const double v = std::stod(cells[static_cast<std::size_t>(infid_col)], &used);
            out.times.push_back(t);
            out.infidelity.push_back(v);
        } catch (const std::exception&) {
            std::ostringstream msg;
            msg << "fit-lambda: " << path.string() << ": row " << line_no
                << ": cell is not a number";
            throw ConfigError(msg.str());
        }
    }
    if (out.times.size() < 5)
        throw ConfigError("fit-lambda: " + path.string() + ": fewer than 5 usable rows");
    return out;
}

Scenario load_scenario(const std::string& config_path, std::uint64_t seed_override,
                       bool seed_given) {
    const Config config = Config::parse_file(config_path);
    Scenario scenario = scenario_from_config(config, scenario_id_from_path(config_path));
    if (seed_given) scenario.master_seed = seed_override;
    return scenario;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sensitivity analysis for analog quantum simulator outputs"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    bool seed_given = false;
    int threads = default_threads();
    std::string out_dir = "out";
    app.add_option("--seed", seed, "master seed override")->each([&](const std::string&) {
        seed_given = true;
    });
    app.add_option("--threads", threads, "worker threads (default: AQSENS_THREADS or hardware)");
    app.add_option("--out", out_dir, "output directory");

    auto* validate_cmd = app.add_subcommand("validate", "run the built-in oracle suite");
    std::uint64_t validate_seed = 20270101ULL;
    validate_cmd->add_option("--suite-seed", validate_seed, "seed of the oracle suite");

    std::string config_path;
    auto* static_cmd = app.add_subcommand("static", "state-perturbation study");
    static_cmd->add_option("--config", config_path, "scenario file")->required();
    auto* dynamics_cmd = app.add_subcommand("dynamics", "perturbed-evolution study");
    dynamics_cmd->add_option("--config", config_path, "scenario file")->required();
    auto* sweep_cmd = app.add_subcommand("sweep", "parameter-grid sweep");
    sweep_cmd->add_option("--config", config_path, "scenario file with a [sweep] section")
        ->required();

    auto* fit_cmd = app.add_subcommand("fit-lambda", "fit the perturbation strength to an "
                                                     "infidelity series");
    std::string fit_input;
    double fit_s0 = -1.0;
    std::string fit_config;
    fit_cmd->add_option("--input", fit_input, "CSV with time and infidelity columns")->required();
    fit_cmd->add_option("--s0", fit_s0, "inverse participation ratio of the initial state");
    fit_cmd->add_option("--config", fit_config,
                        "scenario file from which to compute s0 (state index 0)");

    auto* purity_cmd = app.add_subcommand("purity", "print the report of one observable family");
    std::string purity_family;
    int purity_particles = 0;
    std::string purity_rep = "symmetric";
    std::string purity_model;
    double purity_field = 0.0;
    purity_cmd->add_option("--family", purity_family, "observable descriptor")->required();
    purity_cmd->add_option("--particles", purity_particles, "particle count")->required();
    purity_cmd->add_option("--representation", purity_rep, "symmetric | full");
    purity_cmd->add_option("--model", purity_model,
                           "lmg | tim: adds the Hamiltonian-dependent diagonal purity");
    purity_cmd->add_option("--transverse-field", purity_field,
                           "field in coupling units for --model");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate_cmd->parsed()) {
            if (seed_given) validate_seed = seed;
            const ValidateReport report = run_validate(validate_seed, threads);
            std::filesystem::create_directories(out_dir);
            write_validate_report(report, std::filesystem::path(out_dir) / "validate_report.json");
            return print_validate_report(report);
        }
        if (static_cmd->parsed()) {
            const Config config = Config::parse_file(config_path);
            Scenario scenario = scenario_from_config(config, scenario_id_from_path(config_path));
            if (seed_given) scenario.master_seed = seed;
            const StaticStudyResult result = run_static_study(scenario, config, threads);
            for (const auto& file : write_static_outputs(result, out_dir))
                std::printf("wrote %s\n", file.string().c_str());
            return kExitOk;
        }
        if (dynamics_cmd->parsed()) {
            const Scenario scenario = load_scenario(config_path, seed, seed_given);
            const DynamicsStudyResult result = run_dynamics_study(scenario, threads);
            for (const auto& file : write_dynamics_outputs(result, out_dir))
                std::printf("wrote %s\n", file.string().c_str());
            if (result.quadrature_drift > 0.005) {
                std::fprintf(stderr,
                             "warning: quadrature drift %.3g exceeds the 0.5%% guard; refine "
                             "time.steps\n",
                             result.quadrature_drift);
            }
            return kExitOk;
        }
        if (sweep_cmd->parsed()) {
            const Config config = Config::parse_file(config_path);
            const SweepResult result =
                run_sweep(config, scenario_id_from_path(config_path), out_dir, threads);
            std::filesystem::create_directories(out_dir);
            const auto table_path = std::filesystem::path(out_dir) / "sweep_summary.csv";
            result.combined_summary.write(table_path);
            std::printf("wrote %s\n", table_path.string().c_str());
            if (result.empty) {
                std::fprintf(stderr, "warning: empty sweep grid, nothing to run\n");
                return kExitOk;
            }
            bool any_failed = false;
            for (std::size_t i = 0; i < result.grid_values.size(); ++i) {
                std::printf("point %zu (%s): %s in %.1fs%s%s\n", i,
                            result.grid_values[i].c_str(),
                            result.point_ok[i] ? "ok" : "FAILED", result.point_seconds[i],
                            result.point_ok[i] ? "" : ": ",
                            result.point_ok[i] ? "" : result.point_errors[i].c_str());
                any_failed = any_failed || !result.point_ok[i];
            }
            return any_failed ? kExitNumerical : kExitOk;
        }
        if (fit_cmd->parsed()) {
            const SeriesCsv series = read_series_csv(fit_input);
            double s0 = fit_s0;
            if (s0 < 0) {
                if (fit_config.empty())
                    throw ConfigError("fit-lambda: provide --s0 or --config");
                const Scenario scenario = load_scenario(fit_config, seed, seed_given);
                const HermitianOperator h = build_hamiltonian(scenario);
                const SeedSpec root{scenario.master_seed, {}};
                const PureState psi0 = build_initial_state(scenario, root.child(0), 0);
                s0 = diagonal_ensemble(h, psi0).ipr;
            }
            const LambdaFit fit = fit_lambda(series.times, series.infidelity, s0);
            std::printf("lambda = %.10g\nresidual = %.10g\ns0 = %.10g\n%s", fit.lambda,
                        fit.residual, s0, fit.flat ? "note: flat series, lambda pinned to 0\n" : "");
            std::filesystem::create_directories(out_dir);
            CsvTable curve({"schema_version", "time_inv_coupling", "infidelity_fit"});
            for (std::size_t k = 0; k < series.times.size(); ++k) {
                auto row = curve.row();
                row.add(std::int64_t{kSchemaVersion}).add(series.times[k]).add(fit.curve[k]);
                curve.commit(std::move(row));
            }
            const auto curve_path = std::filesystem::path(out_dir) / "lambda_fit_curve.csv";
            curve.write(curve_path);
            std::printf("wrote %s\n", curve_path.string().c_str());
            return kExitOk;
        }
        if (purity_cmd->parsed()) {
            SpinSystemSpec spec = purity_rep == "full"
                                      ? SpinSystemSpec::full(purity_particles)
                                      : SpinSystemSpec::symmetric(purity_particles);
            if (purity_rep != "full" && purity_rep != "symmetric")
                throw ConfigError("purity: representation must be symmetric or full");
            HermitianOperator op = build_observable(purity_family, spec);
            if (!purity_model.empty()) {
                Scenario scenario;
                scenario.model = purity_model == "tim" ? ModelKind::Tim : ModelKind::Lmg;
                if (purity_model != "tim" && purity_model != "lmg")
                    throw ConfigError("purity: model must be lmg or tim");
                scenario.spec = spec;
                scenario.field = purity_field;
                scenario.coupling = 1.0;
                const HermitianOperator h = build_hamiltonian(scenario);
                const ObservableReport report = build_report(op, purity_family, &h);
                std::printf("label,purity,diag_purity,degenerate_hamiltonian\n%s,%s,%s,%s\n",
                            report.label.c_str(), format_double(report.purity).c_str(),
                            format_double(*report.diag_purity).c_str(),
                            report.hamiltonian_degenerate ? "true" : "false");
            } else {
                const ObservableReport report = build_report(op, purity_family);
                std::printf("label,purity\n%s,%s\n", report.label.c_str(),
                            format_double(report.purity).c_str());
            }
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitNumerical;
    }
    return kExitGate;
}
