#include "runner/studies.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include "aqsens/static_error.hpp"

namespace aqsens::runner {

namespace {

// seed stream layout: child(0) = initial states, child(1) = instances per
// (kind, state), child(2) = empirical characteristic function, child(3) =
// static-study draws
constexpr std::uint64_t kStatesStream = 0;
constexpr std::uint64_t kInstancesStream = 1;
constexpr std::uint64_t kCharFnStream = 2;
constexpr std::uint64_t kStaticStream = 3;

struct Accumulator {
    std::vector<double> sum;
    std::vector<double> sum_sq;

    explicit Accumulator(std::size_t n) : sum(n, 0.0), sum_sq(n, 0.0) {}
    void add(std::size_t i, double v) {
        sum[i] += v;
        sum_sq[i] += v * v;
    }
    double mean(std::size_t i, int n) const { return sum[i] / n; }
    double se(std::size_t i, int n) const {
        if (n < 2) return 0.0;
        const double m = mean(i, n);
        const double var = (sum_sq[i] - n * m * m) / (n - 1);
        return std::sqrt(std::max(0.0, var) / n);
    }
};

std::vector<std::size_t> decimated_indices(std::size_t n_points, int stride, std::size_t first) {
    std::vector<std::size_t> out;
    for (std::size_t k = first; k < n_points; k += static_cast<std::size_t>(stride))
        out.push_back(k);
    if (out.empty() || out.back() != n_points - 1) out.push_back(n_points - 1);
    return out;
}

double quadrature_drift_of(const std::vector<double>& delta, const std::vector<double>& times) {
    if ((times.size() - 1) % 2 != 0 || times.size() < 5) return 0.0;
    std::vector<double> coarse_delta;
    std::vector<double> coarse_times;
    for (std::size_t k = 0; k < times.size(); k += 2) {
        coarse_delta.push_back(delta[k]);
        coarse_times.push_back(times[k]);
    }
    const double fine = cumulative_rms(delta, times).back();
    const double coarse = cumulative_rms(coarse_delta, coarse_times).back();
    if (fine == 0.0) return 0.0;
    return std::abs(1.0 - coarse / fine);
}

}  // namespace

DynamicsStudyResult run_dynamics_study(const Scenario& scenario, int threads) {
    const HermitianOperator hamiltonian = build_hamiltonian(scenario);
    const std::vector<ObservableReport> observables = build_observables(scenario, &hamiltonian);
    const SeedSpec root{scenario.master_seed, {}};
    const double tail_start = scenario.resolved_tail_start();
    const std::vector<double> times = scenario.grid.times();
    const std::size_t n_t = times.size();
    const std::size_t n_obs = observables.size();
    const auto decim = decimated_indices(n_t, scenario.curve_stride, 1);
    const auto decim0 = decimated_indices(n_t, scenario.curve_stride, 0);

    DynamicsStudyResult result;
    result.scenario = scenario;

    for (std::size_t kind_index = 0; kind_index < scenario.perturbations.size(); ++kind_index) {
        const PerturbationKind kind = scenario.perturbations[kind_index];
        const PerturbationModel model = make_perturbation(scenario, kind);
        const std::string kind_name = perturbation_name(kind);

        CharacteristicFunction char_fn =
            kind == PerturbationKind::LocalFields
                ? CharacteristicFunction::empirical(EmpiricalCharacteristic::sample(
                      model, hamiltonian, root.child(kCharFnStream).child(kind_index),
                      scenario.char_fn_samples))
                : CharacteristicFunction::analytic(model);

        // per-observable ensemble accumulators
        std::vector<Accumulator> tail_sq(n_obs, Accumulator(1));
        std::vector<Accumulator> cum_tmax_sq(n_obs, Accumulator(1));
        std::vector<Accumulator> asym_sq(n_obs, Accumulator(1));
        std::vector<Accumulator> curve_sq(n_obs, Accumulator(decim.size()));
        std::vector<Accumulator> delta_acc(n_obs, Accumulator(decim0.size()));
        std::vector<Accumulator> analytic_acc(n_obs, Accumulator(decim0.size()));
        Accumulator infid_acc{decim0.size()};
        Accumulator s0_acc{1};
        std::vector<std::vector<double>> single_delta_se(n_obs);
        std::vector<double> single_state_infid_se;
        bool gap_collision = false;

        for (int s = 0; s < scenario.n_states; ++s) {
            const PureState psi0 =
                build_initial_state(scenario, root.child(kStatesStream), s);
            const DynamicsScenario dyn{hamiltonian, model, scenario.instances, scenario.grid};
            const SeedSpec instance_seed =
                root.child(kInstancesStream).child(kind_index).child(static_cast<std::uint64_t>(s));
            const StateRunResult state = run_single_state(dyn, psi0, observables, instance_seed,
                                                          char_fn, tail_start, threads);
            if (s == 0) {
                double drift = 0.0;
                for (const auto& series : state.observables)
                    drift = std::max(drift, quadrature_drift_of(series.delta, times));
                result.quadrature_drift = std::max(result.quadrature_drift, drift);
            }
            for (std::size_t a = 0; a < n_obs; ++a) {
                const ObservableSeries& series = state.observables[a];
                const double norm_sq =
                    observables[a].haar_mean() * observables[a].haar_mean();
                tail_sq[a].add(0, series.tail_rms_sq / norm_sq);
                const double cum_last = series.cumulative.back();
                cum_tmax_sq[a].add(0, cum_last * cum_last / norm_sq);
                asym_sq[a].add(0, series.asymptotic_sq / norm_sq);
                gap_collision = gap_collision || series.gap_collision;
                for (std::size_t i = 0; i < decim.size(); ++i) {
                    const double e = series.cumulative[decim[i] - 1];
                    curve_sq[a].add(i, e * e / norm_sq);
                }
                for (std::size_t i = 0; i < decim0.size(); ++i) {
                    delta_acc[a].add(i, series.delta[decim0[i]]);
                    analytic_acc[a].add(i, series.analytic_delta[decim0[i]]);
                }
                if (scenario.n_states == 1) {
                    single_delta_se[a].resize(decim0.size());
                    for (std::size_t i = 0; i < decim0.size(); ++i)
                        single_delta_se[a][i] = series.sim_se[decim0[i]];
                }
            }
            if (scenario.n_states == 1) {
                single_state_infid_se.assign(decim0.size(), 0.0);
                for (std::size_t i = 0; i < decim0.size(); ++i)
                    single_state_infid_se[i] = state.infidelity.se[decim0[i]];
            }
            for (std::size_t i = 0; i < decim0.size(); ++i)
                infid_acc.add(i, state.infidelity.exact[decim0[i]]);
            s0_acc.add(0, state.infidelity.s0);
        }

        const int n_s = scenario.n_states;
        for (std::size_t a = 0; a < n_obs; ++a) {
            const ObservableReport& report = observables[a];
            DynamicsSummary summary;
            summary.perturbation = kind_name;
            summary.label = report.label;
            summary.purity = report.purity;
            summary.diag_purity = report.diag_purity.value_or(0.0);
            summary.prediction_rel = asymptotic_haar_error(report);
            summary.plateau_rel_sq_mean = tail_sq[a].mean(0, n_s);
            summary.plateau_rel_sq_se = tail_sq[a].se(0, n_s);
            summary.plateau_rel = std::sqrt(std::max(0.0, summary.plateau_rel_sq_mean));
            summary.plateau_rel_se =
                summary.plateau_rel > 0 ? summary.plateau_rel_sq_se / (2 * summary.plateau_rel)
                                        : 0.0;
            summary.cumulative_rel_sq_mean = cum_tmax_sq[a].mean(0, n_s);
            summary.cumulative_rel_sq_se = cum_tmax_sq[a].se(0, n_s);
            summary.cumulative_rel_tmax = std::sqrt(std::max(0.0, summary.cumulative_rel_sq_mean));
            summary.cumulative_rel_tmax_se =
                summary.cumulative_rel_tmax > 0
                    ? summary.cumulative_rel_sq_se / (2 * summary.cumulative_rel_tmax)
                    : 0.0;
            summary.asymptotic_single_rel_sq = asym_sq[a].mean(0, n_s);
            summary.gap_collision = gap_collision;
            summary.hamiltonian_degenerate = report.hamiltonian_degenerate;
            result.summary.push_back(std::move(summary));

            DynamicsEnsembleCurve curve;
            curve.perturbation = kind_name;
            curve.label = report.label;
            curve.purity = report.purity;
            curve.diag_purity = report.diag_purity.value_or(0.0);
            for (const std::size_t k : decim) curve.times.push_back(times[k]);
            curve.e_rel.resize(decim.size());
            curve.e_rel_se.resize(decim.size());
            for (std::size_t i = 0; i < decim.size(); ++i) {
                const double mean_sq = curve_sq[a].mean(i, n_s);
                const double se_sq = curve_sq[a].se(i, n_s);
                const double e = std::sqrt(std::max(0.0, mean_sq));
                curve.e_rel[i] = e;
                curve.e_rel_se[i] = e > 0 ? se_sq / (2 * e) : 0.0;
            }
            curve.delta_mean.resize(decim0.size());
            curve.delta_se.resize(decim0.size());
            curve.analytic_delta.resize(decim0.size());
            for (std::size_t i = 0; i < decim0.size(); ++i) {
                curve.delta_mean[i] = delta_acc[a].mean(i, n_s);
                curve.delta_se[i] = n_s == 1 ? single_delta_se[a][i] : delta_acc[a].se(i, n_s);
                curve.analytic_delta[i] = analytic_acc[a].mean(i, n_s);
            }
            result.curves.push_back(std::move(curve));
        }

        DynamicsInfidelityCurve infid;
        infid.perturbation = kind_name;
        for (const std::size_t k : decim0) infid.times.push_back(times[k]);
        infid.exact.resize(decim0.size());
        infid.se.resize(decim0.size());
        infid.s0_mean = s0_acc.mean(0, n_s);
        infid.analytic.resize(decim0.size());
        for (std::size_t i = 0; i < decim0.size(); ++i) {
            infid.exact[i] = infid_acc.mean(i, n_s);
            infid.se[i] = n_s == 1 ? single_state_infid_se[i] : infid_acc.se(i, n_s);
            const double tau = scenario.lambda * times[decim0[i]];
            const double f = char_fn(tau).value;
            infid.analytic[i] = (1.0 - f) * (1.0 - infid.s0_mean);
        }
        result.infidelity.push_back(std::move(infid));
    }
    return result;
}

std::vector<std::filesystem::path> write_dynamics_outputs(const DynamicsStudyResult& result,
                                                          const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const Scenario& sc = result.scenario;
    std::vector<std::filesystem::path> written;

    CsvTable curves({"schema_version", "scenario_id", "perturbation", "observable_label",
                     "purity", "diag_purity", "time_inv_coupling", "e_rel", "e_rel_se",
                     "delta_mean", "delta_se", "analytic_delta", "master_seed", "state_index",
                     "instance_count"});
    for (const DynamicsEnsembleCurve& curve : result.curves) {
        // delta series carries one more leading point (t = 0) than e_rel
        const std::size_t offset = curve.delta_mean.size() - curve.e_rel.size();
        for (std::size_t i = 0; i < curve.times.size(); ++i) {
            auto row = curves.row();
            row.add(std::int64_t{kSchemaVersion})
                .add(sc.id)
                .add(curve.perturbation)
                .add(curve.label)
                .add(curve.purity)
                .add(curve.diag_purity)
                .add(curve.times[i])
                .add(curve.e_rel[i])
                .add(curve.e_rel_se[i])
                .add(curve.delta_mean[i + offset])
                .add(curve.delta_se[i + offset])
                .add(curve.analytic_delta[i + offset])
                .add(sc.master_seed)
                .add(std::int64_t{-1})
                .add(std::int64_t{sc.instances});
            curves.commit(std::move(row));
        }
    }
    const auto curves_path = out_dir / (sc.id + "__curves.csv");
    curves.write(curves_path);
    written.push_back(curves_path);

    CsvTable infid({"schema_version", "scenario_id", "perturbation", "time_inv_coupling",
                    "infidelity", "infidelity_se", "infidelity_analytic", "s0", "master_seed",
                    "state_index", "instance_count"});
    for (const DynamicsInfidelityCurve& curve : result.infidelity) {
        for (std::size_t i = 0; i < curve.times.size(); ++i) {
            auto row = infid.row();
            row.add(std::int64_t{kSchemaVersion})
                .add(sc.id)
                .add(curve.perturbation)
                .add(curve.times[i])
                .add(curve.exact[i])
                .add(curve.se[i])
                .add(curve.analytic[i])
                .add(curve.s0_mean)
                .add(sc.master_seed)
                .add(std::int64_t{-1})
                .add(std::int64_t{sc.instances});
            infid.commit(std::move(row));
        }
    }
    const auto infid_path = out_dir / (sc.id + "__infidelity.csv");
    infid.write(infid_path);
    written.push_back(infid_path);

    CsvTable summary({"schema_version", "scenario_id", "perturbation", "observable_label",
                      "purity", "diag_purity", "prediction_rel", "plateau_rel", "plateau_rel_se",
                      "plateau_rel_sq_mean", "plateau_rel_sq_se", "cumulative_rel_tmax",
                      "cumulative_rel_tmax_se", "asymptotic_single_rel_sq", "gap_collision",
                      "hamiltonian_degenerate", "master_seed", "state_index", "instance_count"});
    for (const DynamicsSummary& s : result.summary) {
        auto row = summary.row();
        row.add(std::int64_t{kSchemaVersion})
            .add(sc.id)
            .add(s.perturbation)
            .add(s.label)
            .add(s.purity)
            .add(s.diag_purity)
            .add(s.prediction_rel)
            .add(s.plateau_rel)
            .add(s.plateau_rel_se)
            .add(s.plateau_rel_sq_mean)
            .add(s.plateau_rel_sq_se)
            .add(s.cumulative_rel_tmax)
            .add(s.cumulative_rel_tmax_se)
            .add(s.asymptotic_single_rel_sq)
            .add(s.gap_collision)
            .add(s.hamiltonian_degenerate)
            .add(sc.master_seed)
            .add(std::int64_t{-1})
            .add(std::int64_t{sc.instances});
        summary.commit(std::move(row));
    }
    const auto summary_path = out_dir / (sc.id + "__summary.csv");
    summary.write(summary_path);
    written.push_back(summary_path);

    std::vector<std::string> manifest;
    manifest.push_back("scenario: " + sc.id);
    manifest.push_back("model: " + std::string(sc.model == ModelKind::Lmg ? "lmg" : "tim") +
                       ", particles " + std::to_string(sc.spec.particles));
    manifest.push_back("ensemble: " + ensemble_name(sc.ensemble) + " x " +
                       std::to_string(sc.n_states) + ", instances " +
                       std::to_string(sc.instances) + ", seed " + std::to_string(sc.master_seed));
    manifest.push_back("files:");
    manifest.push_back("  " + sc.id + "__curves.csv: x = time_inv_coupling, y = e_rel "
                       "(cumulative relative error, ensemble mean), series = observable_label "
                       "per perturbation");
    manifest.push_back("  " + sc.id + "__infidelity.csv: x = time_inv_coupling, y = infidelity "
                       "(exact V-average) with first-order analytic companion");
    manifest.push_back("  " + sc.id + "__summary.csv: per observable, stationary-window "
                       "plateau vs the asymptotic prediction");
    manifest.push_back("plateau window: [" + format_double(sc.resolved_tail_start()) + ", " +
                       format_double(sc.grid.t_max) + "] in inverse-coupling units");
    manifest.push_back("quadrature drift under step halving: " +
                       format_double(result.quadrature_drift) +
                       (result.quadrature_drift > 0.005 ? " (above the 0.5% guard!)" : ""));
    manifest.push_back("note: evolution horizon chosen for plateau convergence; analytic "
                       "delta columns for local-field runs use the empirical characteristic "
                       "function and are approximate");
    if (sc.n_states == 1)
        manifest.push_back("note: single-state run; delta_se and infidelity_se are "
                           "instance-level standard errors");
    else
        manifest.push_back("note: ensemble run; *_se columns are state-ensemble standard errors");
    const auto manifest_path = out_dir / (sc.id + "__manifest.txt");
    write_manifest(manifest_path, manifest);
    written.push_back(manifest_path);
    return written;
}

StaticStudyResult run_static_study(const Scenario& scenario, const Config& config, int threads) {
    StaticStudyResult result;
    result.scenario = scenario;
    result.gamma = config.get_double_or("static.gamma", 0.2);
    result.samples = static_cast<int>(config.get_int_or("static.samples", 2000));
    result.noise = config.get_string_or("static.noise", "pure-gamma");

    const std::vector<ObservableReport> observables = build_observables(scenario, nullptr);
    const SeedSpec root{scenario.master_seed, {}};

    for (std::size_t a = 0; a < observables.size(); ++a) {
        const ObservableReport& report = observables[a];
        const SeedSpec seed = root.child(kStaticStream).child(a);
        StaticStudyRow row;
        row.label = report.label;
        row.particles = scenario.spec.particles;
        row.dim = scenario.spec.dim();
        row.gamma = result.gamma;
        row.purity = report.purity;
        row.samples = result.samples;
        if (result.noise == "pure-gamma") {
            const HaarDeltaStats stats = haar_average_delta_sq(report.shifted, result.gamma,
                                                               result.samples, seed, threads);
            row.mean_delta = stats.mean_delta;
            row.se_delta = stats.se_delta;
            row.mean_delta_sq = stats.mean_delta_sq;
            row.se_delta_sq = stats.se_delta_sq;
            row.analytic_delta_sq = stats.analytic;
            row.empirical_rel = std::sqrt(std::max(0.0, stats.mean_delta_sq)) / report.haar_mean();
            row.analytic_rel = relative_delta(report, result.gamma);
        } else {
            MixedNoiseSpec spec;
            spec.gamma = result.gamma;
            if (result.noise == "depolarizing") spec.kind = MixedNoiseKind::Depolarizing;
            else if (result.noise == "orthogonal-mixture")
                spec.kind = MixedNoiseKind::OrthogonalMixture;
            else
                throw ConfigError(config.origin() + ": field 'static.noise': unknown value '" +
                                  result.noise + "'");
            const MixedMcStats stats =
                mixed_haar_study(report, spec, result.samples, seed, threads);
            row.mean_delta = stats.mean_delta;
            row.se_delta = stats.se_delta;
            row.mean_delta_sq = stats.mean_delta_sq;
            row.se_delta_sq = stats.se_delta_sq;
            const double rel = stats.analytic_rel;
            row.analytic_delta_sq = rel * rel * report.haar_mean() * report.haar_mean();
            row.empirical_rel = stats.empirical_rel;
            row.analytic_rel = stats.analytic_rel;
        }
        result.rows.push_back(std::move(row));
    }
    return result;
}

std::vector<std::filesystem::path> write_static_outputs(const StaticStudyResult& result,
                                                        const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const Scenario& sc = result.scenario;
    CsvTable table({"schema_version", "scenario_id", "noise", "observable_label", "particles",
                    "dim", "gamma", "purity", "mean_delta", "se_delta", "mean_delta_sq",
                    "se_delta_sq", "analytic_delta_sq", "empirical_rel", "analytic_rel",
                    "samples", "master_seed", "state_index", "instance_count"});
    for (const StaticStudyRow& row : result.rows) {
        auto r = table.row();
        r.add(std::int64_t{kSchemaVersion})
            .add(sc.id)
            .add(result.noise)
            .add(row.label)
            .add(std::int64_t{row.particles})
            .add(std::int64_t{row.dim})
            .add(row.gamma)
            .add(row.purity)
            .add(row.mean_delta)
            .add(row.se_delta)
            .add(row.mean_delta_sq)
            .add(row.se_delta_sq)
            .add(row.analytic_delta_sq)
            .add(row.empirical_rel)
            .add(row.analytic_rel)
            .add(std::int64_t{row.samples})
            .add(sc.master_seed)
            .add(std::int64_t{-1})
            .add(std::int64_t{row.samples});
        table.commit(std::move(r));
    }
    const auto table_path = out_dir / (sc.id + "__static.csv");
    table.write(table_path);

    std::vector<std::string> manifest;
    manifest.push_back("scenario: " + sc.id + " (static study, noise " + result.noise + ")");
    manifest.push_back("file: " + sc.id + "__static.csv: per observable, Monte-Carlo moments "
                       "of the simulation error against the closed forms");
    manifest.push_back("gamma = " + format_double(result.gamma) + ", samples = " +
                       std::to_string(result.samples) + ", seed = " +
                       std::to_string(sc.master_seed));
    const auto manifest_path = out_dir / (sc.id + "__manifest.txt");
    write_manifest(manifest_path, manifest);
    return {table_path, manifest_path};
}

SweepResult run_sweep(const Config& base_config, const std::string& fallback_id,
                      const std::filesystem::path& out_dir, int threads) {
    const std::string grid_key = base_config.get_string("sweep.key");
    const std::vector<std::string> values =
        base_config.has("sweep.values") ? base_config.get_list("sweep.values")
                                        : std::vector<std::string>{};
    const auto budget = base_config.get_int_or("sweep.budget", 64);
    if (static_cast<std::int64_t>(values.size()) > budget)
        throw ConfigError("sweep: grid cardinality " + std::to_string(values.size()) +
                          " exceeds budget " + std::to_string(budget));
    const std::string study = base_config.get_string_or("sweep.study", "dynamics");

    std::vector<std::string> columns;
    if (study == "dynamics")
        columns = {"schema_version", "grid_key", "grid_value", "status", "wall_seconds",
                   "scenario_id", "perturbation", "observable_label", "purity", "diag_purity",
                   "prediction_rel", "plateau_rel", "plateau_rel_se", "cumulative_rel_tmax",
                   "master_seed", "state_index", "instance_count"};
    else
        columns = {"schema_version", "grid_key", "grid_value", "status", "wall_seconds",
                   "scenario_id", "noise", "observable_label", "gamma", "purity", "mean_delta_sq",
                   "se_delta_sq", "analytic_delta_sq", "empirical_rel", "analytic_rel",
                   "master_seed", "state_index", "instance_count"};

    SweepResult result{.grid_values = values,
                       .point_ok = {},
                       .point_errors = {},
                       .point_seconds = {},
                       .combined_summary = CsvTable(columns),
                       .empty = values.empty()};
    if (values.empty()) return result;

    for (std::size_t i = 0; i < values.size(); ++i) {
        Config point_config = base_config;
        point_config.set(grid_key, values[i]);
        const auto start = std::chrono::steady_clock::now();
        bool ok = true;
        std::string error;
        try {
            const std::string point_id = fallback_id + "_" + grid_key + "_" + values[i];
            Scenario scenario = scenario_from_config(point_config, point_id);
            scenario.id = point_id;
            if (study == "dynamics") {
                const DynamicsStudyResult point = run_dynamics_study(scenario, threads);
                write_dynamics_outputs(point, out_dir / ("point_" + std::to_string(i)));
                const double elapsed =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                        .count();
                for (const DynamicsSummary& s : point.summary) {
                    auto row = result.combined_summary.row();
                    row.add(std::int64_t{kSchemaVersion})
                        .add(grid_key)
                        .add(values[i])
                        .add(std::string("ok"))
                        .add(elapsed)
                        .add(scenario.id)
                        .add(s.perturbation)
                        .add(s.label)
                        .add(s.purity)
                        .add(s.diag_purity)
                        .add(s.prediction_rel)
                        .add(s.plateau_rel)
                        .add(s.plateau_rel_se)
                        .add(s.cumulative_rel_tmax)
                        .add(scenario.master_seed)
                        .add(std::int64_t{-1})
                        .add(std::int64_t{scenario.instances});
                    result.combined_summary.commit(std::move(row));
                }
            } else if (study == "static") {
                const StaticStudyResult point = run_static_study(scenario, point_config, threads);
                write_static_outputs(point, out_dir / ("point_" + std::to_string(i)));
                const double elapsed =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                        .count();
                for (const StaticStudyRow& s : point.rows) {
                    auto row = result.combined_summary.row();
                    row.add(std::int64_t{kSchemaVersion})
                        .add(grid_key)
                        .add(values[i])
                        .add(std::string("ok"))
                        .add(elapsed)
                        .add(scenario.id)
                        .add(point.noise)
                        .add(s.label)
                        .add(s.gamma)
                        .add(s.purity)
                        .add(s.mean_delta_sq)
                        .add(s.se_delta_sq)
                        .add(s.analytic_delta_sq)
                        .add(s.empirical_rel)
                        .add(s.analytic_rel)
                        .add(scenario.master_seed)
                        .add(std::int64_t{-1})
                        .add(std::int64_t{s.samples});
                    result.combined_summary.commit(std::move(row));
                }
            } else {
                throw ConfigError("sweep: field 'sweep.study': unknown value '" + study + "'");
            }
        } catch (const std::exception& e) {
            ok = false;
            error = e.what();
        }
        const auto end = std::chrono::steady_clock::now();
        result.point_ok.push_back(ok);
        result.point_errors.push_back(error);
        result.point_seconds.push_back(std::chrono::duration<double>(end - start).count());
    }
    return result;
}

void write_manifest(const std::filesystem::path& path, const std::vector<std::string>& lines) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::runtime_error("manifest: cannot open " + path.string());
    for (const std::string& line : lines) file << line << "\n";
}

}  // namespace aqsens::runner
