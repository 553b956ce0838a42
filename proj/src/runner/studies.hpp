#pragma once

#include <filesystem>

#include "runner/csv.hpp"
#include "runner/scenario.hpp"

namespace aqsens::runner {

/// Per-(perturbation, observable) summary of a dynamics study.
struct DynamicsSummary {
    std::string perturbation;
    std::string label;
    double purity = 0.0;
    double diag_purity = 0.0;
    double prediction_rel = 0.0;       // Haar asymptotic prediction
    double plateau_rel = 0.0;          // stationary-window estimate
    double plateau_rel_se = 0.0;       // delta-method standard error
    double plateau_rel_sq_mean = 0.0;  // ensemble mean of relative tail delta^2
    double plateau_rel_sq_se = 0.0;
    double cumulative_rel_tmax = 0.0;  // from-zero RMS at t_max, relative
    double cumulative_rel_tmax_se = 0.0;
    double cumulative_rel_sq_mean = 0.0;
    double cumulative_rel_sq_se = 0.0;
    double asymptotic_single_rel_sq = 0.0;  // ensemble mean of the double-sum value
    bool gap_collision = false;
    bool hamiltonian_degenerate = false;
};

struct DynamicsEnsembleCurve {
    std::string perturbation;
    std::string label;
    double purity = 0.0;
    double diag_purity = 0.0;
    std::vector<double> times;     // decimated
    std::vector<double> e_rel;     // ensemble cumulative relative error
    std::vector<double> e_rel_se;
    std::vector<double> delta_mean;     // ensemble mean of delta
    std::vector<double> delta_se;       // instance+state combined spread (single state: instance se)
    std::vector<double> analytic_delta; // ensemble mean of the first-order prediction
};

struct DynamicsInfidelityCurve {
    std::string perturbation;
    std::vector<double> times;  // decimated
    std::vector<double> exact;
    std::vector<double> se;
    std::vector<double> analytic;
    double s0_mean = 0.0;
};

struct DynamicsStudyResult {
    Scenario scenario;
    std::vector<DynamicsSummary> summary;
    std::vector<DynamicsEnsembleCurve> curves;
    std::vector<DynamicsInfidelityCurve> infidelity;
    double quadrature_drift = 0.0;  // relative change of E(t_max) under step halving
};

/// Runs the dynamics study: every perturbation kind in the scenario,
/// n_states initial states, instances averaged per state (parallel over
/// instances; reductions in fixed order).
DynamicsStudyResult run_dynamics_study(const Scenario& scenario, int threads);

/// Writes curves/delta/infidelity/summary CSVs plus the manifest; returns
/// the written file names.
std::vector<std::filesystem::path> write_dynamics_outputs(const DynamicsStudyResult& result,
                                                          const std::filesystem::path& out_dir);

struct StaticStudyRow {
    std::string label;
    int particles = 0;
    Index dim = 0;
    double gamma = 0.0;
    double purity = 0.0;
    double mean_delta = 0.0;
    double se_delta = 0.0;
    double mean_delta_sq = 0.0;
    double se_delta_sq = 0.0;
    double analytic_delta_sq = 0.0;
    double empirical_rel = 0.0;
    double analytic_rel = 0.0;
    int samples = 0;
};

struct StaticStudyResult {
    Scenario scenario;
    double gamma = 0.0;
    int samples = 0;
    std::string noise;  // pure-gamma | depolarizing | orthogonal-mixture
    std::vector<StaticStudyRow> rows;
};

StaticStudyResult run_static_study(const Scenario& scenario, const Config& config, int threads);

std::vector<std::filesystem::path> write_static_outputs(const StaticStudyResult& result,
                                                        const std::filesystem::path& out_dir);

struct SweepResult {
    std::vector<std::string> grid_values;
    std::vector<bool> point_ok;
    std::vector<std::string> point_errors;
    std::vector<double> point_seconds;
    CsvTable combined_summary;
    bool empty = false;
};

/// Grid sweep over one configuration key; per-point failures are isolated
/// and summarized.
SweepResult run_sweep(const Config& base_config, const std::string& fallback_id,
                      const std::filesystem::path& out_dir, int threads);

void write_manifest(const std::filesystem::path& path, const std::vector<std::string>& lines);

}  // namespace aqsens::runner
