#pragma once

#include <span>
#include <vector>

#include "aqsens/ensembles.hpp"
#include "aqsens/observable_metrics.hpp"

namespace aqsens {

/// Uniform time grid 0 = t_0 < ... < t_K with K = steps intervals.
struct TimeGrid {
    double t_max = 0.0;
    int steps = 0;

    TimeGrid() = default;
    TimeGrid(double t_max_, int steps_);
    double dt() const { return t_max / steps; }
    int points() const { return steps + 1; }
    std::vector<double> times() const;
};

/// Exact perturbed-evolution scenario: the ideal Hamiltonian (spectrum
/// cached), a perturbation model, the number of V draws to average over,
/// and the time grid.
struct DynamicsScenario {
    HermitianOperator hamiltonian;
    PerturbationModel perturbation;
    int n_instances = 50;
    TimeGrid grid;
};

/// Per-instance states of one scenario: element j holds the d x K matrix
/// of states evolved under H + lambda V_j (fresh eigendecomposition per
/// instance). Intended for modest sizes; the series drivers below stream
/// instead of storing.
std::vector<Matrix> perturbed_states(const DynamicsScenario& scenario, const PureState& psi0,
                                     const SeedSpec& seed);

/// V-averaged density operator at one grid time.
DensityOperator v_averaged_state(const DynamicsScenario& scenario, const PureState& psi0,
                                 const SeedSpec& seed, int time_index);

/// Error series of one observable under one initial state.
struct ObservableSeries {
    std::string label;
    std::vector<double> ideal;          // <A>(t) under H alone
    std::vector<double> sim_mean;       // [<A>_sim(t)]_V over instances
    std::vector<double> sim_se;         // standard error over instances
    std::vector<double> delta;          // ideal - sim_mean
    std::vector<double> analytic_delta; // (1 - f(lambda t)) (ideal - diag average)
    std::vector<double> cumulative;     // running RMS, aligned with times[1..]
    double diag_average = 0.0;          // Tr(rho_D A_s)
    double tail_rms_sq = 0.0;           // windowed mean of delta^2 over [t_tail, t_max]
    double asymptotic_sq = 0.0;         // double sum over eigenpair off-diagonals
    bool gap_collision = false;
};

/// Infidelity series 1 - [|<psi(t)|psi_sim(t)>|^2]_V with the analytic
/// companion (1 - f)(1 - S0).
struct InfidelitySeries {
    std::vector<double> exact;
    std::vector<double> se;
    std::vector<double> analytic;
    double s0 = 0.0;
};

struct StateRunResult {
    std::vector<double> times;
    DiagonalEnsemble diagonal;
    std::vector<ObservableSeries> observables;
    InfidelitySeries infidelity;
};

/// Runs the full scenario for one initial state: exact evolution per V
/// instance (parallel over instances, reduced in instance order), the
/// first-order prediction layer, cumulative errors, and the stationary
/// tail estimate over [tail_start, t_max].
StateRunResult run_single_state(const DynamicsScenario& scenario, const PureState& psi0,
                                std::span<const ObservableReport> observables,
                                const SeedSpec& seed, const CharacteristicFunction& f,
                                double tail_start, int threads = 1);

/// Asymptotic squared error of Eq.-style double sum
/// sum_{n != m} |b_n|^2 |b_m|^2 |A_nm|^2 in the H eigenbasis, with a flag
/// raised when two distinct eigenvalue gaps collide within 1e-8 (the
/// dephasing argument then no longer separates the pairs).
struct AsymptoticError {
    double value_sq = 0.0;
    bool gap_collision = false;
};

AsymptoticError asymptotic_error(const HermitianOperator& a, const HermitianOperator& hamiltonian,
                                 const PureState& psi0);

/// Haar-averaged asymptotic relative error
/// sqrt( d/(d+1) (purity - diag_purity) ); requires diag_purity in the
/// report.
double asymptotic_haar_error(const ObservableReport& report);

/// Cumulative root-mean-square error: E(t_k) = sqrt( (1/t_k) int_0^{t_k}
/// delta^2 ), trapezoid rule, skipping the t = 0 point. Output index i
/// corresponds to times[i + 1].
std::vector<double> cumulative_rms(std::span<const double> delta, std::span<const double> times);

/// Mean of delta^2 over [t_start, t_max] by trapezoid quadrature; the
/// stationary estimate used for plateau extraction.
double tail_mean_square(std::span<const double> delta, std::span<const double> times,
                        double t_start);

/// Least-squares fit of lambda >= 0 in (1 - exp(-(lambda t)^2))(1 - S0):
/// golden-section search on log lambda in [1e-5, 1] after a coarse
/// bracketing scan. A flat series (all infidelity below 1e-6) returns
/// lambda = 0 with the flat flag set.
struct LambdaFit {
    double lambda = 0.0;
    double residual = 0.0;
    bool flat = false;
    std::vector<double> curve;
};

LambdaFit fit_lambda(std::span<const double> times, std::span<const double> infidelity, double s0);

/// Gap-collision scan: true when two distinct ordered eigenvalue pairs
/// have gaps within 1e-8 of each other.
bool has_gap_collision(const HermitianOperator& hamiltonian);

}  // namespace aqsens
