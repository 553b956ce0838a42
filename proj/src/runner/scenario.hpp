#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aqsens/dynamics_error.hpp"
#include "runner/config.hpp"

namespace aqsens::runner {

enum class ModelKind { Lmg, Tim };
enum class EnsembleKind { Haar, SpinCoherent, Dicke, UpX, DownX };

/// Typed scenario assembled from a configuration file. Field and time
/// values are expressed in coupling units (energies in units of the
/// coupling, times in its inverse).
struct Scenario {
    std::string id;
    ModelKind model = ModelKind::Lmg;
    SpinSystemSpec spec;
    double field = 0.0;
    double coupling = 1.0;
    EnsembleKind ensemble = EnsembleKind::Haar;
    int n_states = 1;
    std::vector<PerturbationKind> perturbations;
    double lambda = 0.0;
    std::vector<std::string> observable_descriptors;
    TimeGrid grid;
    int instances = 50;
    std::uint64_t master_seed = 0;
    double tail_start = 0.0;  // stationary-window start; 0 = auto
    int curve_stride = 1;
    int char_fn_samples = 100000;  // empirical characteristic function draws

    /// Resolved stationary-window start: explicit value, else
    /// min(3/lambda, t_max/2).
    double resolved_tail_start() const;
};

Scenario scenario_from_config(const Config& config, const std::string& fallback_id);

/// The scenario's ideal Hamiltonian, decomposed.
HermitianOperator build_hamiltonian(const Scenario& scenario);

/// Initial state number `index` of the scenario's ensemble. Fixed-state
/// ensembles (up-x, down-x) ignore the index.
PureState build_initial_state(const Scenario& scenario, const SeedSpec& seed, int index);

/// Observable reports for the scenario's descriptor list.
/// Descriptors:
///   spin-power:<axis>:<k>      A = S_axis^k
///   sx-projector:<m>           A = |m_x><m_x|   (symmetric subspace)
///   partition-projector:<k>    A = |up_k><up_k| (x) identity (full space)
///   pauli-weight:<w>           centered sigma_x string of weight w
///   pauli:<axis><site>[,...]   explicit Pauli string, 1-based sites
std::vector<ObservableReport> build_observables(const Scenario& scenario,
                                                const HermitianOperator* hamiltonian);

HermitianOperator build_observable(const std::string& descriptor, const SpinSystemSpec& spec);

PerturbationModel make_perturbation(const Scenario& scenario, PerturbationKind kind);

std::string perturbation_name(PerturbationKind kind);
std::string ensemble_name(EnsembleKind kind);

}  // namespace aqsens::runner
