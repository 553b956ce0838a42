#pragma once

#include <vector>

#include "aqsens/ensembles.hpp"
#include "aqsens/observable_metrics.hpp"

namespace aqsens {

/// Ideal state psi, orthogonal companion, and the normalized perturbed
/// state N(gamma) (psi + gamma psi_perp).
struct PerturbedStatePair {
    PureState ideal;
    PureState companion;
    double gamma = 0.0;
    double normalizer = 1.0;  // (1 + gamma^2)^(-1/2)
    PureState simulated;
};

PerturbedStatePair make_perturbed_pair(const PureState& psi, const PureState& companion,
                                       double gamma);

/// Simulation error <psi|A|psi> - <psi_sim|A|psi_sim>.
double delta(const HermitianOperator& a, const PerturbedStatePair& pair);

/// Same quantity through the expanded form
/// N^2 [gamma^2 (<A> - <A>_perp) - 2 gamma Re <psi_perp|A|psi>],
/// kept as an independent cross-check route.
double delta_expanded(const HermitianOperator& a, const PerturbedStatePair& pair);

/// Closed form for the Haar average of delta(A)^2 at fixed gamma:
/// 2 gamma^2 / ((1+gamma^2)(d^2-1)) (Tr A^2 - (Tr A)^2 / d).
double analytic_delta_sq(const HermitianOperator& a, double gamma);

/// Closed form for the average relative error
/// sqrt( 2d^2/(d^2-1) gamma^2/(1+gamma^2) (purity - 1/d) ), evaluated on
/// the shifted observable of the report.
double relative_delta(const ObservableReport& report, double gamma);

struct HaarDeltaStats {
    double mean_delta = 0.0;
    double se_delta = 0.0;
    double mean_delta_sq = 0.0;
    double se_delta_sq = 0.0;
    double analytic = 0.0;  // closed-form companion for mean_delta_sq
    int samples = 0;
};

/// Monte-Carlo average of delta(A)^2 over jointly Haar-drawn
/// (psi, psi_perp) pairs; the pair is resampled per draw through one Haar
/// unitary applied to two fixed basis vectors.
HaarDeltaStats haar_average_delta_sq(const HermitianOperator& a, double gamma, int n_samples,
                                     const SeedSpec& seed, int threads = 1);

enum class MixedNoiseKind { Depolarizing, OrthogonalMixture };

struct MixedNoiseSpec {
    MixedNoiseKind kind = MixedNoiseKind::Depolarizing;
    double gamma = 0.0;  // in [0, 1]
};

/// <A> - Tr(rho_sim A) for the mixed-state models. The orthogonal-mixture
/// model needs the companion state.
double mixed_delta(const HermitianOperator& a, const PureState& psi, const MixedNoiseSpec& spec,
                   const PureState* companion = nullptr);

/// Closed-form relative error of the mixed models:
/// depolarizing sqrt(d/(d+1) gamma^2 (purity - 1/d));
/// orthogonal mixture sqrt(2d^2/(d^2-1) gamma^2 (purity - 1/d)).
double mixed_relative_error(const ObservableReport& report, const MixedNoiseSpec& spec);

struct MixedMcStats {
    double mean_delta = 0.0;
    double se_delta = 0.0;
    double mean_delta_sq = 0.0;
    double se_delta_sq = 0.0;
    double empirical_rel = 0.0;     // sqrt(mean delta^2) / haar_mean
    double empirical_rel_sq_se = 0.0;
    double analytic_rel = 0.0;
    int samples = 0;
};

/// Monte-Carlo relative error of a mixed model over Haar states.
MixedMcStats mixed_haar_study(const ObservableReport& report, const MixedNoiseSpec& spec,
                              int n_samples, const SeedSpec& seed, int threads = 1);

struct VarianceRow {
    std::string label;
    int particles = 0;
    Index dim = 0;
    double mean_rel_sq = 0.0;     // empirical mean of delta_rel^2
    double std_rel_sq = 0.0;      // empirical standard deviation of delta_rel^2
    double analytic_rel_sq = 0.0;
    int samples = 0;
};

/// Empirical mean and spread of delta_rel(A)^2 for one observable at one
/// system size; feeds the fluctuation-versus-size tables.
VarianceRow variance_study_row(const ObservableReport& report, int particles, double gamma,
                               int n_samples, const SeedSpec& seed, int threads = 1);

}  // namespace aqsens
