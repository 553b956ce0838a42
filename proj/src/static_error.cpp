#include "aqsens/static_error.hpp"

#include <cmath>

#include "aqsens/parallel.hpp"

namespace aqsens {

namespace {

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_and_se(const std::vector<double>& xs) {
    const auto n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (const double x : xs) mean += x;
    mean /= n;
    double var = 0.0;
    for (const double x : xs) var += (x - mean) * (x - mean);
    var /= (n - 1.0);
    return {mean, std::sqrt(var / n)};
}

}  // namespace

PerturbedStatePair make_perturbed_pair(const PureState& psi, const PureState& companion,
                                       double gamma) {
    if (psi.dim() != companion.dim())
        throw std::invalid_argument("make_perturbed_pair: dimension mismatch");
    if (gamma < 0) throw std::invalid_argument("make_perturbed_pair: gamma >= 0 required");
    const Complex overlap = psi.amplitudes().dot(companion.amplitudes());
    if (std::abs(overlap) > tol::orthogonality)
        throw std::invalid_argument("make_perturbed_pair: companion not orthogonal within 1e-12");
    const double normalizer = 1.0 / std::sqrt(1.0 + gamma * gamma);
    PureState simulated = PureState::normalized(
        normalizer * (psi.amplitudes() + gamma * companion.amplitudes()));
    return {psi, companion, gamma, normalizer, std::move(simulated)};
}

double delta(const HermitianOperator& a, const PerturbedStatePair& pair) {
    return expectation(a, pair.ideal) - expectation(a, pair.simulated);
}

double delta_expanded(const HermitianOperator& a, const PerturbedStatePair& pair) {
    const double n_sq = pair.normalizer * pair.normalizer;
    const double mean_ideal = expectation(a, pair.ideal);
    const double mean_perp = expectation(a, pair.companion);
    const Complex cross = pair.companion.amplitudes().dot(a.matrix() * pair.ideal.amplitudes());
    return n_sq * (pair.gamma * pair.gamma * (mean_ideal - mean_perp) -
                   2.0 * pair.gamma * cross.real());
}

double analytic_delta_sq(const HermitianOperator& a, double gamma) {
    const auto d = static_cast<double>(a.dim());
    const double tr = a.matrix().trace().real();
    const double tr_sq = a.matrix().squaredNorm();  // Tr A^2 for Hermitian A
    const double n_sq = 1.0 / (1.0 + gamma * gamma);
    return 2.0 * gamma * gamma * n_sq / (d * d - 1.0) * (tr_sq - tr * tr / d);
}

double relative_delta(const ObservableReport& report, double gamma) {
    const auto d = static_cast<double>(report.shifted.dim());
    const double g_sq = gamma * gamma / (1.0 + gamma * gamma);
    return std::sqrt(2.0 * d * d / (d * d - 1.0) * g_sq * (report.purity - 1.0 / d));
}

HaarDeltaStats haar_average_delta_sq(const HermitianOperator& a, double gamma, int n_samples,
                                     const SeedSpec& seed, int threads) {
    if (n_samples < 100)
        throw std::invalid_argument("haar_average_delta_sq: n_samples >= 100 required");
    std::vector<double> deltas(static_cast<std::size_t>(n_samples));
    parallel_for(n_samples, threads, [&](int i) {
        const auto pair_states = haar_state_pair(seed.child(static_cast<std::uint64_t>(i)), a.dim());
        const PerturbedStatePair pair =
            make_perturbed_pair(pair_states.first, pair_states.second, gamma);
        deltas[static_cast<std::size_t>(i)] = delta(a, pair);
    });
    std::vector<double> squares(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i) squares[i] = deltas[i] * deltas[i];
    const MeanSe first = mean_and_se(deltas);
    const MeanSe second = mean_and_se(squares);
    return {first.mean, first.se, second.mean, second.se, analytic_delta_sq(a, gamma), n_samples};
}

double mixed_delta(const HermitianOperator& a, const PureState& psi, const MixedNoiseSpec& spec,
                   const PureState* companion) {
    if (spec.gamma < 0 || spec.gamma > 1)
        throw std::invalid_argument("mixed_delta: gamma must lie in [0, 1]");
    const double mean = expectation(a, psi);
    switch (spec.kind) {
        case MixedNoiseKind::Depolarizing: {
            const double haar_mean = a.matrix().trace().real() / static_cast<double>(a.dim());
            return spec.gamma * (mean - haar_mean);
        }
        case MixedNoiseKind::OrthogonalMixture: {
            if (companion == nullptr)
                throw std::invalid_argument("mixed_delta: orthogonal mixture needs a companion");
            return spec.gamma * (mean - expectation(a, *companion));
        }
    }
    throw std::logic_error("mixed_delta: unknown noise kind");
}

double mixed_relative_error(const ObservableReport& report, const MixedNoiseSpec& spec) {
    if (spec.gamma < 0 || spec.gamma > 1)
        throw std::invalid_argument("mixed_relative_error: gamma must lie in [0, 1]");
    const auto d = static_cast<double>(report.shifted.dim());
    const double excess = report.purity - 1.0 / d;
    switch (spec.kind) {
        case MixedNoiseKind::Depolarizing:
            return std::sqrt(d / (d + 1.0) * spec.gamma * spec.gamma * excess);
        case MixedNoiseKind::OrthogonalMixture:
            return std::sqrt(2.0 * d * d / (d * d - 1.0) * spec.gamma * spec.gamma * excess);
    }
    throw std::logic_error("mixed_relative_error: unknown noise kind");
}

MixedMcStats mixed_haar_study(const ObservableReport& report, const MixedNoiseSpec& spec,
                              int n_samples, const SeedSpec& seed, int threads) {
    if (n_samples < 100)
        throw std::invalid_argument("mixed_haar_study: n_samples >= 100 required");
    const HermitianOperator& a = report.shifted;
    std::vector<double> deltas(static_cast<std::size_t>(n_samples));
    const bool needs_companion = spec.kind == MixedNoiseKind::OrthogonalMixture;
    parallel_for(n_samples, threads, [&](int i) {
        const SeedSpec draw = seed.child(static_cast<std::uint64_t>(i));
        double value = 0.0;
        if (needs_companion) {
            const auto pair_states = haar_state_pair(draw, a.dim());
            value = mixed_delta(a, pair_states.first, spec, &pair_states.second);
        } else {
            const PureState psi = haar_state(draw, a.dim());
            value = mixed_delta(a, psi, spec);
        }
        deltas[static_cast<std::size_t>(i)] = value;
    });
    std::vector<double> squares(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i) squares[i] = deltas[i] * deltas[i];
    const MeanSe first = mean_and_se(deltas);
    const MeanSe stats = mean_and_se(squares);
    const double norm = report.haar_mean();
    MixedMcStats out;
    out.mean_delta = first.mean;
    out.se_delta = first.se;
    out.mean_delta_sq = stats.mean;
    out.se_delta_sq = stats.se;
    out.empirical_rel = std::sqrt(stats.mean) / norm;
    out.empirical_rel_sq_se = stats.se / (norm * norm);
    out.analytic_rel = mixed_relative_error(report, spec);
    out.samples = n_samples;
    return out;
}

VarianceRow variance_study_row(const ObservableReport& report, int particles, double gamma,
                               int n_samples, const SeedSpec& seed, int threads) {
    if (n_samples < 1000)
        throw std::invalid_argument("variance_study_row: n_samples >= 1000 required");
    const HermitianOperator& a = report.shifted;
    const double norm_sq = report.haar_mean() * report.haar_mean();
    std::vector<double> rel_sq(static_cast<std::size_t>(n_samples));
    parallel_for(n_samples, threads, [&](int i) {
        const auto pair_states = haar_state_pair(seed.child(static_cast<std::uint64_t>(i)), a.dim());
        const PerturbedStatePair pair =
            make_perturbed_pair(pair_states.first, pair_states.second, gamma);
        const double d_val = delta(a, pair);
        rel_sq[static_cast<std::size_t>(i)] = d_val * d_val / norm_sq;
    });
    const MeanSe stats = mean_and_se(rel_sq);
    const double analytic = relative_delta(report, gamma);
    VarianceRow row;
    row.label = report.label;
    row.particles = particles;
    row.dim = a.dim();
    row.mean_rel_sq = stats.mean;
    row.std_rel_sq = stats.se * std::sqrt(static_cast<double>(n_samples));
    row.analytic_rel_sq = analytic * analytic;
    row.samples = n_samples;
    return row;
}

}  // namespace aqsens
