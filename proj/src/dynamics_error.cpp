#include "aqsens/dynamics_error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "aqsens/parallel.hpp"

namespace aqsens {

namespace {

HermitianOperator perturbed_hamiltonian(const DynamicsScenario& scenario, const SeedSpec& seed,
                                        int instance) {
    const HermitianOperator v = sample_perturbation(
        scenario.perturbation, seed.child(static_cast<std::uint64_t>(instance)),
        scenario.hamiltonian.dim());
    return eigendecompose(HermitianOperator(scenario.hamiltonian.matrix() +
                                            scenario.perturbation.lambda * v.matrix()));
}

struct MeanSeSeries {
    std::vector<double> mean;
    std::vector<double> se;
};

MeanSeSeries reduce_instances(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.size();
    const std::size_t k = rows.front().size();
    MeanSeSeries out;
    out.mean.assign(k, 0.0);
    out.se.assign(k, 0.0);
    for (const auto& row : rows)
        for (std::size_t i = 0; i < k; ++i) out.mean[i] += row[i];
    for (std::size_t i = 0; i < k; ++i) out.mean[i] /= static_cast<double>(n);
    if (n > 1) {
        for (const auto& row : rows)
            for (std::size_t i = 0; i < k; ++i) {
                const double dev = row[i] - out.mean[i];
                out.se[i] += dev * dev;
            }
        for (std::size_t i = 0; i < k; ++i)
            out.se[i] = std::sqrt(out.se[i] / static_cast<double>(n - 1) / static_cast<double>(n));
    }
    return out;
}

}  // namespace

TimeGrid::TimeGrid(double t_max_, int steps_) : t_max(t_max_), steps(steps_) {
    if (!(t_max > 0)) throw std::invalid_argument("TimeGrid: t_max must be positive");
    if (steps < 2) throw std::invalid_argument("TimeGrid: at least 2 steps required");
}

std::vector<double> TimeGrid::times() const {
    std::vector<double> out(static_cast<std::size_t>(points()));
    for (int k = 0; k <= steps; ++k)
        out[static_cast<std::size_t>(k)] = t_max * static_cast<double>(k) / steps;
    return out;
}

std::vector<Matrix> perturbed_states(const DynamicsScenario& scenario, const PureState& psi0,
                                     const SeedSpec& seed) {
    const std::vector<double> times = scenario.grid.times();
    std::vector<Matrix> out;
    out.reserve(static_cast<std::size_t>(scenario.n_instances));
    for (int j = 0; j < scenario.n_instances; ++j) {
        const HermitianOperator h = perturbed_hamiltonian(scenario, seed, j);
        out.push_back(evolve_on_grid(h, psi0, times));
    }
    return out;
}

DensityOperator v_averaged_state(const DynamicsScenario& scenario, const PureState& psi0,
                                 const SeedSpec& seed, int time_index) {
    const std::vector<double> times = scenario.grid.times();
    if (time_index < 0 || time_index >= scenario.grid.points())
        throw std::invalid_argument("v_averaged_state: time index out of range");
    const double t = times[static_cast<std::size_t>(time_index)];
    Matrix acc = Matrix::Zero(scenario.hamiltonian.dim(), scenario.hamiltonian.dim());
    for (int j = 0; j < scenario.n_instances; ++j) {
        const HermitianOperator h = perturbed_hamiltonian(scenario, seed, j);
        const PureState state = evolve(h, psi0, t);
        acc += state.amplitudes() * state.amplitudes().adjoint();
    }
    return DensityOperator(acc / static_cast<double>(scenario.n_instances));
}

StateRunResult run_single_state(const DynamicsScenario& scenario, const PureState& psi0,
                                std::span<const ObservableReport> observables,
                                const SeedSpec& seed, const CharacteristicFunction& f,
                                double tail_start, int threads) {
    if (scenario.n_instances < 1)
        throw std::invalid_argument("run_single_state: n_instances >= 1 required");
    if (scenario.hamiltonian.dim() != psi0.dim())
        throw std::invalid_argument("run_single_state: dimension mismatch");

    const std::vector<double> times = scenario.grid.times();
    const std::size_t n_t = times.size();
    const std::size_t n_obs = observables.size();

    const Matrix ideal_states = evolve_on_grid(scenario.hamiltonian, psi0, times);

    StateRunResult result;
    result.times = times;
    result.diagonal = diagonal_ensemble(scenario.hamiltonian, psi0);

    // per-instance expectation series and squared overlaps with the ideal
    std::vector<std::vector<std::vector<double>>> sim(
        n_obs, std::vector<std::vector<double>>(
                   static_cast<std::size_t>(scenario.n_instances)));
    std::vector<std::vector<double>> overlap_sq(
        static_cast<std::size_t>(scenario.n_instances));

    parallel_for(scenario.n_instances, threads, [&](int j) {
        const HermitianOperator h = perturbed_hamiltonian(scenario, seed, j);
        const Matrix states = evolve_on_grid(h, psi0, times);
        for (std::size_t a = 0; a < n_obs; ++a)
            sim[a][static_cast<std::size_t>(j)] =
                expectation_on_grid(observables[a].shifted, states);
        std::vector<double> ov(n_t);
        for (std::size_t k = 0; k < n_t; ++k) {
            const Complex o = ideal_states.col(static_cast<Index>(k))
                                  .dot(states.col(static_cast<Index>(k)));
            ov[k] = std::norm(o);
        }
        overlap_sq[static_cast<std::size_t>(j)] = std::move(ov);
    });

    // characteristic function on the grid (shared by every observable)
    std::vector<double> one_minus_f(n_t);
    for (std::size_t k = 0; k < n_t; ++k)
        one_minus_f[k] = 1.0 - f(scenario.perturbation.lambda * times[k]).value;

    for (std::size_t a = 0; a < n_obs; ++a) {
        const ObservableReport& report = observables[a];
        ObservableSeries series;
        series.label = report.label;
        series.ideal = expectation_on_grid(report.shifted, ideal_states);
        const MeanSeSeries reduced = reduce_instances(sim[a]);
        series.sim_mean = reduced.mean;
        series.sim_se = reduced.se;
        series.delta.resize(n_t);
        for (std::size_t k = 0; k < n_t; ++k)
            series.delta[k] = series.ideal[k] - series.sim_mean[k];
        series.diag_average =
            infinite_time_average(report.shifted, scenario.hamiltonian, psi0).value;
        series.analytic_delta.resize(n_t);
        for (std::size_t k = 0; k < n_t; ++k)
            series.analytic_delta[k] = one_minus_f[k] * (series.ideal[k] - series.diag_average);
        series.cumulative = cumulative_rms(series.delta, times);
        series.tail_rms_sq = tail_mean_square(series.delta, times, tail_start);
        const AsymptoticError asym =
            asymptotic_error(report.shifted, scenario.hamiltonian, psi0);
        series.asymptotic_sq = asym.value_sq;
        series.gap_collision = asym.gap_collision;
        result.observables.push_back(std::move(series));
    }

    const MeanSeSeries fidelity = reduce_instances(overlap_sq);
    result.infidelity.exact.resize(n_t);
    result.infidelity.se = fidelity.se;
    result.infidelity.s0 = result.diagonal.ipr;
    result.infidelity.analytic.resize(n_t);
    for (std::size_t k = 0; k < n_t; ++k) {
        result.infidelity.exact[k] = 1.0 - fidelity.mean[k];
        result.infidelity.analytic[k] = one_minus_f[k] * (1.0 - result.diagonal.ipr);
    }
    return result;
}

AsymptoticError asymptotic_error(const HermitianOperator& a, const HermitianOperator& hamiltonian,
                                 const PureState& psi0) {
    if (a.dim() != hamiltonian.dim() || a.dim() != psi0.dim())
        throw std::invalid_argument("asymptotic_error: dimension mismatch");
    const Matrix& u = hamiltonian.spectrum().vectors;
    const Matrix rotated = u.adjoint() * a.matrix() * u;
    const RealVector populations = diagonal_ensemble(hamiltonian, psi0).populations;
    const Index d = a.dim();
    double total = 0.0;
    for (Index n = 0; n < d; ++n)
        for (Index m = 0; m < d; ++m)
            if (n != m) total += populations(n) * populations(m) * std::norm(rotated(n, m));
    return {total, has_gap_collision(hamiltonian)};
}

double asymptotic_haar_error(const ObservableReport& report) {
    if (!report.diag_purity)
        throw std::invalid_argument("asymptotic_haar_error: report lacks diag_purity");
    const auto d = static_cast<double>(report.shifted.dim());
    const double excess = report.purity - *report.diag_purity;
    return std::sqrt(d / (d + 1.0) * std::max(0.0, excess));
}

std::vector<double> cumulative_rms(std::span<const double> delta, std::span<const double> times) {
    if (delta.size() != times.size() || times.size() < 2)
        throw std::invalid_argument("cumulative_rms: need matching series with >= 2 points");
    std::vector<double> out(times.size() - 1);
    double integral = 0.0;
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double dt = times[k] - times[k - 1];
        integral += 0.5 * dt * (delta[k - 1] * delta[k - 1] + delta[k] * delta[k]);
        out[k - 1] = std::sqrt(integral / times[k]);
    }
    return out;
}

double tail_mean_square(std::span<const double> delta, std::span<const double> times,
                        double t_start) {
    if (delta.size() != times.size() || times.size() < 2)
        throw std::invalid_argument("tail_mean_square: need matching series with >= 2 points");
    std::size_t k0 = 0;
    while (k0 < times.size() && times[k0] < t_start) ++k0;
    if (k0 + 1 >= times.size())
        throw std::invalid_argument("tail_mean_square: window start beyond the grid");
    double integral = 0.0;
    for (std::size_t k = k0 + 1; k < times.size(); ++k) {
        const double dt = times[k] - times[k - 1];
        integral += 0.5 * dt * (delta[k - 1] * delta[k - 1] + delta[k] * delta[k]);
    }
    return integral / (times.back() - times[k0]);
}

LambdaFit fit_lambda(std::span<const double> times, std::span<const double> infidelity,
                     double s0) {
    if (times.size() != infidelity.size() || times.size() < 5)
        throw std::invalid_argument("fit_lambda: need >= 5 matching samples");
    const double depth = 1.0 - s0;

    double max_inf = 0.0;
    for (const double v : infidelity) max_inf = std::max(max_inf, std::abs(v));
    if (max_inf < 1e-6) {
        LambdaFit out;
        out.flat = true;
        out.curve.assign(times.size(), 0.0);
        return out;
    }

    const auto residual = [&](double log_lambda) {
        const double lam = std::exp(log_lambda);
        double acc = 0.0;
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double tau = lam * times[k];
            const double model = (1.0 - std::exp(-tau * tau)) * depth;
            const double dev = infidelity[k] - model;
            acc += dev * dev;
        }
        return acc;
    };

    const double lo = std::log(1e-5);
    const double hi = std::log(1.0);
    // coarse scan brackets the basin, golden section refines inside it
    constexpr int kScan = 64;
    double best = lo;
    double best_val = residual(lo);
    for (int i = 1; i <= kScan; ++i) {
        const double x = lo + (hi - lo) * i / kScan;
        const double v = residual(x);
        if (v < best_val) {
            best_val = v;
            best = x;
        }
    }
    const double step = (hi - lo) / kScan;
    double a = std::max(lo, best - step);
    double b = std::min(hi, best + step);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = residual(c);
    double fd = residual(d);
    while (b - a > 1e-12) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = residual(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = residual(d);
        }
    }
    LambdaFit out;
    out.lambda = std::exp(0.5 * (a + b));
    out.residual = residual(0.5 * (a + b));
    out.curve.resize(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double tau = out.lambda * times[k];
        out.curve[k] = (1.0 - std::exp(-tau * tau)) * depth;
    }
    return out;
}

bool has_gap_collision(const HermitianOperator& hamiltonian) {
    const RealVector& values = hamiltonian.spectrum().values;
    const Index d = values.size();
    std::vector<double> gaps;
    gaps.reserve(static_cast<std::size_t>(d * (d - 1)));
    for (Index n = 0; n < d; ++n)
        for (Index m = 0; m < d; ++m)
            if (n != m) gaps.push_back(values(n) - values(m));
    std::sort(gaps.begin(), gaps.end());
    for (std::size_t i = 1; i < gaps.size(); ++i)
        if (gaps[i] - gaps[i - 1] < tol::gap_collision) return true;
    return false;
}

}  // namespace aqsens
