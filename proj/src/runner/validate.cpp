#include "runner/validate.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "aqsens/dynamics_error.hpp"
#include "aqsens/parallel.hpp"
#include "aqsens/static_error.hpp"
#include "runner/scenario.hpp"

namespace aqsens::runner {

namespace {

struct MomentAccumulator {
    double sum = 0.0;
    double sum_sq = 0.0;
    int n = 0;
    void add(double x) {
        sum += x;
        sum_sq += x * x;
        ++n;
    }
    double mean() const { return sum / n; }
    double se() const {
        const double m = mean();
        return std::sqrt(std::max(0.0, (sum_sq - n * m * m) / (n - 1)) / n);
    }
};

class Suite {
  public:
    Suite(std::uint64_t master_seed, int threads)
        : root_{master_seed, {}}, threads_(threads) {}

    void sigma_check(const std::string& name, double observed, double expected, double se,
                     std::vector<std::string> covers) {
        const double dev = std::abs(observed - expected);
        checks_.push_back({name, dev <= 3.0 * se, observed, expected, dev, 3.0 * se, "3sigma",
                           std::move(covers)});
    }

    void exact_check(const std::string& name, double observed, double expected, double tolerance,
                     std::vector<std::string> covers) {
        const double dev = std::abs(observed - expected);
        checks_.push_back(
            {name, dev <= tolerance, observed, expected, dev, tolerance, "exact", std::move(covers)});
    }

    void relative_check(const std::string& name, double observed, double expected, double rel_tol,
                        std::vector<std::string> covers) {
        const double dev = std::abs(observed - expected) / std::abs(expected);
        checks_.push_back(
            {name, dev <= rel_tol, observed, expected, dev, rel_tol, "relative", std::move(covers)});
    }

    SeedSpec seed(std::uint64_t stream) const { return root_.child(stream); }
    int threads() const { return threads_; }
    std::vector<CheckResult> take() { return std::move(checks_); }

  private:
    SeedSpec root_;
    int threads_;
    std::vector<CheckResult> checks_;
};

void haar_moment_checks(Suite& suite) {
    for (const Index d : {Index{4}, Index{16}}) {
        constexpr int kSamples = 100000;
        std::vector<double> second(kSamples), fourth(kSamples);
        const SeedSpec seed = suite.seed(10).child(static_cast<std::uint64_t>(d));
        parallel_for(kSamples, suite.threads(), [&](int i) {
            const Matrix u = haar_unitary(seed.child(static_cast<std::uint64_t>(i)), d);
            const double p = std::norm(u(0, 0));
            second[static_cast<std::size_t>(i)] = p;
            fourth[static_cast<std::size_t>(i)] = p * p;
        });
        MomentAccumulator m2, m4;
        for (const double x : second) m2.add(x);
        for (const double x : fourth) m4.add(x);
        const auto dd = static_cast<double>(d);
        suite.sigma_check("haar-moment-p1-d" + std::to_string(d), m2.mean(), 1.0 / dd, m2.se(),
                          {"haar-moment-p1"});
        suite.sigma_check("haar-moment-p2-d" + std::to_string(d), m4.mean(),
                          2.0 / (dd * (dd + 1.0)), m4.se(), {"haar-moment-p2"});
    }

    // expectation-value moments against the quartic-order integral identities
    constexpr Index kDim = 16;
    const SpinSystemSpec spec = SpinSystemSpec::symmetric(15);
    const ObservableReport report =
        build_report(collective_spin(spec, Axis::X), "spin-power:x:1");
    const Matrix& a = report.shifted.matrix();
    const double tr = real_trace(a);
    const double tr_sq = a.squaredNorm();
    const auto dd = static_cast<double>(kDim);

    constexpr int kSamples = 20000;
    std::vector<double> mean_a(kSamples), mean_a_sq(kSamples), cross(kSamples),
        transition(kSamples), ipr(kSamples);
    const SeedSpec seed = suite.seed(11);
    parallel_for(kSamples, suite.threads(), [&](int i) {
        const auto [psi, perp] = haar_state_pair(seed.child(static_cast<std::uint64_t>(i)), kDim);
        const double ea = expectation(report.shifted, psi);
        const double ep = expectation(report.shifted, perp);
        const Complex t = psi.amplitudes().dot(a * perp.amplitudes());
        mean_a[static_cast<std::size_t>(i)] = ea;
        mean_a_sq[static_cast<std::size_t>(i)] = ea * ea;
        cross[static_cast<std::size_t>(i)] = ea * ep;
        transition[static_cast<std::size_t>(i)] = std::norm(t);
        ipr[static_cast<std::size_t>(i)] = psi.amplitudes().cwiseAbs2().squaredNorm();
    });
    MomentAccumulator s1, s2, s3, s4, s5;
    for (const double x : mean_a) s1.add(x);
    for (const double x : mean_a_sq) s2.add(x);
    for (const double x : cross) s3.add(x);
    for (const double x : transition) s4.add(x);
    for (const double x : ipr) s5.add(x);
    suite.sigma_check("haar-mean-expectation", s1.mean(), tr / dd, s1.se(),
                      {"haar-mean-expectation"});
    suite.sigma_check("haar-second-moment", s2.mean(), (tr_sq + tr * tr) / (dd * (dd + 1.0)),
                      s2.se(), {"haar-second-moment"});
    suite.sigma_check("haar-cross-moment", s3.mean(),
                      (tr * tr - tr_sq / dd) / (dd * dd - 1.0), s3.se(), {"haar-cross-moment"});
    suite.sigma_check("haar-transition-moment", s4.mean(),
                      (tr_sq - tr * tr / dd) / (dd * dd - 1.0), s4.se(),
                      {"haar-transition-moment"});
    suite.sigma_check("haar-ipr-mean", s5.mean(), 2.0 / (dd + 1.0), s5.se(), {"haar-ipr-mean"});
}

void purity_checks(Suite& suite) {
    // full-space collective magnetization, diagonal construction
    for (int n = 2; n <= 12; ++n) {
        const SpinSystemSpec spec = SpinSystemSpec::full(n);
        const ObservableReport report =
            build_report(collective_spin(spec, Axis::Z), "spin-power:z:1");
        const double expected = (n + 1.0) / n * std::pow(2.0, -n);
        suite.exact_check("collective-spin-purity-n" + std::to_string(n), report.purity, expected,
                          1e-10, {"collective-spin-purity"});
    }
    // shifted Pauli strings: purity 2/d independent of the weight
    for (const int n : {2, 6, 10}) {
        const SpinSystemSpec spec = SpinSystemSpec::full(n);
        for (const int w : {1, std::min(3, n)}) {
            std::vector<PauliTerm> terms;
            for (int j = 0; j < w; ++j) terms.push_back({Axis::Z, j + 1});
            Matrix shifted = pauli_string(spec, terms).matrix() +
                             Matrix::Identity(spec.dim(), spec.dim());
            const double purity = psd_purity(HermitianOperator(std::move(shifted)));
            suite.exact_check(
                "pauli-string-purity-n" + std::to_string(n) + "-w" + std::to_string(w), purity,
                std::pow(2.0, -(n - 1)), 1e-10, {"pauli-string-purity"});
        }
    }
    // partition projectors, including the k = 0 identity edge
    for (const int n : {4, 9, 12}) {
        const SpinSystemSpec spec = SpinSystemSpec::full(n);
        for (int k = 0; k <= n; ++k) {
            const double purity = psd_purity(partition_projector_observable(spec, k));
            suite.exact_check(
                "partition-projector-purity-n" + std::to_string(n) + "-k" + std::to_string(k),
                purity, std::pow(2.0, k - n), 1e-10, {"partition-projector-purity"});
        }
    }
    const SpinSystemSpec sym = SpinSystemSpec::symmetric(15);
    const ObservableReport proj = build_report(sx_projector_observable(sym, 0.5),
                                               "sx-projector:0.5");
    suite.exact_check("projector-purity-one", proj.purity, 1.0, 1e-10, {"projector-purity-one"});
}

void static_model_checks(Suite& suite) {
    const SpinSystemSpec spec = SpinSystemSpec::symmetric(15);
    const double gamma = 0.2;
    const std::vector<std::pair<std::string, HermitianOperator>> family = {
        {"spin-power:z:1", spin_power_observable(spec, Axis::Z, 1)},
        {"spin-power:z:2", spin_power_observable(spec, Axis::Z, 2)},
        {"spin-power:z:6", spin_power_observable(spec, Axis::Z, 6)},
        {"sx-projector:0.5", sx_projector_observable(spec, 0.5)},
    };
    std::uint64_t stream = 20;
    for (const auto& [label, op] : family) {
        const ObservableReport report = build_report(op, label);
        const HaarDeltaStats stats = haar_average_delta_sq(report.shifted, gamma, 2000,
                                                           suite.seed(stream++), suite.threads());
        suite.sigma_check("static-second-moment-" + label, stats.mean_delta_sq, stats.analytic,
                          stats.se_delta_sq, {"static-second-moment-closed-form"});
        suite.sigma_check("static-mean-zero-" + label, stats.mean_delta, 0.0, stats.se_delta,
                          {"static-mean-zero"});
        // the relative closed form must match the second-moment form exactly
        const double rel = relative_delta(report, gamma);
        const double norm = report.haar_mean();
        const double from_second =
            std::sqrt(analytic_delta_sq(report.shifted, gamma)) / norm;
        suite.exact_check("static-relative-identity-" + label, rel, from_second, 1e-12,
                          {"static-relative-error-closed-form"});
    }

    // smallest dimension: the d^2 - 1 = 3 denominators stay finite
    Matrix small(2, 2);
    small << 0, 0, 0, 2;
    const ObservableReport tiny = build_report(HermitianOperator(small), "diag(0,2)");
    const HaarDeltaStats tiny_stats =
        haar_average_delta_sq(tiny.shifted, gamma, 2000, suite.seed(29), suite.threads());
    suite.sigma_check("static-second-moment-d2", tiny_stats.mean_delta_sq, tiny_stats.analytic,
                      tiny_stats.se_delta_sq, {"static-second-moment-closed-form"});

    // mixed noise models against their closed forms
    const ObservableReport proj = build_report(sx_projector_observable(spec, 0.5),
                                               "sx-projector:0.5");
    const MixedNoiseSpec depol{MixedNoiseKind::Depolarizing, 0.1};
    const MixedMcStats depol_stats =
        mixed_haar_study(proj, depol, 10000, suite.seed(30), suite.threads());
    const double norm_sq = proj.haar_mean() * proj.haar_mean();
    suite.sigma_check("depolarizing-relative-error", depol_stats.mean_delta_sq,
                      depol_stats.analytic_rel * depol_stats.analytic_rel * norm_sq,
                      depol_stats.se_delta_sq, {"depolarizing-relative-error-closed-form"});
    const MixedNoiseSpec ortho{MixedNoiseKind::OrthogonalMixture, 0.3};
    const MixedMcStats ortho_stats =
        mixed_haar_study(proj, ortho, 10000, suite.seed(31), suite.threads());
    suite.sigma_check("orthogonal-mixture-relative-error", ortho_stats.mean_delta_sq,
                      ortho_stats.analytic_rel * ortho_stats.analytic_rel * norm_sq,
                      ortho_stats.se_delta_sq, {"orthogonal-mixture-relative-error-closed-form"});

    // depolarizing delta is gamma (<A> - Tr A / d) state by state
    const PureState witness = haar_state(suite.seed(32), proj.shifted.dim());
    const double direct = mixed_delta(proj.shifted, witness, depol);
    const double identity =
        depol.gamma * (expectation(proj.shifted, witness) - proj.haar_mean());
    suite.exact_check("depolarizing-delta-identity", direct, identity, 1e-12,
                      {"depolarizing-delta-identity"});
}

void goe_checks(Suite& suite) {
    constexpr int kSamples = 100000;
    constexpr Index kDim = 16;
    const PerturbationModel model = PerturbationModel::goe(1.0);
    std::vector<double> diag_sq(kSamples), off_sq(kSamples);
    const SeedSpec seed = suite.seed(40);
    parallel_for(kSamples, suite.threads(), [&](int i) {
        const HermitianOperator v =
            sample_perturbation(model, seed.child(static_cast<std::uint64_t>(i)), kDim);
        diag_sq[static_cast<std::size_t>(i)] = std::norm(v.matrix()(0, 0));
        off_sq[static_cast<std::size_t>(i)] = std::norm(v.matrix()(0, 1));
    });
    MomentAccumulator d_acc, o_acc;
    for (const double x : diag_sq) d_acc.add(x);
    for (const double x : off_sq) o_acc.add(x);
    suite.sigma_check("goe-diagonal-variance", d_acc.mean(), 1.0, d_acc.se(),
                      {"goe-diagonal-variance-convention"});
    suite.sigma_check("goe-offdiagonal-variance", o_acc.mean(), 0.5, o_acc.se(),
                      {"goe-diagonal-variance-convention"});

    // empirical characteristic function in the eigenbasis of a random real
    // symmetric operator (the convention is orthogonally invariant; a wrong
    // off-diagonal variance shifts this gate visibly). The basis must stay
    // real: the model Hamiltonians are real symmetric.
    const HermitianOperator basis =
        eigendecompose(sample_perturbation(model, suite.seed(41), kDim));
    const EmpiricalCharacteristic emp =
        EmpiricalCharacteristic::sample(model, basis, suite.seed(42), 100000);
    const auto at_one = emp.f(1.0);
    suite.sigma_check("goe-characteristic-tau1", at_one.value, std::exp(-1.0), at_one.std_error,
                      {"goe-characteristic-function"});
    suite.exact_check("goe-characteristic-tau0", emp.f(0.0).value, 1.0, 0.0,
                      {"goe-characteristic-function"});
}

void dynamics_checks(Suite& suite) {
    // infidelity law on a paramagnetic collective-spin scenario
    {
        const SpinSystemSpec spec = SpinSystemSpec::symmetric(8);
        const HermitianOperator h =
            eigendecompose(lmg_hamiltonian({0.9, 1.0, 8}, spec));
        const PureState psi0 = haar_state(suite.seed(50), spec.dim());
        const double lambda = 0.02;
        const DynamicsScenario scenario{h, PerturbationModel::goe(lambda), 50,
                                        TimeGrid(240.0, 24)};
        const StateRunResult run =
            run_single_state(scenario, psi0, {}, suite.seed(51),
                             CharacteristicFunction::analytic(scenario.perturbation), 120.0,
                             suite.threads());
        double worst_dev = 0.0;
        double worst_gate = 1e-300;
        for (std::size_t k = 1; k < run.times.size(); ++k) {
            const double dev = std::abs(run.infidelity.exact[k] - run.infidelity.analytic[k]);
            const double gate = run.infidelity.se[k];
            if (dev * worst_gate > worst_dev * gate) {
                worst_dev = dev;
                worst_gate = gate;
            }
        }
        suite.sigma_check("infidelity-law", worst_dev, 0.0, worst_gate, {"infidelity-law"});
        // saturation: late-time exact infidelity against 1 - S0
        suite.sigma_check("infidelity-saturation", run.infidelity.exact.back(),
                          1.0 - run.infidelity.s0, run.infidelity.se.back(),
                          {"infidelity-saturation"});
    }

    // asymptotic relative-error law over a small Haar ensemble
    {
        const SpinSystemSpec spec = SpinSystemSpec::symmetric(15);
        const HermitianOperator h =
            eigendecompose(lmg_hamiltonian({1.5, 1.0, 15}, spec));
        const std::vector<ObservableReport> obs = {
            build_report(spin_power_observable(spec, Axis::X, 2), "spin-power:x:2", &h)};
        const double lambda = 0.02;
        const DynamicsScenario scenario{h, PerturbationModel::goe(lambda), 25,
                                        TimeGrid(600.0, 4800)};
        constexpr int kStates = 8;
        MomentAccumulator plateau;
        for (int s = 0; s < kStates; ++s) {
            const PureState psi0 =
                haar_state(suite.seed(52).child(static_cast<std::uint64_t>(s)), spec.dim());
            const StateRunResult run = run_single_state(
                scenario, psi0, obs, suite.seed(53).child(static_cast<std::uint64_t>(s)),
                CharacteristicFunction::analytic(scenario.perturbation), 150.0, suite.threads());
            const double norm_sq = obs[0].haar_mean() * obs[0].haar_mean();
            plateau.add(run.observables[0].tail_rms_sq / norm_sq);
        }
        const double predicted = asymptotic_haar_error(obs[0]);
        suite.sigma_check("asymptotic-relative-error-law", plateau.mean(), predicted * predicted,
                          plateau.se(), {"asymptotic-relative-error-law"});

        // single-state double sum against the stationary window
        const PureState psi0 = haar_state(suite.seed(54), spec.dim());
        const DynamicsScenario heavy{h, PerturbationModel::goe(lambda), 100,
                                     TimeGrid(600.0, 4800)};
        const StateRunResult run =
            run_single_state(heavy, psi0, obs, suite.seed(55),
                             CharacteristicFunction::analytic(heavy.perturbation), 150.0,
                             suite.threads());
        suite.relative_check("double-sum-long-time-average", run.observables[0].tail_rms_sq,
                             run.observables[0].asymptotic_sq, 0.10,
                             {"double-sum-long-time-average"});
    }

    // commuting limit of the Hamiltonian-dependent purity
    {
        const SpinSystemSpec spec = SpinSystemSpec::symmetric(15);
        const HermitianOperator h = eigendecompose(collective_spin(spec, Axis::Z));
        const ObservableReport commuting =
            build_report(spin_power_observable(spec, Axis::Z, 2), "spin-power:z:2", &h);
        suite.exact_check("diagonal-purity-commuting-limit", *commuting.diag_purity,
                          commuting.purity, 1e-10, {"diagonal-purity-commuting-limit"});
    }

    // variation distance arithmetic
    {
        RealVector p(2), q(2);
        p << 0.5, 0.5;
        q << 0.75, 0.25;
        suite.exact_check("variation-distance", variation_distance(p, q), 0.25, 1e-12,
                          {"variation-distance"});
    }

    // synthetic lambda-fit inversion
    {
        const double s0 = 0.2;
        const double lambda_true = 0.01;
        TimeGrid grid(400.0, 40);
        const std::vector<double> times = grid.times();
        std::vector<double> infid(times.size());
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double tau = lambda_true * times[k];
            infid[k] = (1.0 - std::exp(-tau * tau)) * (1.0 - s0);
        }
        const LambdaFit fit = fit_lambda(times, infid, s0);
        suite.exact_check("lambda-fit-inversion", fit.lambda, lambda_true, 1e-6,
                          {"lambda-fit-inversion"});
    }
}

const std::vector<std::string>& coverage_checklist() {
    static const std::vector<std::string> forms = {
        "haar-mean-expectation", "haar-second-moment", "haar-cross-moment",
        "haar-transition-moment", "haar-moment-p1", "haar-moment-p2", "haar-ipr-mean",
        "static-second-moment-closed-form", "static-mean-zero",
        "static-relative-error-closed-form", "depolarizing-delta-identity",
        "depolarizing-relative-error-closed-form", "orthogonal-mixture-relative-error-closed-form",
        "collective-spin-purity", "pauli-string-purity", "partition-projector-purity",
        "projector-purity-one", "goe-diagonal-variance-convention", "goe-characteristic-function",
        "infidelity-law", "infidelity-saturation", "asymptotic-relative-error-law",
        "double-sum-long-time-average", "diagonal-purity-commuting-limit", "variation-distance",
        "lambda-fit-inversion"};
    return forms;
}

}  // namespace

bool ValidateReport::all_passed() const {
    if (!uncovered_forms.empty()) return false;
    for (const CheckResult& check : checks)
        if (!check.passed) return false;
    return true;
}

ValidateReport run_validate(std::uint64_t master_seed, int threads) {
    Suite suite(master_seed, threads);
    haar_moment_checks(suite);
    purity_checks(suite);
    static_model_checks(suite);
    goe_checks(suite);
    dynamics_checks(suite);

    ValidateReport report;
    report.checks = suite.take();

    std::set<std::string> covered;
    for (const CheckResult& check : report.checks)
        if (check.passed)
            for (const std::string& form : check.covers) covered.insert(form);
    for (const std::string& form : coverage_checklist())
        if (!covered.contains(form)) report.uncovered_forms.push_back(form);
    return report;
}

void write_validate_report(const ValidateReport& report, const std::filesystem::path& path) {
    nlohmann::json checks = nlohmann::json::array();
    for (const CheckResult& check : report.checks) {
        checks.push_back({{"name", check.name},
                          {"passed", check.passed},
                          {"observed", check.observed},
                          {"expected", check.expected},
                          {"deviation", check.deviation},
                          {"gate", check.gate},
                          {"gate_kind", check.gate_kind},
                          {"covers", check.covers}});
    }
    nlohmann::json doc = {{"schema_version", 1},
                          {"checks", checks},
                          {"coverage_checklist", coverage_checklist()},
                          {"uncovered_forms", report.uncovered_forms},
                          {"all_passed", report.all_passed()}};
    std::ofstream file(path);
    if (!file) throw std::runtime_error("validate: cannot open " + path.string());
    file << doc.dump(2) << "\n";
}

int print_validate_report(const ValidateReport& report) {
    int failed = 0;
    for (const CheckResult& check : report.checks) {
        if (!check.passed) ++failed;
        std::printf("[%s] %-42s observed %.6g expected %.6g (%s gate %.3g)\n",
                    check.passed ? "PASS" : "FAIL", check.name.c_str(), check.observed,
                    check.expected, check.gate_kind.c_str(), check.gate);
    }
    for (const std::string& form : report.uncovered_forms)
        std::printf("[FAIL] coverage: closed form '%s' not exercised by a passing check\n",
                    form.c_str());
    std::printf("%d/%zu checks passed, %zu/%zu closed forms covered\n",
                static_cast<int>(report.checks.size()) - failed, report.checks.size(),
                coverage_checklist().size() - report.uncovered_forms.size(),
                coverage_checklist().size());
    return report.all_passed() ? 0 : 3;
}

}  // namespace aqsens::runner
