#include <doctest.h>

#include <cmath>

#include "aqsens/static_error.hpp"

using namespace aqsens;

namespace {

ObservableReport spin_z_report(int n, int power) {
    const SpinSystemSpec spec = SpinSystemSpec::symmetric(n);
    return build_report(spin_power_observable(spec, Axis::Z, power),
                        "spin-power:z:" + std::to_string(power));
}

}  // namespace

TEST_CASE("perturbed pairs keep their overlap budget") {
    const SeedSpec root{505, {}};
    const auto [psi, perp] = haar_state_pair(root, 12);
    const double gamma = 0.35;
    const PerturbedStatePair pair = make_perturbed_pair(psi, perp, gamma);
    CHECK(std::abs(pair.simulated.amplitudes().squaredNorm() - 1.0) < tol::state_norm);
    const double overlap = std::norm(psi.amplitudes().dot(pair.simulated.amplitudes()));
    CHECK(overlap == doctest::Approx(1.0 / (1.0 + gamma * gamma)).epsilon(1e-10));
    CHECK_THROWS_AS(make_perturbed_pair(psi, psi, gamma), std::invalid_argument);
}

TEST_CASE("hand-evaluated two-level error") {
    Matrix m = Matrix::Zero(2, 2);
    m(1, 1) = 2;
    const HermitianOperator a(m);
    Vector e0(2), e1(2);
    e0 << 1, 0;
    e1 << 0, 1;
    const PerturbedStatePair pair = make_perturbed_pair(PureState(e0), PureState(e1), 1.0);
    CHECK(delta(a, pair) == doctest::Approx(-1.0));
    CHECK(delta_expanded(a, pair) == doctest::Approx(-1.0));
}

TEST_CASE("gamma zero and identity observables give zero error") {
    const SeedSpec root{99, {}};
    const auto [psi, perp] = haar_state_pair(root, 9);
    const PerturbedStatePair frozen = make_perturbed_pair(psi, perp, 0.0);
    const ObservableReport report = spin_z_report(8, 2);
    CHECK(delta(report.shifted, frozen) == doctest::Approx(0.0).epsilon(1e-12));
    const HermitianOperator id(Matrix::Identity(9, 9));
    const PerturbedStatePair real_pair = make_perturbed_pair(psi, perp, 0.7);
    CHECK(std::abs(delta(id, real_pair)) < 1e-12);
}

TEST_CASE("the two algebraic routes to the error agree") {
    const SeedSpec root{8181, {}};
    const ObservableReport report = spin_z_report(15, 3);
    for (int i = 0; i < 32; ++i) {
        const auto [psi, perp] =
            haar_state_pair(root.child(static_cast<std::uint64_t>(i)), 16);
        const PerturbedStatePair pair = make_perturbed_pair(psi, perp, 0.2);
        CHECK(delta(report.shifted, pair) ==
              doctest::Approx(delta_expanded(report.shifted, pair)).epsilon(1e-9));
    }
}

TEST_CASE("shift invariance of the error") {
    const SeedSpec root{271828, {}};
    const ObservableReport report = spin_z_report(11, 2);
    const HermitianOperator shifted_more(report.shifted.matrix() +
                                         3.7 * Matrix::Identity(12, 12));
    for (int i = 0; i < 16; ++i) {
        const auto [psi, perp] =
            haar_state_pair(root.child(static_cast<std::uint64_t>(i)), 12);
        const PerturbedStatePair pair = make_perturbed_pair(psi, perp, 0.4);
        CHECK(std::abs(delta(report.shifted, pair) - delta(shifted_more, pair)) < 1e-10);
    }
}

TEST_CASE("Monte-Carlo second moment matches the closed form across the family") {
    const SeedSpec root{314159, {}};
    const double gamma = 0.2;
    std::uint64_t stream = 0;
    std::vector<ObservableReport> family;
    family.push_back(spin_z_report(15, 1));
    family.push_back(spin_z_report(15, 2));
    family.push_back(spin_z_report(15, 6));
    family.push_back(build_report(sx_projector_observable(SpinSystemSpec::symmetric(15), 0.5),
                                  "sx-projector:0.5"));
    for (const ObservableReport& report : family) {
        const HaarDeltaStats stats = haar_average_delta_sq(report.shifted, gamma, 2000,
                                                           root.child(stream++), 2);
        // the analytic companion is recomputed here from raw traces
        const double tr = report.shifted.matrix().trace().real();
        const double tr_sq = report.shifted.matrix().squaredNorm();
        const double d = 16.0;
        const double expected =
            2.0 * gamma * gamma / ((1.0 + gamma * gamma) * (d * d - 1.0)) * (tr_sq - tr * tr / d);
        CHECK(stats.analytic == doctest::Approx(expected).epsilon(1e-12));
        CHECK(std::abs(stats.mean_delta_sq - expected) < 3.0 * stats.se_delta_sq);
        CHECK(std::abs(stats.mean_delta) < 3.0 * stats.se_delta);
    }
}

TEST_CASE("identity observable has exactly zero average error") {
    // guarded through the trace identity: Tr A^2 = (Tr A)^2 / d
    const HermitianOperator id(Matrix::Identity(6, 6));
    CHECK(analytic_delta_sq(id, 0.3) == doctest::Approx(0.0));
}

TEST_CASE("relative error ordering follows the purity ordering") {
    const SeedSpec root{607, {}};
    const double gamma = 0.2;
    for (const int n : {4, 12, 24, 40}) {
        std::vector<double> purities;
        std::vector<double> empirical;
        std::uint64_t stream = 0;
        for (const int power : {1, 2, 4, 6}) {
            const ObservableReport report = spin_z_report(n, power);
            const VarianceRow row = variance_study_row(
                report, n, gamma, 1000, root.child(static_cast<std::uint64_t>(n)).child(stream++),
                2);
            purities.push_back(report.purity);
            empirical.push_back(row.mean_rel_sq);
        }
        for (std::size_t i = 1; i < purities.size(); ++i) {
            CHECK(purities[i] > purities[i - 1]);
            CHECK(empirical[i] > empirical[i - 1]);
        }
    }
}

TEST_CASE("fluctuation scaling with system size") {
    const SeedSpec root{1003, {}};
    const double gamma = 0.2;
    // fluctuations decay with size, stay ordered by purity, and remain
    // within twice the mean for the magnetization powers
    std::vector<int> sizes = {10, 20, 30, 40};
    std::vector<std::vector<VarianceRow>> table;
    for (const int n : sizes) {
        std::vector<VarianceRow> rows;
        std::uint64_t stream = 0;
        for (const int power : {1, 2, 4, 6}) {
            const ObservableReport report = spin_z_report(n, power);
            rows.push_back(variance_study_row(
                report, n, gamma, 2000, root.child(static_cast<std::uint64_t>(n)).child(stream++),
                2));
        }
        table.push_back(std::move(rows));
    }
    for (std::size_t p = 0; p < 4; ++p)
        CHECK(table.back()[p].std_rel_sq < table.front()[p].std_rel_sq);
    for (const auto& rows : table) {
        CHECK(rows.back().std_rel_sq > rows.front().std_rel_sq);
        for (const VarianceRow& row : rows) CHECK(row.std_rel_sq <= 2.0 * row.mean_rel_sq);
    }
}

TEST_CASE("depolarizing model") {
    const SpinSystemSpec spec = SpinSystemSpec::symmetric(15);
    const ObservableReport proj =
        build_report(sx_projector_observable(spec, 0.5), "sx-projector:0.5");
    const MixedNoiseSpec spec_01{MixedNoiseKind::Depolarizing, 0.1};
    // frozen: 0.1 sqrt(16/17 * 15/16) = 0.1 sqrt(15/17)
    CHECK(mixed_relative_error(proj, spec_01) ==
          doctest::Approx(0.1 * std::sqrt(15.0 / 17.0)).epsilon(1e-12));
    CHECK(mixed_relative_error(proj, spec_01) == doctest::Approx(0.09393364).epsilon(1e-6));

    const MixedMcStats stats = mixed_haar_study(proj, spec_01, 10000, SeedSpec{11011, {}}, 2);
    const double norm_sq = proj.haar_mean() * proj.haar_mean();
    CHECK(std::abs(stats.mean_delta_sq - stats.analytic_rel * stats.analytic_rel * norm_sq) <
          3.0 * stats.se_delta_sq);

    // gamma = 0 shuts the channel off
    const PureState psi = haar_state(SeedSpec{5, {}}, 16);
    CHECK(mixed_delta(proj.shifted, psi, {MixedNoiseKind::Depolarizing, 0.0}) ==
          doctest::Approx(0.0));
    // pointwise identity of the depolarizing error
    const double gamma = 0.37;
    const double direct = mixed_delta(proj.shifted, psi, {MixedNoiseKind::Depolarizing, gamma});
    CHECK(direct == doctest::Approx(gamma * (expectation(proj.shifted, psi) - proj.haar_mean()))
                        .epsilon(1e-12));
    CHECK_THROWS_AS(mixed_delta(proj.shifted, psi, {MixedNoiseKind::Depolarizing, 1.5}),
                    std::invalid_argument);
}

TEST_CASE("orthogonal mixture model") {
    const ObservableReport report = spin_z_report(15, 2);
    const MixedNoiseSpec spec{MixedNoiseKind::OrthogonalMixture, 0.25};
    const MixedMcStats stats = mixed_haar_study(report, spec, 10000, SeedSpec{2112, {}}, 2);
    const double norm_sq = report.haar_mean() * report.haar_mean();
    CHECK(std::abs(stats.mean_delta_sq - stats.analytic_rel * stats.analytic_rel * norm_sq) <
          3.0 * stats.se_delta_sq);
    const PureState psi = haar_state(SeedSpec{6, {}}, 16);
    CHECK_THROWS_AS(mixed_delta(report.shifted, psi, spec), std::invalid_argument);
}
