#include <doctest.h>

#include <cmath>

#include "aqsens/dynamics_error.hpp"
#include "aqsens/ensembles.hpp"
#include "aqsens/observable_metrics.hpp"
#include "aqsens/spin_systems.hpp"

using namespace aqsens;

TEST_CASE("rank-1 projectors have purity one") {
    const SpinSystemSpec spec = SpinSystemSpec::symmetric(15);
    const ObservableReport report =
        build_report(sx_projector_observable(spec, 0.5), "sx-projector:0.5");
    CHECK(report.purity == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.shift == doctest::Approx(0.0));
}

TEST_CASE("collective magnetization purity closed form in the full space") {
    for (const int n : {3, 6, 9}) {
        const SpinSystemSpec spec = SpinSystemSpec::full(n);
        const ObservableReport report =
            build_report(collective_spin(spec, Axis::Z), "spin-power:z:1");
        CHECK(std::abs(report.purity - (n + 1.0) / n * std::pow(2.0, -n)) < 1e-10);
    }
}

TEST_CASE("shifted spin ladder arithmetic") {
    // S_x for two spins in the symmetric subspace has eigenvalues -1, 0, 1;
    // the shifted spectrum (0, 1, 2) gives 5/9 by direct arithmetic
    const SpinSystemSpec spec = SpinSystemSpec::symmetric(2);
    const ObservableReport report =
        build_report(collective_spin(spec, Axis::X), "spin-power:x:1");
    CHECK(report.purity == doctest::Approx(5.0 / 9.0).epsilon(1e-12));
    CHECK(report.trace_shifted == doctest::Approx(3.0));
}

TEST_CASE("trivial observables are rejected") {
    CHECK_THROWS_WITH_AS(build_report(HermitianOperator(Matrix::Identity(4, 4)), "identity"),
                         doctest::Contains("trivial observable"), std::invalid_argument);
    CHECK_THROWS_AS(
        build_report(HermitianOperator(2.5 * Matrix::Identity(4, 4)), "scaled identity"),
        std::invalid_argument);
    // the nonnegative purity path still handles the identity (1/d)
    CHECK(psd_purity(HermitianOperator(Matrix::Identity(8, 8))) == doctest::Approx(0.125));
}

TEST_CASE("shifting preserves expectation differences") {
    const SpinSystemSpec spec = SpinSystemSpec::symmetric(11);
    const ObservableReport report =
        build_report(spin_power_observable(spec, Axis::X, 3), "spin-power:x:3");
    const SeedSpec root{10101, {}};
    for (int i = 0; i < 16; ++i) {
        const PureState a = haar_state(root.child(static_cast<std::uint64_t>(i)).child(0), 12);
        const PureState b = haar_state(root.child(static_cast<std::uint64_t>(i)).child(1), 12);
        const double original_diff = expectation(report.original, a) - expectation(report.original, b);
        const double shifted_diff = expectation(report.shifted, a) - expectation(report.shifted, b);
        CHECK(std::abs(original_diff - shifted_diff) < 1e-10);
    }
}

TEST_CASE("purity is invariant under a change of basis") {
    const SpinSystemSpec spec = SpinSystemSpec::symmetric(15);
    const HermitianOperator a = spin_power_observable(spec, Axis::X, 2);
    const ObservableReport plain = build_report(a, "plain");
    const Matrix u = haar_unitary(SeedSpec{2222, {}}, 16);
    const ObservableReport rotated =
        build_report(HermitianOperator(u * a.matrix() * u.adjoint()), "rotated");
    CHECK(std::abs(plain.purity - rotated.purity) < 1e-10);
}

TEST_CASE("even-power purities grow with the power in both representations") {
    const int n = 15;
    std::vector<double> sym_purities;
    for (int k = 1; k <= 10; ++k) {
        const SpinSystemSpec spec = SpinSystemSpec::symmetric(n);
        sym_purities.push_back(
            build_report(spin_power_observable(spec, Axis::X, 2 * k), "sym").purity);
    }
    for (std::size_t i = 1; i < sym_purities.size(); ++i)
        CHECK(sym_purities[i] >= sym_purities[i - 1]);

    std::vector<double> full_purities;
    for (int k = 1; k <= 10; ++k) {
        const SpinSystemSpec spec = SpinSystemSpec::full(10);
        full_purities.push_back(
            build_report(spin_power_observable(spec, Axis::Z, 2 * k), "full").purity);
    }
    for (std::size_t i = 1; i < full_purities.size(); ++i)
        CHECK(full_purities[i] >= full_purities[i - 1]);
}

TEST_CASE("diagonal purity reaches the plain purity exactly when commuting") {
    const SpinSystemSpec spec = SpinSystemSpec::symmetric(15);
    const HermitianOperator h = eigendecompose(collective_spin(spec, Axis::Z));
    const ObservableReport commuting =
        build_report(spin_power_observable(spec, Axis::Z, 4), "spin-power:z:4", &h);
    REQUIRE(commuting.diag_purity.has_value());
    CHECK(std::abs(*commuting.diag_purity - commuting.purity) < 1e-10);

    const ObservableReport mixed =
        build_report(spin_power_observable(spec, Axis::X, 2), "spin-power:x:2", &h);
    CHECK(*mixed.diag_purity <= mixed.purity + 1e-10);
}

TEST_CASE("generic rotations pinch the diagonal purity to about 1/d") {
    constexpr Index kDim = 16;
    const SpinSystemSpec spec = SpinSystemSpec::symmetric(15);
    const HermitianOperator a = spin_power_observable(spec, Axis::X, 2);
    const SeedSpec root{31, {}};
    double mean = 0.0;
    constexpr int kRotations = 100;
    for (int i = 0; i < kRotations; ++i) {
        const Matrix u = haar_unitary(root.child(static_cast<std::uint64_t>(i)), kDim);
        Matrix base = Matrix::Zero(kDim, kDim);
        for (Index k = 0; k < kDim; ++k) base(k, k) = static_cast<double>(k);
        const HermitianOperator h = eigendecompose(HermitianOperator(u * base * u.adjoint()));
        mean += *build_report(a, "a", &h).diag_purity;
    }
    mean /= kRotations;
    CHECK(mean < 3.0 / kDim);
}

TEST_CASE("diagonal ensembles") {
    const SpinSystemSpec spec = SpinSystemSpec::symmetric(7);
    const HermitianOperator h = eigendecompose(lmg_hamiltonian({0.9, 1.0, 7}, spec));
    // an eigenstate concentrates the ensemble
    const PureState eigenstate = PureState::normalized(h.spectrum().vectors.col(3));
    const DiagonalEnsemble concentrated = diagonal_ensemble(h, eigenstate);
    CHECK(concentrated.ipr == doctest::Approx(1.0));
    CHECK(concentrated.populations(3) == doctest::Approx(1.0));

    // a uniform superposition of eigenstates reaches the 1/d floor
    Vector uniform = Vector::Zero(8);
    for (Index k = 0; k < 8; ++k) uniform += h.spectrum().vectors.col(k);
    const DiagonalEnsemble flat = diagonal_ensemble(h, PureState::normalized(uniform));
    CHECK(flat.ipr == doctest::Approx(1.0 / 8.0));

    // Haar mean of the participation ratio
    const SeedSpec root{12, {}};
    double sum = 0.0, sum_sq = 0.0;
    constexpr int kSamples = 10000;
    for (int i = 0; i < kSamples; ++i) {
        const double s0 =
            diagonal_ensemble(h, haar_state(root.child(static_cast<std::uint64_t>(i)), 8)).ipr;
        sum += s0;
        sum_sq += s0 * s0;
    }
    const double mean = sum / kSamples;
    const double se = std::sqrt((sum_sq / kSamples - mean * mean) / (kSamples - 1));
    CHECK(std::abs(mean - 2.0 / 9.0) < 3 * se);
}

TEST_CASE("infinite-time average") {
    const SpinSystemSpec spec = SpinSystemSpec::symmetric(8);
    const HermitianOperator h = eigendecompose(lmg_hamiltonian({0.9, 1.0, 8}, spec));
    const HermitianOperator a = spin_power_observable(spec, Axis::X, 2);

    // commuting observable: the average equals the t = 0 expectation
    const HermitianOperator h_commuting(h.matrix() * h.matrix());
    const PureState psi = haar_state(SeedSpec{3141, {}}, 9);
    const TimeAverage commuting = infinite_time_average(h_commuting, h, psi);
    CHECK(commuting.value == doctest::Approx(expectation(h_commuting, psi)).epsilon(1e-10));

    // eigenstate initial condition picks out one diagonal element
    const PureState eigenstate = PureState::normalized(h.spectrum().vectors.col(2));
    const TimeAverage pinned = infinite_time_average(a, h, eigenstate);
    CHECK(pinned.value == doctest::Approx(expectation(a, eigenstate)).epsilon(1e-10));

    // long-time quadrature oracle
    const TimeAverage predicted = infinite_time_average(a, h, psi);
    const TimeGrid grid(10000.0, 200000);
    const std::vector<double> times = grid.times();
    const Matrix states = evolve_on_grid(h, psi, times);
    const std::vector<double> series = expectation_on_grid(a, states);
    double integral = 0.0;
    for (std::size_t k = 1; k < series.size(); ++k)
        integral += 0.5 * grid.dt() * (series[k - 1] + series[k]);
    CHECK(std::abs(integral / grid.t_max - predicted.value) < 1e-3);
}

TEST_CASE("variation distance") {
    RealVector p(2), q(2);
    p << 1, 0;
    q << 0, 1;
    CHECK(variation_distance(p, p) == doctest::Approx(0.0));
    CHECK(variation_distance(p, q) == doctest::Approx(1.0));
    RealVector a(2), b(2);
    a << 0.5, 0.5;
    b << 0.75, 0.25;
    CHECK(variation_distance(a, b) == doctest::Approx(0.25));
    RealVector bad(2);
    bad << 0.5, 0.6;
    CHECK_THROWS_AS(variation_distance(a, bad), std::invalid_argument);
    // slack below 1e-8 is renormalized rather than rejected
    RealVector slack(2);
    slack << 0.5 + 2e-9, 0.5;
    CHECK(variation_distance(a, slack) < 1e-8);
}

TEST_CASE("degeneracy flags") {
    const HermitianOperator degenerate = eigendecompose(HermitianOperator(Matrix::Identity(7, 7)));
    CHECK(has_degenerate_spectrum(degenerate));
    const SpinSystemSpec spec = SpinSystemSpec::symmetric(6);
    const HermitianOperator h = eigendecompose(lmg_hamiltonian({1.3, 1.0, 6}, spec));
    CHECK_FALSE(has_degenerate_spectrum(h));
    const ObservableReport report =
        build_report(spin_power_observable(spec, Axis::X, 2), "a", &degenerate);
    CHECK(report.hamiltonian_degenerate);
}
