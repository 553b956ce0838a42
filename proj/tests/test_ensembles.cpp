#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "aqsens/ensembles.hpp"
#include "aqsens/parallel.hpp"

using namespace aqsens;

namespace {

struct Moments {
    double mean = 0.0;
    double se = 0.0;
};

Moments moments(const std::vector<double>& xs) {
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

TEST_CASE("seed streams are reproducible and order-independent") {
    const SeedSpec seed{123456789ULL, {4, 2}};
    const PureState a = haar_state(seed, 8);
    const PureState b = haar_state(seed, 8);
    CHECK((a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(SeedSpec{1, {2}}.stream_key() != SeedSpec{1, {3}}.stream_key());
    CHECK(SeedSpec{1, {2, 3}}.stream_key() != SeedSpec{1, {3, 2}}.stream_key());

    // identical draws regardless of evaluation order across a worker pool
    std::vector<double> serial(64), parallel(64);
    for (int i = 0; i < 64; ++i)
        serial[static_cast<std::size_t>(i)] =
            haar_state(seed.child(static_cast<std::uint64_t>(i)), 4).amplitudes()(0).real();
    parallel_for(64, 4, [&](int i) {
        parallel[static_cast<std::size_t>(i)] =
            haar_state(seed.child(static_cast<std::uint64_t>(i)), 4).amplitudes()(0).real();
    });
    CHECK(serial == parallel);
}

TEST_CASE("haar unitaries are unitary and carry the right low moments") {
    const SeedSpec root{777, {}};
    const Matrix u = haar_unitary(root, 6);
    CHECK((u.adjoint() * u - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() < tol::unitarity);

    constexpr int kSamples = 100000;
    constexpr Index kDim = 4;
    std::vector<double> second(kSamples), fourth(kSamples);
    for (int i = 0; i < kSamples; ++i) {
        const Matrix draw = haar_unitary(root.child(static_cast<std::uint64_t>(i)), kDim);
        const double p = std::norm(draw(0, 0));
        second[static_cast<std::size_t>(i)] = p;
        fourth[static_cast<std::size_t>(i)] = p * p;
    }
    const Moments m2 = moments(second);
    const Moments m4 = moments(fourth);
    CHECK(std::abs(m2.mean - 0.25) < 3 * m2.se);
    CHECK(std::abs(m4.mean - 0.1) < 3 * m4.se);
}

TEST_CASE("haar states have unit norm and a left-invariant first moment") {
    const SeedSpec root{31337, {}};
    for (int i = 0; i < 32; ++i)
        CHECK(std::abs(haar_state(root.child(static_cast<std::uint64_t>(i)), 5)
                           .amplitudes()
                           .squaredNorm() -
                       1.0) < tol::state_norm);

    // mean projector of W psi equals that of psi (both approach identity/d)
    constexpr Index kDim = 4;
    constexpr int kSamples = 10000;
    const Matrix w = haar_unitary(root.child(999), kDim);
    Matrix mean_plain = Matrix::Zero(kDim, kDim);
    Matrix mean_rotated = Matrix::Zero(kDim, kDim);
    for (int i = 0; i < kSamples; ++i) {
        const Vector psi =
            haar_state(root.child(static_cast<std::uint64_t>(i)), kDim).amplitudes();
        const Vector rotated = w * psi;
        mean_plain += psi * psi.adjoint();
        mean_rotated += rotated * rotated.adjoint();
    }
    mean_plain /= kSamples;
    mean_rotated /= kSamples;
    // entrywise 3-sigma spread at this sample size is comfortably 0.03
    CHECK((mean_plain - mean_rotated).cwiseAbs().maxCoeff() < 0.03);
    CHECK((mean_plain - Matrix::Identity(kDim, kDim) / kDim).cwiseAbs().maxCoeff() < 0.03);
}

TEST_CASE("orthogonal companions are orthogonal, normalized, and complete for d = 2") {
    const SeedSpec root{77, {}};
    for (int i = 0; i < 200; ++i) {
        const PureState psi = haar_state(root.child(static_cast<std::uint64_t>(i)).child(0), 6);
        const PureState perp =
            orthogonal_companion(psi, root.child(static_cast<std::uint64_t>(i)).child(1));
        CHECK(std::abs(psi.amplitudes().dot(perp.amplitudes())) <= tol::orthogonality);
        CHECK(std::abs(perp.amplitudes().squaredNorm() - 1.0) < tol::state_norm);
    }
    Vector e0(2);
    e0 << 1, 0;
    const PureState perp = orthogonal_companion(PureState(e0), root.child(5000));
    CHECK(std::abs(perp.amplitudes()(0)) < tol::orthogonality);
    CHECK(std::abs(std::abs(perp.amplitudes()(1)) - 1.0) < 1e-12);
}

TEST_CASE("spin coherent states are stretched and uniformly oriented") {
    const SpinSystemSpec spec = SpinSystemSpec::symmetric(8);
    const double s = spec.total_spin();
    const SeedSpec root{424242, {}};
    const HermitianOperator sx = collective_spin(spec, Axis::X);
    const HermitianOperator sy = collective_spin(spec, Axis::Y);
    const HermitianOperator sz = collective_spin(spec, Axis::Z);

    constexpr int kSamples = 10000;
    std::vector<double> cos_theta(kSamples);
    for (int i = 0; i < kSamples; ++i) {
        const PureState state =
            spin_coherent_state(root.child(static_cast<std::uint64_t>(i)), spec);
        const double mx = expectation(sx, state);
        const double my = expectation(sy, state);
        const double mz = expectation(sz, state);
        if (i < 64) CHECK(mx * mx + my * my + mz * mz == doctest::Approx(s * s).epsilon(1e-9));
        cos_theta[static_cast<std::size_t>(i)] = mz / s;
    }
    // Kolmogorov-Smirnov against the uniform law of cos(theta) on [-1, 1]
    std::sort(cos_theta.begin(), cos_theta.end());
    double ks = 0.0;
    for (int i = 0; i < kSamples; ++i) {
        const double cdf = (cos_theta[static_cast<std::size_t>(i)] + 1.0) / 2.0;
        const double hi = static_cast<double>(i + 1) / kSamples;
        const double lo = static_cast<double>(i) / kSamples;
        ks = std::max({ks, std::abs(cdf - hi), std::abs(cdf - lo)});
    }
    const double critical_1pct = 1.628 / std::sqrt(static_cast<double>(kSamples));
    CHECK(ks < critical_1pct);
}

TEST_CASE("dicke states are magnetization eigenstates") {
    const SpinSystemSpec spec = SpinSystemSpec::symmetric(10);
    const HermitianOperator sz = collective_spin(spec, Axis::Z);
    const HermitianOperator sz_sq(sz.matrix() * sz.matrix());
    const SeedSpec root{99, {}};
    for (int i = 0; i < 50; ++i) {
        const PureState state = dicke_state(root.child(static_cast<std::uint64_t>(i)), spec);
        const double mean = expectation(sz, state);
        const double var = expectation(sz_sq, state) - mean * mean;
        CHECK(std::abs(var) < 1e-12);
    }
}

TEST_CASE("GOE draws are symmetric with the pinned variances") {
    const SeedSpec root{5150, {}};
    const PerturbationModel model = PerturbationModel::goe(0.5);
    const HermitianOperator v = sample_perturbation(model, root, 8);
    CHECK((v.matrix() - v.matrix().transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(v.matrix().imag().cwiseAbs().maxCoeff() == 0.0);

    constexpr int kSamples = 100000;
    std::vector<double> diag(kSamples), off(kSamples);
    for (int i = 0; i < kSamples; ++i) {
        const HermitianOperator draw =
            sample_perturbation(model, root.child(static_cast<std::uint64_t>(i)), 4);
        diag[static_cast<std::size_t>(i)] = std::norm(draw.matrix()(2, 2));
        off[static_cast<std::size_t>(i)] = std::norm(draw.matrix()(0, 3));
    }
    const Moments d_m = moments(diag);
    const Moments o_m = moments(off);
    CHECK(std::abs(d_m.mean - 1.0) < 3 * d_m.se);
    CHECK(std::abs(o_m.mean - 0.5) < 3 * o_m.se);
}

TEST_CASE("local-field perturbations live on sigma_x and need the full space") {
    const PerturbationModel model = PerturbationModel::local_fields(0.1, 5);
    const SeedSpec root{31415, {}};
    const HermitianOperator v = sample_perturbation(model, root, 32);
    const SpinSystemSpec spec = SpinSystemSpec::full(5);
    Matrix sum_x = Matrix::Zero(32, 32);
    for (int j = 1; j <= 5; ++j)
        sum_x += pauli_string(spec, std::vector<PauliTerm>{{Axis::X, j}}).matrix();
    CHECK((v.matrix() * sum_x - sum_x * v.matrix()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(sample_perturbation(model, root, 16), std::invalid_argument);
}

TEST_CASE("characteristic function closed form and empirical estimate") {
    const PerturbationModel goe = PerturbationModel::goe(0.02);
    CHECK(characteristic_f(goe, 0.0) == doctest::Approx(1.0));
    CHECK(characteristic_f(goe, 1.0) == doctest::Approx(std::exp(-1.0)));
    for (const double tau : {0.3, 0.9, 2.7}) CHECK(characteristic_f(goe, tau) <= 1.0);
    CHECK_THROWS_AS(characteristic_f(goe, -0.5), std::invalid_argument);
    CHECK_THROWS_AS(characteristic_f(PerturbationModel::local_fields(0.1, 4), 1.0),
                    std::invalid_argument);

    const HermitianOperator basis = eigendecompose(HermitianOperator(Matrix::Identity(16, 16)));
    const EmpiricalCharacteristic emp =
        EmpiricalCharacteristic::sample(goe, basis, SeedSpec{8080, {}}, 100000);
    CHECK(emp.f(0.0).value == doctest::Approx(1.0));
    const auto at_one = emp.f(1.0);
    CHECK(std::abs(at_one.value - std::exp(-1.0)) < 3 * at_one.std_error);
    for (const double tau : {0.2, 1.0, 4.0}) CHECK(emp.f(tau).value <= 1.0);
}

TEST_CASE("a corrupted off-diagonal variance convention is caught by the rotated-basis gate") {
    // fault injection: a symmetric Gaussian matrix with off-diagonal
    // variance 1 instead of 1/2, projected onto a random real eigenbasis
    const SeedSpec root{616, {}};
    constexpr Index kDim = 16;
    const Matrix u = eigendecompose(sample_perturbation(PerturbationModel::goe(1.0),
                                                        root.child(0), kDim))
                         .spectrum()
                         .vectors;
    constexpr int kSamples = 20000;
    std::vector<double> diffs(kSamples);
    for (int i = 0; i < kSamples; ++i) {
        auto rng = root.child(1).child(static_cast<std::uint64_t>(i)).engine();
        std::normal_distribution<double> normal;
        Matrix v = Matrix::Zero(kDim, kDim);
        for (Index r = 0; r < kDim; ++r) {
            v(r, r) = normal(rng);
            for (Index c = r + 1; c < kDim; ++c) {
                const double x = normal(rng);  // wrong scale on purpose
                v(r, c) = x;
                v(c, r) = x;
            }
        }
        const Matrix rotated = u.adjoint() * v * u;
        diffs[static_cast<std::size_t>(i)] = rotated(0, 0).real() - rotated(1, 1).real();
    }
    double mean_cos = 0.0;
    for (const double d : diffs) mean_cos += std::cos(d);
    mean_cos /= kSamples;
    double var = 0.0;
    for (const double d : diffs) var += (std::cos(d) - mean_cos) * (std::cos(d) - mean_cos);
    const double se = std::sqrt(var / (kSamples - 1.0) / kSamples);
    // the healthy convention gives exp(-1); the corrupted one must trip the gate
    CHECK(std::abs(mean_cos - std::exp(-1.0)) > 3 * se);
}
