#include <doctest.h>

#include <cmath>
#include <random>

#include "aqsens/ensembles.hpp"
#include "aqsens/operator_core.hpp"
#include "aqsens/spin_systems.hpp"

using namespace aqsens;

namespace {

Matrix random_hermitian(std::uint64_t seed, Index d) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Matrix m(d, d);
    for (Index r = 0; r < d; ++r)
        for (Index c = 0; c < d; ++c) {
            const double re = normal(rng);
            const double im = normal(rng);
            m(r, c) = Complex(re, im);
        }
    return Matrix((m + m.adjoint()) / 2.0);
}

// independent evolution oracle: classical RK4 on i d/dt psi = H psi with a
// step-doubling consistency check
Vector rk4_evolve(const Matrix& h, Vector psi, double t_final, int steps) {
    const double dt = t_final / steps;
    const Complex minus_i(0, -1);
    for (int s = 0; s < steps; ++s) {
        const Vector k1 = minus_i * (h * psi);
        const Vector k2 = minus_i * (h * (psi + 0.5 * dt * k1));
        const Vector k3 = minus_i * (h * (psi + 0.5 * dt * k2));
        const Vector k4 = minus_i * (h * (psi + dt * k3));
        psi += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return psi;
}

}  // namespace

TEST_CASE("eigendecompose identity") {
    const HermitianOperator id = eigendecompose(HermitianOperator(Matrix::Identity(4, 4)));
    for (Index i = 0; i < 4; ++i) CHECK(id.spectrum().values(i) == doctest::Approx(1.0));
    CHECK((id.spectrum().vectors.adjoint() * id.spectrum().vectors - Matrix::Identity(4, 4))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
}

TEST_CASE("eigendecompose diagonal input sorts with permutation eigenvectors") {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = 3;
    m(1, 1) = 1;
    m(2, 2) = 2;
    const HermitianOperator op = eigendecompose(HermitianOperator(m));
    CHECK(op.spectrum().values(0) == 1.0);
    CHECK(op.spectrum().values(1) == 2.0);
    CHECK(op.spectrum().values(2) == 3.0);
    CHECK(op.spectrum().vectors(1, 0) == Complex(1, 0));
    CHECK(op.spectrum().vectors(2, 1) == Complex(1, 0));
    CHECK(op.spectrum().vectors(0, 2) == Complex(1, 0));
}

TEST_CASE("eigendecompose reconstructs a random Hermitian matrix") {
    const HermitianOperator op = eigendecompose(HermitianOperator(random_hermitian(41, 8)));
    const Spectrum& s = op.spectrum();
    const Matrix rebuilt = s.vectors * s.values.cast<Complex>().asDiagonal() * s.vectors.adjoint();
    CHECK((rebuilt - op.matrix()).cwiseAbs().maxCoeff() < tol::reconstruction);
    for (Index i = 1; i < 8; ++i) CHECK(s.values(i) >= s.values(i - 1));
    CHECK((s.vectors.adjoint() * s.vectors - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff() <
          tol::unitarity);
}

TEST_CASE("eigendecompose is deterministic") {
    const Matrix m = random_hermitian(99, 12);
    const HermitianOperator a = eigendecompose(HermitianOperator(m));
    const HermitianOperator b = eigendecompose(HermitianOperator(m));
    CHECK((a.spectrum().vectors - b.spectrum().vectors).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("hermiticity violations are rejected with the deviation") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = Complex(0, 1e-3);
    CHECK_THROWS_WITH_AS(HermitianOperator(std::move(m)),
                         doctest::Contains("deviation from hermiticity"), std::invalid_argument);
}

TEST_CASE("evolve at t = 0 returns the input state") {
    const HermitianOperator h = eigendecompose(HermitianOperator(random_hermitian(3, 6)));
    const PureState psi = haar_state(SeedSpec{7, {}}, 6);
    const PureState evolved = evolve(h, psi, 0.0);
    CHECK((evolved.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("evolve analytic two-level case") {
    Matrix m = Matrix::Zero(2, 2);
    m(1, 1) = 1;
    const HermitianOperator h = eigendecompose(HermitianOperator(m));
    Vector v(2);
    v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    const PureState evolved = evolve(h, PureState(v), std::acos(-1.0));
    // expect (1, -1)/sqrt(2) up to a global phase
    const Complex ratio = evolved.amplitudes()(1) / evolved.amplitudes()(0);
    CHECK(std::abs(ratio - Complex(-1, 0)) < 1e-12);
}

TEST_CASE("evolve matches the step-doubling integrator on collective-spin dynamics") {
    const SpinSystemSpec spec = SpinSystemSpec::symmetric(15);
    const HermitianOperator h = eigendecompose(lmg_hamiltonian({0.4, 1.0, 15}, spec));
    const PureState psi0 = spin_coherent_state(SeedSpec{2024, {}}, spec);
    const double t = 30.0;
    const PureState spectral = evolve(h, psi0, t);
    const Vector coarse = rk4_evolve(h.matrix(), psi0.amplitudes(), t, 120000);
    const Vector fine = rk4_evolve(h.matrix(), psi0.amplitudes(), t, 240000);
    REQUIRE((coarse - fine).norm() < 1e-9);  // integrator self-consistency
    const double overlap = std::abs(fine.dot(spectral.amplitudes()));
    CHECK(1.0 - overlap < 1e-8);
}

TEST_CASE("evolution preserves the norm and composes") {
    const HermitianOperator h = eigendecompose(HermitianOperator(random_hermitian(17, 10)));
    const PureState psi0 = haar_state(SeedSpec{11, {}}, 10);
    const PureState once = evolve(h, psi0, 0.7);
    CHECK(std::abs(once.amplitudes().squaredNorm() - 1.0) < tol::unitarity);
    const PureState twice = evolve(h, once, 1.9);
    const PureState direct = evolve(h, psi0, 2.6);
    CHECK((twice.amplitudes() - direct.amplitudes()).norm() < 1e-9);
}

TEST_CASE("evolve rejects bad input") {
    const HermitianOperator h = eigendecompose(HermitianOperator(Matrix::Identity(3, 3)));
    const PureState psi = haar_state(SeedSpec{1, {}}, 4);
    CHECK_THROWS_AS(evolve(h, psi, 1.0), std::invalid_argument);
    const PureState ok = haar_state(SeedSpec{1, {}}, 3);
    CHECK_THROWS_AS(evolve(h, ok, std::nan("")), std::invalid_argument);
}

TEST_CASE("expectation basics") {
    const HermitianOperator id(Matrix::Identity(5, 5));
    const PureState psi = haar_state(SeedSpec{23, {}}, 5);
    CHECK(expectation(id, psi) == doctest::Approx(1.0));

    Matrix m = Matrix::Zero(2, 2);
    m(1, 1) = 2;
    Vector v(2);
    v << 0, 1;
    CHECK(expectation(HermitianOperator(m), PureState(v)) == doctest::Approx(2.0));
}

TEST_CASE("expectation shift covariance") {
    const HermitianOperator a(random_hermitian(5, 7));
    const PureState psi = haar_state(SeedSpec{5, {}}, 7);
    const double c = 1.375;
    const HermitianOperator shifted(a.matrix() + c * Matrix::Identity(7, 7));
    CHECK(std::abs(expectation(shifted, psi) - expectation(a, psi) - c) < 1e-9);
}

TEST_CASE("Haar mean of an expectation approaches the normalized trace") {
    const SpinSystemSpec spec = SpinSystemSpec::symmetric(15);
    const HermitianOperator sx = collective_spin(spec, Axis::X);
    const HermitianOperator shifted =
        HermitianOperator(sx.matrix() + 7.5 * Matrix::Identity(16, 16));
    const double target = shifted.matrix().trace().real() / 16.0;
    double sum = 0.0, sum_sq = 0.0;
    constexpr int kSamples = 2000;
    for (int i = 0; i < kSamples; ++i) {
        const double e = expectation(shifted, haar_state(SeedSpec{77, {static_cast<std::uint64_t>(i)}}, 16));
        sum += e;
        sum_sq += e * e;
    }
    const double mean = sum / kSamples;
    const double se = std::sqrt((sum_sq / kSamples - mean * mean) / (kSamples - 1));
    CHECK(std::abs(mean - target) < 3 * se);
}

TEST_CASE("trace and frobenius helpers") {
    CHECK(real_trace(Matrix::Identity(9, 9)) == doctest::Approx(9.0));
    const Matrix a = random_hermitian(13, 6);
    const Matrix b = random_hermitian(14, 6);
    CHECK(std::abs((a * b).trace() - (b * a).trace()) < 1e-12);
    CHECK(frobenius_inner(a, a).real() >= 0.0);
    CHECK(std::abs(frobenius_inner(a, b) - (a.adjoint() * b).trace()) < 1e-12);
}

TEST_CASE("pure states validate their norm") {
    Vector v(3);
    v << 1.0, 0.5, 0.0;
    CHECK_THROWS_AS((PureState{v}), std::invalid_argument);
    CHECK(PureState::normalized(v).amplitudes().norm() == doctest::Approx(1.0));
}

TEST_CASE("density operators validate trace and positivity") {
    CHECK_THROWS_AS((DensityOperator{Matrix::Identity(3, 3)}), std::invalid_argument);
    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 0) = 1.5;
    bad(1, 1) = -0.5;
    CHECK_THROWS_AS((DensityOperator{bad}), std::invalid_argument);
    const PureState psi = haar_state(SeedSpec{31, {}}, 4);
    const DensityOperator rho = DensityOperator::from_pure(psi);
    CHECK(rho.matrix().trace().real() == doctest::Approx(1.0));
}
