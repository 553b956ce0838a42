#include "aqsens/ensembles.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace aqsens {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

Vector gaussian_vector(std::mt19937_64& rng, Index dim) {
    std::normal_distribution<double> normal;
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        v(i) = Complex(re, im);
    }
    return v;
}

}  // namespace

SeedSpec SeedSpec::child(std::uint64_t index) const {
    SeedSpec out = *this;
    out.path.push_back(index);
    return out;
}

std::uint64_t SeedSpec::stream_key() const {
    std::uint64_t h = splitmix64(master);
    for (const std::uint64_t x : path) h = splitmix64(h ^ splitmix64(x));
    return h;
}

std::mt19937_64 SeedSpec::engine() const { return std::mt19937_64(stream_key()); }

PureState haar_state(const SeedSpec& seed, Index dim) {
    if (dim < 2) throw std::invalid_argument("haar_state: dim >= 2 required");
    auto rng = seed.engine();
    return PureState::normalized(gaussian_vector(rng, dim));
}

Matrix haar_unitary(const SeedSpec& seed, Index dim) {
    if (dim < 2) throw std::invalid_argument("haar_unitary: dim >= 2 required");
    auto rng = seed.engine();
    Matrix z(dim, dim);
    std::normal_distribution<double> normal;
    for (Index r = 0; r < dim; ++r)
        for (Index c = 0; c < dim; ++c) {
            const double re = normal(rng);
            const double im = normal(rng);
            z(r, c) = Complex(re, im);
        }
    Eigen::HouseholderQR<Matrix> qr(z);
    Matrix q = qr.householderQ();
    const Matrix r_mat = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index c = 0; c < dim; ++c) {
        const Complex rc = r_mat(c, c);
        const double mag = std::abs(rc);
        q.col(c) *= mag > 0 ? rc / mag : Complex(1, 0);
    }
    return q;
}

std::pair<PureState, PureState> haar_state_pair(const SeedSpec& seed, Index dim) {
    const Matrix u = haar_unitary(seed, dim);
    return {PureState::normalized(u.col(0)), PureState::normalized(u.col(1))};
}

PureState orthogonal_companion(const PureState& psi, const SeedSpec& seed) {
    if (psi.dim() < 2)
        throw std::invalid_argument("orthogonal_companion: dim >= 2 required");
    auto rng = seed.engine();
    for (int attempt = 0; attempt < 64; ++attempt) {
        Vector v = gaussian_vector(rng, psi.dim());
        v -= psi.amplitudes() * psi.amplitudes().dot(v);
        // second projection pass removes the numerical residue
        v -= psi.amplitudes() * psi.amplitudes().dot(v);
        const double n = v.norm();
        if (n > 1e-6) {
            Vector out = v / n;
            if (std::abs(psi.amplitudes().dot(out)) > tol::orthogonality)
                continue;
            return PureState(std::move(out));
        }
    }
    throw std::runtime_error("orthogonal_companion: repeated degenerate draws");
}

PureState spin_coherent_state(const SeedSpec& seed, const SpinSystemSpec& spec) {
    if (spec.representation != Representation::SymmetricSubspace)
        throw std::invalid_argument("spin_coherent_state: symmetric subspace required");
    auto rng = seed.engine();
    std::normal_distribution<double> normal;
    // uniform unit quaternion -> Haar-distributed rotation
    double w = normal(rng), x = normal(rng), y = normal(rng), z = normal(rng);
    const double q_norm = std::sqrt(w * w + x * x + y * y + z * z);
    w /= q_norm; x /= q_norm; y /= q_norm; z /= q_norm;
    if (w < 0) { w = -w; x = -x; y = -y; z = -z; }
    const double vec_norm = std::sqrt(x * x + y * y + z * z);
    const PureState fiducial = stretched_x_state(spec, +1);
    if (vec_norm < 1e-300) return fiducial;
    const double angle = 2.0 * std::atan2(vec_norm, w);
    const Matrix generator = (x * collective_spin(spec, Axis::X).matrix() +
                              y * collective_spin(spec, Axis::Y).matrix() +
                              z * collective_spin(spec, Axis::Z).matrix()) /
                             vec_norm;
    const HermitianOperator g = eigendecompose(HermitianOperator(generator));
    return evolve(g, fiducial, angle);
}

PureState dicke_state(const SeedSpec& seed, const SpinSystemSpec& spec) {
    if (spec.representation != Representation::SymmetricSubspace)
        throw std::invalid_argument("dicke_state: symmetric subspace required");
    auto rng = seed.engine();
    std::uniform_int_distribution<Index> pick(0, spec.dim() - 1);
    return dicke_basis_state(spec, pick(rng));
}

PerturbationModel PerturbationModel::goe(double lambda) {
    if (lambda < 0) throw std::invalid_argument("PerturbationModel: lambda >= 0 required");
    return {PerturbationKind::Goe, lambda, 0, {}};
}

PerturbationModel PerturbationModel::local_fields(double lambda, int particles) {
    if (lambda < 0) throw std::invalid_argument("PerturbationModel: lambda >= 0 required");
    if (particles < 1) throw std::invalid_argument("PerturbationModel: particles >= 1 required");
    return {PerturbationKind::LocalFields, lambda, particles, {}};
}

PerturbationModel PerturbationModel::custom_diagonal(double lambda,
                                                     std::function<double(double)> g) {
    if (lambda < 0) throw std::invalid_argument("PerturbationModel: lambda >= 0 required");
    return {PerturbationKind::CustomDiagonal, lambda, 0, std::move(g)};
}

HermitianOperator sample_perturbation(const PerturbationModel& model, const SeedSpec& seed,
                                      Index dim) {
    auto rng = seed.engine();
    std::normal_distribution<double> normal;
    switch (model.kind) {
        case PerturbationKind::CustomDiagonal:
            throw std::invalid_argument(
                "sample_perturbation: custom-diagonal models define g(tau) only");
        case PerturbationKind::Goe: {
            const double off_scale = std::numbers::sqrt2 / 2.0;
            Matrix v = Matrix::Zero(dim, dim);
            for (Index r = 0; r < dim; ++r) {
                v(r, r) = normal(rng);
                for (Index c = r + 1; c < dim; ++c) {
                    const double x = normal(rng) * off_scale;
                    v(r, c) = x;
                    v(c, r) = x;
                }
            }
            return HermitianOperator(std::move(v));
        }
        case PerturbationKind::LocalFields: {
            const SpinSystemSpec spec = SpinSystemSpec::full(model.particles);
            if (spec.dim() != dim) {
                std::ostringstream msg;
                msg << "sample_perturbation: local fields require dim = 2^" << model.particles
                    << ", got " << dim;
                throw std::invalid_argument(msg.str());
            }
            const int n = model.particles;
            Matrix v = Matrix::Zero(dim, dim);
            for (int site = 0; site < n; ++site) {
                const double field = normal(rng);
                for (Index basis = 0; basis < dim; ++basis) {
                    const Index flipped = basis ^ (Index{1} << (n - 1 - site));
                    v(flipped, basis) += 0.5 * field;
                }
            }
            return HermitianOperator(std::move(v));
        }
    }
    throw std::logic_error("sample_perturbation: unknown model kind");
}

double characteristic_f(const PerturbationModel& model, double tau) {
    if (tau < 0) throw std::invalid_argument("characteristic_f: tau >= 0 required");
    switch (model.kind) {
        case PerturbationKind::Goe:
            return std::exp(-tau * tau);
        case PerturbationKind::CustomDiagonal: {
            if (!model.custom_g)
                throw std::invalid_argument("characteristic_f: custom model without g");
            const double g = model.custom_g(tau);
            return g * g;
        }
        case PerturbationKind::LocalFields:
            throw std::invalid_argument(
                "characteristic_f: no closed form for local fields; use the empirical estimate");
    }
    throw std::logic_error("characteristic_f: unknown model kind");
}

EmpiricalCharacteristic EmpiricalCharacteristic::sample(const PerturbationModel& model,
                                                        const HermitianOperator& basis,
                                                        const SeedSpec& seed, int n_samples) {
    if (n_samples < 2)
        throw std::invalid_argument("EmpiricalCharacteristic: n_samples >= 2 required");
    const Index d = basis.dim();
    const Matrix& u = basis.spectrum().vectors;

    EmpiricalCharacteristic out;
    out.diffs_.resize(static_cast<std::size_t>(n_samples));

    // Local fields: V_kk = sum_j v_j c_{jk}; precompute the projections once.
    RealMatrix site_diag;
    if (model.kind == PerturbationKind::LocalFields) {
        const SpinSystemSpec spec = SpinSystemSpec::full(model.particles);
        if (spec.dim() != d)
            throw std::invalid_argument("EmpiricalCharacteristic: basis dimension mismatch");
        const int n = model.particles;
        site_diag.resize(n, d);
        for (int site = 0; site < n; ++site) {
            for (Index k = 0; k < d; ++k) {
                Complex acc = 0;
                for (Index b = 0; b < d; ++b) {
                    const Index flipped = b ^ (Index{1} << (n - 1 - site));
                    acc += std::conj(u(flipped, k)) * u(b, k);
                }
                site_diag(site, k) = 0.5 * acc.real();
            }
        }
    }

    for (int i = 0; i < n_samples; ++i) {
        const SeedSpec draw_seed = seed.child(static_cast<std::uint64_t>(i));
        auto rng = draw_seed.child(1).engine();
        std::uniform_int_distribution<Index> pick(0, d - 1);
        Index l = pick(rng);
        Index m = pick(rng);
        while (m == l) m = pick(rng);

        double diff = 0.0;
        if (model.kind == PerturbationKind::LocalFields) {
            auto field_rng = draw_seed.child(0).engine();
            std::normal_distribution<double> normal;
            double dl = 0.0, dm = 0.0;
            for (int site = 0; site < model.particles; ++site) {
                const double v = normal(field_rng);
                dl += v * site_diag(site, l);
                dm += v * site_diag(site, m);
            }
            diff = dl - dm;
        } else {
            const HermitianOperator v = sample_perturbation(model, draw_seed.child(0), d);
            const Complex vl = u.col(l).dot(v.matrix() * u.col(l));
            const Complex vm = u.col(m).dot(v.matrix() * u.col(m));
            diff = vl.real() - vm.real();
        }
        out.diffs_[static_cast<std::size_t>(i)] = diff;
    }
    return out;
}

EmpiricalCharacteristic::Estimate EmpiricalCharacteristic::f(double tau) const {
    if (tau < 0) throw std::invalid_argument("EmpiricalCharacteristic: tau >= 0 required");
    double mean = 0.0;
    for (const double d : diffs_) mean += std::cos(d * tau);
    mean /= static_cast<double>(diffs_.size());
    double var = 0.0;
    for (const double d : diffs_) {
        const double c = std::cos(d * tau) - mean;
        var += c * c;
    }
    var /= static_cast<double>(diffs_.size() - 1);
    const double se = std::sqrt(var / static_cast<double>(diffs_.size()));
    return {std::clamp(mean, 0.0, 1.0), se};
}

CharacteristicFunction CharacteristicFunction::analytic(const PerturbationModel& model) {
    CharacteristicFunction out;
    out.analytic_ = [model](double tau) { return characteristic_f(model, tau); };
    return out;
}

CharacteristicFunction CharacteristicFunction::empirical(EmpiricalCharacteristic samples) {
    CharacteristicFunction out;
    out.empirical_ = std::move(samples);
    return out;
}

EmpiricalCharacteristic::Estimate CharacteristicFunction::operator()(double tau) const {
    if (empirical_) return empirical_->f(tau);
    return {analytic_(tau), 0.0};
}

}  // namespace aqsens
