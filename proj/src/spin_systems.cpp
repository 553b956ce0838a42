#include "aqsens/spin_systems.hpp"

#include <bit>
#include <cmath>
#include <set>
#include <sstream>

namespace aqsens {

namespace {

constexpr int kMaxFullSpace = 14;
constexpr int kMaxSymmetric = 511;

Matrix pauli_matrix(Axis axis) {
    Matrix m(2, 2);
    switch (axis) {
        case Axis::X: m << 0, 1, 1, 0; break;
        case Axis::Y: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
        case Axis::Z: m << 1, 0, 0, -1; break;
    }
    return m;
}

// Ladder matrices of the spin-S representation, basis ordered m = S ... -S.
void ladder_matrices(int n_particles, Matrix& s_plus, Matrix& s_minus) {
    const double s = n_particles / 2.0;
    const Index d = n_particles + 1;
    s_plus = Matrix::Zero(d, d);
    for (Index i = 1; i < d; ++i) {
        const double m = s - static_cast<double>(i);
        s_plus(i - 1, i) = std::sqrt(s * (s + 1) - m * (m + 1));
    }
    s_minus = s_plus.adjoint();
}

// Single-site operator embedded in the N-site product space (site 1-based,
// leftmost factor most significant).
Matrix site_operator(int n_particles, int site, const Matrix& op) {
    Matrix out = Matrix::Identity(1, 1);
    for (int j = 1; j <= n_particles; ++j)
        out = kron(out, j == site ? op : Matrix::Identity(2, 2));
    return out;
}

void require_full(const SpinSystemSpec& spec, const char* what) {
    if (spec.representation != Representation::FullSpace) {
        std::ostringstream msg;
        msg << what << ": full-space representation required";
        throw std::invalid_argument(msg.str());
    }
}

void require_symmetric(const SpinSystemSpec& spec, const char* what) {
    if (spec.representation != Representation::SymmetricSubspace) {
        std::ostringstream msg;
        msg << what << ": symmetric-subspace representation required";
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace

SpinSystemSpec SpinSystemSpec::symmetric(int n_particles) {
    if (n_particles < 1 || n_particles > kMaxSymmetric)
        throw std::invalid_argument("SpinSystemSpec: symmetric subspace supports 1 <= N <= 511");
    return {n_particles, Representation::SymmetricSubspace};
}

SpinSystemSpec SpinSystemSpec::full(int n_particles) {
    if (n_particles < 1 || n_particles > kMaxFullSpace)
        throw std::invalid_argument("SpinSystemSpec: full space supports 1 <= N <= 14");
    return {n_particles, Representation::FullSpace};
}

Index SpinSystemSpec::dim() const {
    return representation == Representation::SymmetricSubspace
               ? static_cast<Index>(particles) + 1
               : Index{1} << particles;
}

HermitianOperator collective_spin(const SpinSystemSpec& spec, Axis axis) {
    if (spec.representation == Representation::SymmetricSubspace) {
        const double s = spec.total_spin();
        const Index d = spec.dim();
        if (axis == Axis::Z) {
            Matrix m = Matrix::Zero(d, d);
            for (Index i = 0; i < d; ++i) m(i, i) = s - static_cast<double>(i);
            return HermitianOperator(std::move(m));
        }
        Matrix sp, sm;
        ladder_matrices(spec.particles, sp, sm);
        if (axis == Axis::X) return HermitianOperator((sp + sm) / 2.0);
        return HermitianOperator((sp - sm) / Complex(0, 2));
    }
    const Matrix half_sigma = 0.5 * pauli_matrix(axis);
    Matrix total = Matrix::Zero(spec.dim(), spec.dim());
    for (int j = 1; j <= spec.particles; ++j)
        total += site_operator(spec.particles, j, half_sigma);
    return HermitianOperator(std::move(total));
}

HermitianOperator lmg_hamiltonian(const LmgParams& p, const SpinSystemSpec& spec) {
    if (p.particles < 2) throw std::invalid_argument("lmg_hamiltonian: N >= 2 required");
    if (!(p.coupling > 0)) throw std::invalid_argument("lmg_hamiltonian: coupling must be positive");
    if (p.particles != spec.particles)
        throw std::invalid_argument("lmg_hamiltonian: particle count mismatch with spec");
    const Matrix sz = collective_spin(spec, Axis::Z).matrix();
    const Matrix sx = collective_spin(spec, Axis::X).matrix();
    return HermitianOperator(-p.b_field * sz - (p.coupling / p.particles) * (sx * sx));
}

HermitianOperator tim_hamiltonian(const TimParams& p) {
    if (p.particles < 2) throw std::invalid_argument("tim_hamiltonian: N >= 2 required");
    const SpinSystemSpec spec = SpinSystemSpec::full(p.particles);
    const Index d = spec.dim();
    // Both terms are diagonal or single-site flips; assemble without the
    // generic Kronecker machinery to keep N = 14 within budget.
    Matrix h = Matrix::Zero(d, d);
    const int n = p.particles;
    for (Index basis = 0; basis < d; ++basis) {
        double diag = 0.0;
        for (int bond = 0; bond < n - 1; ++bond) {
            // site i is bit (n - i) counted from the least significant end
            const int z_i = ((basis >> (n - 1 - bond)) & 1) ? -1 : 1;
            const int z_j = ((basis >> (n - 2 - bond)) & 1) ? -1 : 1;
            diag += -(p.coupling / 4.0) * z_i * z_j;
        }
        h(basis, basis) = diag;
        for (int site = 0; site < n; ++site) {
            const Index flipped = basis ^ (Index{1} << (n - 1 - site));
            h(flipped, basis) += -(p.field / 2.0);
        }
    }
    return HermitianOperator(std::move(h));
}

HermitianOperator pauli_string(const SpinSystemSpec& spec, std::span<const PauliTerm> terms) {
    require_full(spec, "pauli_string");
    if (terms.empty()) throw std::invalid_argument("pauli_string: empty site list");
    std::set<int> seen;
    for (const PauliTerm& t : terms) {
        if (t.site < 1 || t.site > spec.particles)
            throw std::invalid_argument("pauli_string: site out of range");
        if (!seen.insert(t.site).second)
            throw std::invalid_argument("pauli_string: repeated site");
    }
    Matrix out = Matrix::Identity(1, 1);
    for (int j = 1; j <= spec.particles; ++j) {
        Matrix factor = Matrix::Identity(2, 2);
        for (const PauliTerm& t : terms)
            if (t.site == j) factor = pauli_matrix(t.axis);
        out = kron(out, factor);
    }
    return HermitianOperator(std::move(out));
}

HermitianOperator spin_power_observable(const SpinSystemSpec& spec, Axis axis, int power) {
    if (power < 1) throw std::invalid_argument("spin_power_observable: power >= 1 required");
    const Matrix base = collective_spin(spec, axis).matrix();
    Matrix out = base;
    for (int k = 1; k < power; ++k) out = Matrix(out * base);
    // repeated products accumulate rounding asymmetry at large powers
    Matrix symmetrized = (out + out.adjoint()) / 2.0;
    return HermitianOperator(std::move(symmetrized));
}

HermitianOperator sx_projector_observable(const SpinSystemSpec& spec, double m) {
    require_symmetric(spec, "sx_projector_observable");
    const double s = spec.total_spin();
    const double offset = m + s;
    const auto index = static_cast<Index>(std::llround(offset));
    if (std::abs(offset - static_cast<double>(index)) > 1e-9 || index < 0 || index >= spec.dim()) {
        std::ostringstream msg;
        msg << "sx_projector_observable: m = " << m << " is not in {-N/2,...,N/2}";
        throw std::invalid_argument(msg.str());
    }
    const HermitianOperator sx = eigendecompose(collective_spin(spec, Axis::X));
    const Vector v = sx.spectrum().vectors.col(index);
    return HermitianOperator(v * v.adjoint());
}

HermitianOperator partition_projector_observable(const SpinSystemSpec& spec, int k) {
    require_full(spec, "partition_projector_observable");
    if (k < 0 || k > spec.particles)
        throw std::invalid_argument("partition_projector_observable: k must lie in 0..N");
    const Index d = spec.dim();
    const Index block = Index{1} << (spec.particles - k);
    Matrix m = Matrix::Zero(d, d);
    // first k sites all-up selects the top k bits equal to zero
    for (Index i = 0; i < block; ++i) m(i, i) = 1.0;
    return HermitianOperator(std::move(m));
}

HermitianOperator pauli_weight_observable(const SpinSystemSpec& spec, int weight) {
    require_full(spec, "pauli_weight_observable");
    if (weight < 1 || weight > spec.particles)
        throw std::invalid_argument("pauli_weight_observable: weight must lie in 1..N");
    const int start = (spec.particles - weight) / 2 + 1;
    std::vector<PauliTerm> terms;
    for (int j = 0; j < weight; ++j) terms.push_back({Axis::X, start + j});
    return pauli_string(spec, terms);
}

PureState stretched_x_state(const SpinSystemSpec& spec, int sign) {
    if (sign != 1 && sign != -1)
        throw std::invalid_argument("stretched_x_state: sign must be +1 or -1");
    if (spec.representation == Representation::SymmetricSubspace) {
        const HermitianOperator sx = eigendecompose(collective_spin(spec, Axis::X));
        const Index col = sign > 0 ? spec.dim() - 1 : Index{0};
        return PureState::normalized(sx.spectrum().vectors.col(col));
    }
    const Index d = spec.dim();
    Vector v(d);
    const double amp = std::pow(2.0, -spec.particles / 2.0);
    for (Index i = 0; i < d; ++i) {
        const int downs = std::popcount(static_cast<unsigned long long>(i));
        v(i) = amp * (sign < 0 && (downs % 2 == 1) ? -1.0 : 1.0);
    }
    return PureState::normalized(std::move(v));
}

PureState dicke_basis_state(const SpinSystemSpec& spec, Index index) {
    require_symmetric(spec, "dicke_basis_state");
    if (index < 0 || index >= spec.dim())
        throw std::invalid_argument("dicke_basis_state: index out of range");
    Vector v = Vector::Zero(spec.dim());
    v(index) = 1.0;
    return PureState(std::move(v));
}

Matrix symmetric_subspace_isometry(int particles) {
    const SpinSystemSpec full = SpinSystemSpec::full(particles);
    const Index d_full = full.dim();
    const Index d_sym = particles + 1;
    Matrix p = Matrix::Zero(d_full, d_sym);
    std::vector<double> counts(static_cast<std::size_t>(d_sym), 0.0);
    for (Index i = 0; i < d_full; ++i) {
        const int downs = std::popcount(static_cast<unsigned long long>(i));
        counts[static_cast<std::size_t>(downs)] += 1.0;
    }
    for (Index i = 0; i < d_full; ++i) {
        const int downs = std::popcount(static_cast<unsigned long long>(i));
        // column ordering follows descending m: m = N/2 - downs
        p(i, downs) = 1.0 / std::sqrt(counts[static_cast<std::size_t>(downs)]);
    }
    return p;
}

std::string axis_name(Axis axis) {
    switch (axis) {
        case Axis::X: return "x";
        case Axis::Y: return "y";
        case Axis::Z: return "z";
    }
    return "?";
}

}  // namespace aqsens
