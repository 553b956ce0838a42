#include "aqsens/operator_core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace aqsens {

namespace {

// Eigen's self-adjoint solver is O(d^3); beyond this the dense path is not
// a desk-scale computation any more.
constexpr Index kMaxDenseEigDim = 4096;

void fix_column_phases(Matrix& vectors) {
    for (Index c = 0; c < vectors.cols(); ++c) {
        for (Index r = 0; r < vectors.rows(); ++r) {
            const Complex v = vectors(r, c);
            if (std::abs(v) > 1e-10) {
                vectors.col(c) *= std::conj(v) / std::abs(v);
                break;
            }
        }
    }
}

std::shared_ptr<const Spectrum> decompose_diagonal(const Matrix& m) {
    const Index d = m.rows();
    std::vector<Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        return m(a, a).real() < m(b, b).real();
    });
    auto spec = std::make_shared<Spectrum>();
    spec->values.resize(d);
    spec->vectors = Matrix::Zero(d, d);
    for (Index k = 0; k < d; ++k) {
        spec->values(k) = m(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]).real();
        spec->vectors(order[static_cast<std::size_t>(k)], k) = Complex(1, 0);
    }
    return spec;
}

std::shared_ptr<const Spectrum> decompose_dense(const Matrix& m) {
    if (m.rows() > kMaxDenseEigDim) {
        std::ostringstream msg;
        msg << "eigendecompose: dimension " << m.rows() << " exceeds dense cap "
            << kMaxDenseEigDim;
        throw std::invalid_argument(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error(
            "eigendecompose: QR iteration did not converge within the solver cap of "
            "30 sweeps per eigenvalue");
    }
    auto spec = std::make_shared<Spectrum>();
    spec->values = solver.eigenvalues();
    spec->vectors = solver.eigenvectors();
    fix_column_phases(spec->vectors);
    return spec;
}

}  // namespace

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

HermitianOperator::HermitianOperator(Matrix m) : mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols())
        throw std::invalid_argument("HermitianOperator: matrix must be square");
    if (mat_.rows() == 0)
        throw std::invalid_argument("HermitianOperator: empty matrix");
    if (!mat_.allFinite())
        throw std::invalid_argument("HermitianOperator: non-finite entries");
    const double dev = hermiticity_deviation(mat_);
    if (dev > tol::hermiticity) {
        std::ostringstream msg;
        msg << "HermitianOperator: max deviation from hermiticity " << dev
            << " exceeds " << tol::hermiticity;
        throw std::invalid_argument(msg.str());
    }
}

const Spectrum& HermitianOperator::spectrum() const {
    if (!spectrum_)
        throw std::logic_error("HermitianOperator: spectrum not cached; call eigendecompose");
    return *spectrum_;
}

bool HermitianOperator::is_diagonal() const {
    for (Index j = 0; j < mat_.cols(); ++j)
        for (Index i = 0; i < mat_.rows(); ++i)
            if (i != j && mat_(i, j) != Complex(0, 0)) return false;
    return true;
}

HermitianOperator eigendecompose(const HermitianOperator& op) {
    if (op.has_spectrum()) return op;
    HermitianOperator out = op;
    out.spectrum_ = op.is_diagonal() ? decompose_diagonal(op.matrix())
                                     : decompose_dense(op.matrix());
    return out;
}

PureState::PureState(Vector amplitudes) : amp_(std::move(amplitudes)) {
    if (amp_.size() == 0) throw std::invalid_argument("PureState: empty vector");
    if (!amp_.allFinite()) throw std::invalid_argument("PureState: non-finite entries");
    const double norm_sq = amp_.squaredNorm();
    if (std::abs(norm_sq - 1.0) > tol::state_norm) {
        std::ostringstream msg;
        msg << "PureState: squared norm " << norm_sq << " deviates from 1 beyond "
            << tol::state_norm;
        throw std::invalid_argument(msg.str());
    }
}

PureState PureState::normalized(Vector amplitudes) {
    const double n = amplitudes.norm();
    if (!(n > 0.0)) throw std::invalid_argument("PureState: cannot normalize zero vector");
    return PureState(amplitudes / n);
}

DensityOperator::DensityOperator(Matrix m) : mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols())
        throw std::invalid_argument("DensityOperator: matrix must be square");
    const double dev = hermiticity_deviation(mat_);
    if (dev > tol::hermiticity)
        throw std::invalid_argument("DensityOperator: not Hermitian within 1e-10");
    const double tr = mat_.trace().real();
    if (std::abs(tr - 1.0) > tol::trace_one)
        throw std::invalid_argument("DensityOperator: trace deviates from 1 beyond 1e-10");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(mat_, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("DensityOperator: eigenvalue check failed to converge");
    if (solver.eigenvalues()(0) < -tol::positivity)
        throw std::invalid_argument("DensityOperator: negative eigenvalue beyond -1e-10");
}

DensityOperator DensityOperator::from_pure(const PureState& psi) {
    return DensityOperator(psi.amplitudes() * psi.amplitudes().adjoint());
}

PureState evolve(const HermitianOperator& h, const PureState& psi0, double t) {
    if (h.dim() != psi0.dim())
        throw std::invalid_argument("evolve: dimension mismatch");
    if (!std::isfinite(t))
        throw std::invalid_argument("evolve: time must be finite");
    const HermitianOperator hd = h.has_spectrum() ? h : eigendecompose(h);
    const Spectrum& s = hd.spectrum();
    Vector coeff = s.vectors.adjoint() * psi0.amplitudes();
    for (Index k = 0; k < coeff.size(); ++k)
        coeff(k) *= std::polar(1.0, -s.values(k) * t);
    return PureState::normalized(s.vectors * coeff);
}

Matrix evolve_on_grid(const HermitianOperator& h, const PureState& psi0,
                      std::span<const double> times) {
    if (h.dim() != psi0.dim())
        throw std::invalid_argument("evolve_on_grid: dimension mismatch");
    const Spectrum& s = h.spectrum();
    const Index d = h.dim();
    const Index n_t = static_cast<Index>(times.size());
    const Vector coeff = s.vectors.adjoint() * psi0.amplitudes();
    Matrix w(d, n_t);
    for (Index k = 0; k < n_t; ++k) {
        const double t = times[static_cast<std::size_t>(k)];
        for (Index n = 0; n < d; ++n)
            w(n, k) = std::polar(1.0, -s.values(n) * t) * coeff(n);
    }
    return s.vectors * w;
}

double expectation(const HermitianOperator& a, const PureState& psi) {
    if (a.dim() != psi.dim())
        throw std::invalid_argument("expectation: dimension mismatch");
    const Complex val = psi.amplitudes().dot(a.matrix() * psi.amplitudes());
    if (std::abs(val.imag()) > tol::expectation_imag) {
        std::ostringstream msg;
        msg << "expectation: imaginary residue " << val.imag()
            << " signals a corrupted operator";
        throw std::runtime_error(msg.str());
    }
    return val.real();
}

std::vector<double> expectation_on_grid(const HermitianOperator& a, const Matrix& states) {
    if (a.dim() != states.rows())
        throw std::invalid_argument("expectation_on_grid: dimension mismatch");
    const Matrix applied = a.matrix() * states;
    std::vector<double> out(static_cast<std::size_t>(states.cols()));
    for (Index k = 0; k < states.cols(); ++k)
        out[static_cast<std::size_t>(k)] = states.col(k).conjugate().cwiseProduct(applied.col(k)).sum().real();
    return out;
}

double real_trace(const Matrix& m) { return m.trace().real(); }

}  // namespace aqsens
