#include "aqsens/observable_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace aqsens {

namespace {

RealVector clamped_shifted_values(const RealVector& values) {
    RealVector out = values.array() - values(0);
    for (Index i = 0; i < out.size(); ++i)
        if (out(i) < tol::eigenvalue_clamp) out(i) = 0.0;
    return out;
}

}  // namespace

DensityOperator ObservableReport::rho() const {
    return DensityOperator(shifted.matrix() / trace_shifted);
}

ObservableReport build_report(const HermitianOperator& a, std::string label,
                              const HermitianOperator* hamiltonian) {
    const HermitianOperator ad = eigendecompose(a);
    const RealVector& values = ad.spectrum().values;
    const Index d = ad.dim();
    const double spread = values(d - 1) - values(0);
    const double scale = std::max({1.0, std::abs(values(0)), std::abs(values(d - 1))});
    if (spread <= 1e-12 * scale)
        throw std::invalid_argument("build_report: trivial observable (proportional to identity)");

    const RealVector shifted_values = clamped_shifted_values(values);
    Matrix shifted_matrix = ad.matrix();
    shifted_matrix.diagonal().array() -= Complex(values(0), 0.0);
    const double trace_shifted = shifted_values.sum();
    ObservableReport report{std::move(label),
                            ad,
                            eigendecompose(HermitianOperator(std::move(shifted_matrix))),
                            values(0),
                            trace_shifted,
                            shifted_values.squaredNorm() / (trace_shifted * trace_shifted),
                            {},
                            false};

    if (hamiltonian != nullptr) {
        if (hamiltonian->dim() != d)
            throw std::invalid_argument("build_report: Hamiltonian dimension mismatch");
        const Matrix& u = hamiltonian->spectrum().vectors;
        RealVector diag(d);
        for (Index n = 0; n < d; ++n) {
            const double v = u.col(n).dot(report.shifted.matrix() * u.col(n)).real();
            diag(n) = v < 0.0 ? 0.0 : v;
        }
        const double sum = diag.sum();
        report.diag_purity = diag.squaredNorm() / (sum * sum);
        report.hamiltonian_degenerate = has_degenerate_spectrum(*hamiltonian);
    }
    return report;
}

double psd_purity(const HermitianOperator& a) {
    const HermitianOperator ad = eigendecompose(a);
    const RealVector& values = ad.spectrum().values;
    if (values(0) < -tol::positivity)
        throw std::invalid_argument("psd_purity: operator has negative eigenvalues");
    const double tr = values.sum();
    if (!(tr > 0)) throw std::invalid_argument("psd_purity: zero trace");
    return values.squaredNorm() / (tr * tr);
}

double purity_from_eigenvalues(const RealVector& values) {
    RealVector sorted = values;
    std::sort(sorted.data(), sorted.data() + sorted.size());
    const RealVector shifted = clamped_shifted_values(sorted);
    const double tr = shifted.sum();
    if (!(tr > 0))
        throw std::invalid_argument("purity_from_eigenvalues: trivial spectrum");
    return shifted.squaredNorm() / (tr * tr);
}

DiagonalEnsemble diagonal_ensemble(const HermitianOperator& hamiltonian, const PureState& psi0) {
    if (hamiltonian.dim() != psi0.dim())
        throw std::invalid_argument("diagonal_ensemble: dimension mismatch");
    const Vector b = hamiltonian.spectrum().vectors.adjoint() * psi0.amplitudes();
    DiagonalEnsemble out;
    out.populations = b.cwiseAbs2();
    out.ipr = out.populations.squaredNorm();
    return out;
}

TimeAverage infinite_time_average(const HermitianOperator& a, const HermitianOperator& hamiltonian,
                                  const PureState& psi0) {
    if (a.dim() != hamiltonian.dim())
        throw std::invalid_argument("infinite_time_average: dimension mismatch");
    const DiagonalEnsemble ens = diagonal_ensemble(hamiltonian, psi0);
    const Matrix& u = hamiltonian.spectrum().vectors;
    double value = 0.0;
    for (Index n = 0; n < hamiltonian.dim(); ++n)
        value += ens.populations(n) * u.col(n).dot(a.matrix() * u.col(n)).real();
    return {value, has_degenerate_spectrum(hamiltonian)};
}

double variation_distance(const RealVector& p, const RealVector& q) {
    if (p.size() != q.size())
        throw std::invalid_argument("variation_distance: size mismatch");
    const double sp = p.sum();
    const double sq = q.sum();
    if (std::abs(sp - 1.0) > tol::distribution_norm || std::abs(sq - 1.0) > tol::distribution_norm)
        throw std::invalid_argument("variation_distance: input not normalized within 1e-8");
    return 0.5 * (p / sp - q / sq).cwiseAbs().sum();
}

bool has_degenerate_spectrum(const HermitianOperator& op) {
    const RealVector& values = op.spectrum().values;
    for (Index i = 1; i < values.size(); ++i)
        if (values(i) - values(i - 1) < tol::degenerate_gap) return true;
    return false;
}

}  // namespace aqsens
