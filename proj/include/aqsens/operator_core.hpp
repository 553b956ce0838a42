#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "aqsens/types.hpp"

namespace aqsens {

/// Maximum absolute entry deviation of m from its conjugate transpose.
template <typename Derived>
double hermiticity_deviation(const Eigen::MatrixBase<Derived>& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Frobenius inner product Tr(a† b).
template <typename DerivedA, typename DerivedB>
Complex frobenius_inner(const Eigen::MatrixBase<DerivedA>& a,
                        const Eigen::MatrixBase<DerivedB>& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("frobenius_inner: dimension mismatch");
    return a.conjugate().cwiseProduct(b).sum();
}

/// Kronecker product of two dense matrices.
Matrix kron(const Matrix& a, const Matrix& b);

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues,
/// orthonormal eigenvectors with the first nonzero component of each
/// column rotated to be real positive (deterministic for a fixed input).
struct Spectrum {
    RealVector values;  // ascending
    Matrix vectors;     // columns aligned with values
};

class HermitianOperator {
  public:
    /// Validates squareness, finiteness and hermiticity (1e-10 max-entry).
    explicit HermitianOperator(Matrix m);

    Index dim() const { return mat_.rows(); }
    const Matrix& matrix() const { return mat_; }

    bool has_spectrum() const { return spectrum_ != nullptr; }
    const Spectrum& spectrum() const;

    double min_eigenvalue() const { return spectrum().values(0); }
    double max_eigenvalue() const { return spectrum().values(dim() - 1); }

    /// True when every off-diagonal entry is exactly zero.
    bool is_diagonal() const;

  private:
    friend HermitianOperator eigendecompose(const HermitianOperator& op);
    Matrix mat_;
    std::shared_ptr<const Spectrum> spectrum_;
};

/// Returns a copy of op with the spectral decomposition cached. Diagonal
/// inputs take a direct sorting path (stable in the eigenvalue, unit
/// eigenvectors); dense inputs go through the self-adjoint solver.
HermitianOperator eigendecompose(const HermitianOperator& op);

class PureState {
  public:
    /// Validates unit norm within 1e-12.
    explicit PureState(Vector amplitudes);

    /// Normalizes and constructs (rejects the zero vector).
    static PureState normalized(Vector amplitudes);

    Index dim() const { return amp_.size(); }
    const Vector& amplitudes() const { return amp_; }

  private:
    Vector amp_;
};

class DensityOperator {
  public:
    /// Validates hermiticity, unit trace and positivity (eigenvalues
    /// above -1e-10).
    explicit DensityOperator(Matrix m);

    static DensityOperator from_pure(const PureState& psi);

    Index dim() const { return mat_.rows(); }
    const Matrix& matrix() const { return mat_; }

  private:
    Matrix mat_;
};

/// e^{-iHt} |psi0>, evaluated through the spectral decomposition of H
/// (computed on the fly when not cached). hbar = 1.
PureState evolve(const HermitianOperator& h, const PureState& psi0, double t);

/// States e^{-iHt_k} |psi0> for every t_k, as columns of a dim x K matrix.
/// Requires the spectrum of h to be cached.
Matrix evolve_on_grid(const HermitianOperator& h, const PureState& psi0,
                      std::span<const double> times);

/// <psi|A|psi>. Rejects results whose imaginary residue exceeds 1e-8;
/// smaller residues are discarded.
double expectation(const HermitianOperator& a, const PureState& psi);

/// Re <psi_k|A|psi_k> for every column of a dim x K state matrix.
std::vector<double> expectation_on_grid(const HermitianOperator& a, const Matrix& states);

/// Tr(m) for a Hermitian matrix, returned as the real part.
double real_trace(const Matrix& m);

}  // namespace aqsens
