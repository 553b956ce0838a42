#pragma once

#include <optional>
#include <string>

#include "aqsens/operator_core.hpp"

namespace aqsens {

/// Shifted observable with its purity invariants. The shift moves the
/// minimum eigenvalue to zero, which leaves every expectation-value
/// difference unchanged and makes A nonnegative; eigenvalues within
/// 1e-10 of the minimum are clamped to exactly zero.
struct ObservableReport {
    std::string label;
    HermitianOperator original;
    HermitianOperator shifted;  // spectrum cached
    double shift = 0.0;         // subtracted minimum eigenvalue
    double trace_shifted = 0.0;
    double purity = 0.0;        // Tr(rho_A^2), rho_A = A_s / Tr(A_s)
    std::optional<double> diag_purity = {};  // relative to a supplied Hamiltonian
    bool hamiltonian_degenerate = false;     // adjacent H gap below 1e-10

    /// Haar-mean expectation Tr(A_s)/d, the relative-error normalizer.
    double haar_mean() const { return trace_shifted / static_cast<double>(shifted.dim()); }
    DensityOperator rho() const;
};

/// Builds the report. H, when given, supplies the eigenbasis for the
/// Hamiltonian-dependent diagonal purity sum A_nn^2 / (sum A_nn)^2.
/// Rejects observables proportional to the identity ("trivial observable").
ObservableReport build_report(const HermitianOperator& a, std::string label,
                              const HermitianOperator* hamiltonian = nullptr);

/// Tr(rho_A^2) for an operator that is already nonnegative (minimum
/// eigenvalue above -1e-10); no shift is applied, so the identity is
/// allowed here and evaluates to 1/d.
double psd_purity(const HermitianOperator& a);

/// Purity from an eigenvalue list: shift by the minimum (clamping dust to
/// zero), then sum e^2 / (sum e)^2.
double purity_from_eigenvalues(const RealVector& values);

/// Populations |b_n|^2 of a state in the Hamiltonian eigenbasis together
/// with the inverse participation ratio sum |b_n|^4.
struct DiagonalEnsemble {
    RealVector populations;
    double ipr = 0.0;
};

DiagonalEnsemble diagonal_ensemble(const HermitianOperator& hamiltonian, const PureState& psi0);

/// Tr(rho_D A): the infinite-time average of <A(t)>. The degenerate flag
/// is raised when adjacent H gaps fall below 1e-10 (the dephasing
/// argument behind the identity fails there).
struct TimeAverage {
    double value = 0.0;
    bool degenerate_gaps = false;
};

TimeAverage infinite_time_average(const HermitianOperator& a, const HermitianOperator& hamiltonian,
                                  const PureState& psi0);

/// Total variation distance (1/2) sum |p_n - q_n| between two probability
/// vectors; inputs may carry up to 1e-8 normalization slack and are
/// renormalized internally.
double variation_distance(const RealVector& p, const RealVector& q);

/// True when adjacent eigenvalue gaps of the cached spectrum fall below
/// 1e-10.
bool has_degenerate_spectrum(const HermitianOperator& op);

}  // namespace aqsens
