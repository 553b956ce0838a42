#pragma once

#include <span>
#include <string>
#include <vector>

#include "aqsens/operator_core.hpp"

namespace aqsens {

enum class Representation { SymmetricSubspace, FullSpace };
enum class Axis { X, Y, Z };

/// Collective-spin system of N spin-1/2 particles, either restricted to
/// the maximal-spin sector S = N/2 (dimension N+1) or kept in the full
/// product space (dimension 2^N, capped at N = 14).
struct SpinSystemSpec {
    int particles = 0;
    Representation representation = Representation::SymmetricSubspace;

    static SpinSystemSpec symmetric(int n_particles);
    static SpinSystemSpec full(int n_particles);

    Index dim() const;
    double total_spin() const { return particles / 2.0; }
};

/// S_alpha = (1/2) sum_i sigma_alpha^(i). Symmetric subspace: the spin-S
/// ladder matrices in the basis ordered by descending magnetization
/// m = N/2 ... -N/2. Full space: the Kronecker sum, site 1 leftmost.
HermitianOperator collective_spin(const SpinSystemSpec& spec, Axis axis);

struct LmgParams {
    double b_field = 0.0;  // transverse field, units of coupling
    double coupling = 1.0;
    int particles = 0;
};

/// -B S_z - (coupling/N) S_x^2 in the chosen representation.
HermitianOperator lmg_hamiltonian(const LmgParams& p, const SpinSystemSpec& spec);

struct TimParams {
    double field = 0.0;    // transverse field h
    double coupling = 1.0;  // nearest-neighbor J
    int particles = 0;      // chain length, open boundary
};

/// -(h/2) sum_i sigma_x^(i) - (J/4) sum_{i<N} sigma_z^(i) sigma_z^(i+1),
/// full 2^N space.
HermitianOperator tim_hamiltonian(const TimParams& p);

struct PauliTerm {
    Axis axis = Axis::Z;
    int site = 1;  // 1-based
};

/// Product of single-site Pauli operators on distinct sites (identity
/// elsewhere). Full-space representation only.
HermitianOperator pauli_string(const SpinSystemSpec& spec, std::span<const PauliTerm> terms);

/// S_axis^k.
HermitianOperator spin_power_observable(const SpinSystemSpec& spec, Axis axis, int power);

/// |m_x><m_x| built from the S_x eigenbasis of the symmetric subspace;
/// m runs over -N/2 ... N/2 and labels eigenvectors by eigenvalue.
HermitianOperator sx_projector_observable(const SpinSystemSpec& spec, double m);

/// O(k) = |phi_k><phi_k| (x) identity on the remaining N-k sites, with
/// phi_k the all-up state of the first k sites. k = 0 gives the identity.
HermitianOperator partition_projector_observable(const SpinSystemSpec& spec, int k);

/// sigma_x string of the given weight on consecutive sites centered in
/// the chain (start site floor((N-w)/2) + 1).
HermitianOperator pauli_weight_observable(const SpinSystemSpec& spec, int weight);

/// Product state with every spin polarized along +x (sign=+1) or -x
/// (sign=-1); in the symmetric subspace this is the extremal S_x
/// eigenvector.
PureState stretched_x_state(const SpinSystemSpec& spec, int sign);

/// S_z eigenstate of the symmetric subspace by basis index (0 = m=N/2).
PureState dicke_basis_state(const SpinSystemSpec& spec, Index index);

/// Isometry from the symmetric subspace into the full product space;
/// columns are the normalized Dicke states ordered by descending m.
Matrix symmetric_subspace_isometry(int particles);

std::string axis_name(Axis axis);

}  // namespace aqsens
