#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "aqsens/spin_systems.hpp"

namespace aqsens {

/// Counter-based seeding: a master seed plus a path of non-negative
/// integers identifies an independent generator stream. The mapping is a
/// pure function, so parallel workers can derive their streams in any
/// order and reproduce results bit-for-bit.
struct SeedSpec {
    std::uint64_t master = 0;
    std::vector<std::uint64_t> path = {};

    SeedSpec child(std::uint64_t index) const;
    std::uint64_t stream_key() const;
    std::mt19937_64 engine() const;
};

/// Haar-random pure state (normalized complex Gaussian vector).
PureState haar_state(const SeedSpec& seed, Index dim);

/// Haar-random unitary: complex Ginibre draw, QR, column phases corrected
/// by the R diagonal. Unitary within 1e-10.
Matrix haar_unitary(const SeedSpec& seed, Index dim);

/// Jointly Haar-distributed orthogonal pair (U e0, U e1) from one
/// Haar unitary draw.
std::pair<PureState, PureState> haar_state_pair(const SeedSpec& seed, Index dim);

/// Haar-random direction in the orthogonal complement of psi: Gaussian
/// draw, Gram-Schmidt projection, normalization. Overlap with psi is
/// re-projected below 1e-12 (hard assertion, not statistical).
PureState orthogonal_companion(const PureState& psi, const SeedSpec& seed);

/// Rotation of the +x product state by a rotation drawn uniformly
/// (Haar on the rotation group, sampled through unit quaternions);
/// equivalently a spin-coherent state with a uniform Bloch direction.
PureState spin_coherent_state(const SeedSpec& seed, const SpinSystemSpec& spec);

/// Uniformly chosen S_z eigenstate of the symmetric subspace.
PureState dicke_state(const SeedSpec& seed, const SpinSystemSpec& spec);

enum class PerturbationKind { Goe, LocalFields, CustomDiagonal };

/// Distribution over Hermitian perturbations V together with the
/// dimensionless strength lambda. GOE convention: diagonal entries have
/// unit variance, off-diagonal variance 1/2, making f(tau) = exp(-tau^2)
/// exact with tau = lambda t.
struct PerturbationModel {
    PerturbationKind kind = PerturbationKind::Goe;
    double lambda = 0.0;
    int particles = 0;  // LocalFields: chain length (full space)
    std::function<double(double)> custom_g = {};  // CustomDiagonal: characteristic function

    static PerturbationModel goe(double lambda);
    static PerturbationModel local_fields(double lambda, int particles);
    static PerturbationModel custom_diagonal(double lambda, std::function<double(double)> g);
};

/// One V draw. GOE: real symmetric Gaussian. Local fields:
/// (1/2) sum_j v_j sigma_x^(j) with v_j standard normal (dim must equal
/// 2^particles).
HermitianOperator sample_perturbation(const PerturbationModel& model, const SeedSpec& seed,
                                      Index dim);

/// Analytic f(tau) = |g(tau)|^2 for models whose characteristic function
/// is known in closed form. Local-field models have no closed form here;
/// use EmpiricalCharacteristic instead.
double characteristic_f(const PerturbationModel& model, double tau);

/// Monte-Carlo estimate of f(tau) from sampled differences of diagonal
/// perturbation elements in a reference eigenbasis. Makes no independence
/// assumption about the diagonal elements.
class EmpiricalCharacteristic {
  public:
    struct Estimate {
        double value = 0.0;
        double std_error = 0.0;
    };

    /// Draws n_samples perturbations, projects each onto the eigenbasis of
    /// `basis` (which must carry a cached spectrum), and records the
    /// difference of two randomly chosen diagonal elements per draw.
    static EmpiricalCharacteristic sample(const PerturbationModel& model,
                                          const HermitianOperator& basis,
                                          const SeedSpec& seed, int n_samples);

    Estimate f(double tau) const;
    const std::vector<double>& differences() const { return diffs_; }

  private:
    std::vector<double> diffs_;
};

/// Characteristic-function handle used by the dynamics predictions:
/// either a closed form (zero reported error) or an empirical table.
class CharacteristicFunction {
  public:
    static CharacteristicFunction analytic(const PerturbationModel& model);
    static CharacteristicFunction empirical(EmpiricalCharacteristic samples);

    EmpiricalCharacteristic::Estimate operator()(double tau) const;
    bool is_empirical() const { return empirical_.has_value(); }

  private:
    CharacteristicFunction() = default;
    std::function<double(double)> analytic_;
    std::optional<EmpiricalCharacteristic> empirical_;
};

}  // namespace aqsens
