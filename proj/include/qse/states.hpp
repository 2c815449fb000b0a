#pragma once

#include "qse/types.hpp"

#include <array>
#include <random>
#include <span>
#include <vector>

namespace qse {

/// Pauli matrices indexed x, y, z.
const std::array<Mat2c, 3>& pauli_matrices();

/// Bloch vectors and spin-correlation matrix:
/// rho = 1/4 (I + a.sigma (x) I + I (x) b.sigma + sum T_ij sigma_i (x) sigma_j).
struct PauliDecomposition {
    Vec3 a = Vec3::Zero();
    Vec3 b = Vec3::Zero();
    Mat3 T = Mat3::Zero();

    /// Exchanges the roles of the parties: a <-> b, T -> T^T.
    PauliDecomposition swapped() const { return {b, a, T.transpose()}; }

    /// Reassembles the 4x4 matrix (no validation).
    Mat4c reassemble() const;

    /// Tr(rho^2) = (1 + |a|^2 + |b|^2 + |T|_F^2) / 4.
    double purity() const;
};

/// A validated two-qubit density matrix in the basis |00>, |01>, |10>, |11>
/// (first factor Alice, second Bob). Hermitian, unit trace and PSD up to the
/// tolerances documented on validate_state().
///
/// The Pauli decomposition is fixed at construction and is the canonical form:
/// derived quantities are computed from it, so two states with identical
/// (a, b, T) give identical results whatever matrix they were built from.
class TwoQubitState {
public:
    const Mat4c& matrix() const noexcept { return matrix_; }
    const PauliDecomposition& pauli() const noexcept { return pauli_; }

private:
    TwoQubitState(const Mat4c& m, const PauliDecomposition& d) : matrix_(m), pauli_(d) {}
    friend TwoQubitState validate_state(const Mat4c& matrix);
    friend TwoQubitState state_from_pauli(const PauliDecomposition& decomp);
    friend TwoQubitState swap_parties(const TwoQubitState& state);

    Mat4c matrix_;
    PauliDecomposition pauli_;
};

/// Checks a candidate density matrix.
///
/// Rejects non-finite entries (InvalidInput), asymmetry max|M - M^dagger| > 1e-12
/// (NotHermitian), |Tr M - 1| > 1e-12 (NotUnitTrace) and a smallest eigenvalue
/// below -1e-10 (NotPositive). Each error carries the violating magnitude. The
/// accepted matrix is replaced by its Hermitian part.
TwoQubitState validate_state(const Mat4c& matrix);

PauliDecomposition pauli_decompose(const TwoQubitState& state);

/// Reassembles and validates; the decomposition is kept exactly as given.
TwoQubitState state_from_pauli(const PauliDecomposition& decomp);

/// Single-qubit state with its Bloch vector.
class QubitState {
public:
    /// Validates Hermiticity, trace and positivity with the same tolerances as
    /// validate_state().
    static QubitState from_matrix(const Mat2c& m);

    /// |v| may exceed 1 by at most 1e-9 (the vector is then rescaled onto the
    /// sphere); anything larger is NotPositive.
    static QubitState from_bloch(const Vec3& v);

    const Mat2c& matrix() const noexcept { return matrix_; }
    const Vec3& bloch() const noexcept { return bloch_; }
    double purity() const { return 0.5 * (1.0 + bloch_.squaredNorm()); }

private:
    QubitState(const Mat2c& m, const Vec3& v) : matrix_(m), bloch_(v) {}

    Mat2c matrix_;
    Vec3 bloch_;
};

Mat2c qubit_matrix(const Vec3& bloch);
Vec3 bloch_vector(const Mat2c& m);

/// Rank-one projector (I + n.sigma)/2 for a unit vector n.
Mat2c projector(const Vec3& n);

QubitState reduced_state(const TwoQubitState& state, Party party);

/// Exchanges the two qubits (|ij> -> |ji>).
TwoQubitState swap_parties(const TwoQubitState& state);

/// Partial transpose on Bob's factor.
Mat4c partial_transpose(const Mat4c& m);

struct PptResult {
    bool entangled = false;
    double negativity = 0.0;   ///< |sum of negative eigenvalues of rho^{T_B}|
    double min_eigenvalue = 0.0;
};

/// Peres-Horodecki test; exact for two qubits. Entangled iff rho^{T_B} has an
/// eigenvalue below -1e-10.
PptResult is_entangled_ppt(const TwoQubitState& state);

double global_purity(const TwoQubitState& state);

/// One outcome of one setting: probability and normalized conditional state.
struct AssemblageElement {
    double probability = 0.0;
    QubitState state;
};

using SettingEnsemble = std::vector<AssemblageElement>;

/// B_{r|s} = rho_B^{-1/2} sigma_{r|s} rho_B^{-1/2}, with sigma = p rho.
///
/// Requires a full-rank marginal (SingularMarginal otherwise) and
/// sum_r sigma_{r|s} = rho_B per setting within 1e-10 (InvalidInput otherwise).
std::vector<std::vector<Mat2c>>
steering_equivalent_observables(std::span<const SettingEnsemble> assemblage,
                                const QubitState& rho_b);

/// Ginibre-distributed random mixed state G G^dagger / Tr, with G a 4 x rank
/// matrix of independent standard complex Gaussians.
TwoQubitState random_ginibre_state(std::mt19937_64& rng, int rank = 4);

} // namespace qse
