#pragma once

#include <array>

#include "xtel/channels.hpp"

namespace xtel {

enum class BellIndex { phi_plus = 0, phi_minus = 1, psi_plus = 2, psi_minus = 3 };

inline constexpr std::array<BellIndex, 4> kBellIndices = {
    BellIndex::phi_plus, BellIndex::phi_minus, BellIndex::psi_plus,
    BellIndex::psi_minus};

/// Unitary the receiver applies to undo the branch-dependent Pauli:
/// phi+ -> I, phi- -> sz, psi+ -> sx, psi- -> sx*sz.
enum class Correction { identity, sigma_z, sigma_x, sigma_x_sigma_z };

Eigen::Vector4cd bell_ket(BellIndex k);
Matrix bell_projector(BellIndex k);
Correction correction_for(BellIndex k);
Matrix correction_unitary(Correction c);
const char* to_string(BellIndex k);
const char* to_string(Correction c);

struct TeleportOutcome {
    BellIndex bell = BellIndex::phi_plus;
    double probability = 0;
    std::optional<Matrix> corrected_state; // 2x2; empty for null outcomes
    Correction correction = Correction::identity;
};

/// The two distinct corrected receiver states and their total probabilities
/// (each Bell outcome pair contributes half).
struct BranchPair {
    double p_bar = 0;
    std::optional<Matrix> rho_bar;
    double p_ddot = 0;
    std::optional<Matrix> rho_ddot;
};

BranchPair teleport_pure_closed(const PureState2& psi, const PureChannel& ch);
BranchPair teleport_x_closed(const PureState2& psi, const XState& x);

/// Full 8-dimensional simulation: builds |psi><psi| (x) rho_ab on (a,A,B),
/// projects aA onto each Bell state, traces down to B and applies the
/// correction. Works for any two-qubit rho_ab, X-form or not.
std::array<TeleportOutcome, 4> teleport_bruteforce(const PureState2& psi,
                                                   const Matrix& rho_ab);

} // namespace xtel
