#pragma once

#include "xtel/teleport.hpp"

namespace xtel {

enum class Branch { bar, ddot };

const char* to_string(Branch b);

/// Controlled extraction unitary on B (x) b, auxiliary qubit last. The ratio
/// is derived from the channel alone (alpha/beta, resp. sqrt(r11/r44)); it is
/// never a function of the transmitted state.
struct UseUnitary {
    Matrix matrix; // 4x4
    double ratio = 1.0;
};

struct UsePair {
    UseUnitary u_bar;
    UseUnitary u_ddot; // sx-conjugation of u_bar on the B factor
};

/// Requires 0 < ratio <= 1.
UsePair build_use_unitaries(double ratio);

double use_ratio(const PureChannel& ch); // alpha/beta; errors when alpha == 0
double use_ratio(const XState& x);       // sqrt(r11/r44); errors when r11 == 0

// Measurement convention: the auxiliary qubit starts in |0>; after the
// extraction unitary its sz observable is measured. Success always means b
// is found in |0>. On failure B is left in |1> (bar branch) or |0> (ddot
// branch).
struct UseResult {
    Branch branch = Branch::bar;
    double success_prob = 0;
    std::optional<Matrix> success_state;
    double failure_prob = 0;
    std::optional<Matrix> failure_state;
};

/// Pure channel: success recovers |psi><psi| exactly with conditional
/// probability alpha^2 / p_branch.
UseResult use_pure(const PureState2& psi, const PureChannel& ch, Branch branch);

/// X-state channel closed form: mixed success states with conditional
/// probabilities p (bar) and q (ddot).
UseResult use_x_closed(const PureState2& psi, const XState& x, Branch branch);

/// Simulation route: branch_state (x) |0><0| conjugated by u, auxiliary
/// qubit measured, traced down to B.
UseResult use_bruteforce(const Matrix& branch_state, const UseUnitary& u);

/// Total extraction probability for the pure channel, 2*alpha^2
/// = 1 - sqrt(1 - C^2); independent of the transmitted state.
double extraction_probability(const PureChannel& ch);

/// Total quasiextraction probability for an X-state channel,
/// 2*r11 + r33 + r11*r22/r44; independent of the transmitted state.
double quasi_extraction_probability(const XState& x);

} // namespace xtel
