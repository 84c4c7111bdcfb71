#pragma once

#include <map>
#include <string>

#include "xtel/qmath.hpp"
#include "xtel/rng.hpp"

namespace xtel {

inline constexpr double kChannelTraceTol = 1e-12;

/// Pure partially entangled channel alpha|00> + beta|11> with real
/// non-negative amplitudes in canonical order alpha <= beta.
struct PureChannel {
    double alpha = 0.0;
    double beta = 1.0;

    Eigen::Vector4cd ket() const;
    Matrix density() const; // 4x4 rank-1 state on (A,B)
};

/// Requires 0 <= alpha <= 1/sqrt(2); beta = sqrt(1 - alpha^2).
PureChannel make_pure_channel(double alpha);

/// Concurrence of the pure channel, 2*alpha*beta.
double pure_concurrence(const PureChannel& ch);

/// Two-qubit X-state: populations on the diagonal, real non-negative
/// coherences on the anti-diagonal corners (r41 = r14, r32 = r23).
/// Basis order 00, 01, 10, 11.
struct XState {
    double r11 = 0, r22 = 0, r33 = 0, r44 = 0;
    double r14 = 0, r23 = 0;

    Matrix as_matrix() const;
};

/// Validates trace, positivity of populations, the two 2x2 PSD block
/// conditions, and the canonical ordering r11 <= r44. With strict = true
/// additionally requires the principal-subspace condition r11*r44 > r22*r33.
/// Each violation throws a distinct ErrorKind.
XState make_x_state(double r11, double r22, double r33, double r44,
                    double r14, double r23, bool strict = false);

/// The X-state (alpha^2, 0, 0, beta^2, alpha*beta, 0) equal to the pure
/// channel's density matrix.
XState embed_pure_channel(const PureChannel& ch);

struct ConcurrenceReport {
    double c14 = 0;         // 2*(r14 - sqrt(r22*r33))
    double c23 = 0;         // 2*(r23 - sqrt(r11*r44))
    double concurrence = 0; // max(0, c14)
};

/// Principal-subspace concurrence. The `concurrence` field equals the
/// general Wootters value whenever c23 <= 0, which strict mode guarantees;
/// c23-dominant channels are outside the supported regime and keep the
/// max(0, c14) convention.
ConcurrenceReport x_concurrence(const XState& x);

/// Wootters concurrence of an arbitrary two-qubit density matrix, via the
/// square roots of the eigenvalues of sqrt(rho) * (sy x sy) rho* (sy x sy)
/// * sqrt(rho). Independent of the X-state closed form above.
double general_concurrence(const Matrix& rho);

// key=value channel specs shared with the CLI, e.g.
//   "r11=0.3,r22=0.15,r33=0.05,r44=0.5,r14=0.35,r23=0"   or   "alpha=0.4"
// Unlisted X keys default to zero.
std::map<std::string, double> parse_key_values(const std::string& spec);
XState parse_x_state(const std::string& spec, bool strict = false);
PureChannel parse_pure_channel(const std::string& spec);

/// Random valid X-state: populations from a flat Dirichlet over the
/// 4-simplex, r14 = u*sqrt(r11*r44), r23 = v*sqrt(r22*r33) with u, v uniform
/// on [0,1], then r11/r44 swapped into canonical order. strict resamples
/// until r11*r44 > r22*r33.
XState sample_x_state(SplitMix64& rng, bool strict = false);

} // namespace xtel
