#include "xtel/teleport.hpp"

#include <cmath>

namespace xtel {

Eigen::Vector4cd bell_ket(BellIndex k) {
    constexpr double kInvSqrt2 = 0.70710678118654752440;
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    switch (k) {
    case BellIndex::phi_plus:  v(0) = kInvSqrt2; v(3) = kInvSqrt2;  break;
    case BellIndex::phi_minus: v(0) = kInvSqrt2; v(3) = -kInvSqrt2; break;
    case BellIndex::psi_plus:  v(1) = kInvSqrt2; v(2) = kInvSqrt2;  break;
    case BellIndex::psi_minus: v(1) = kInvSqrt2; v(2) = -kInvSqrt2; break;
    }
    return v;
}

Matrix bell_projector(BellIndex k) {
    return projector(bell_ket(k));
}

Correction correction_for(BellIndex k) {
    switch (k) {
    case BellIndex::phi_plus:  return Correction::identity;
    case BellIndex::phi_minus: return Correction::sigma_z;
    case BellIndex::psi_plus:  return Correction::sigma_x;
    case BellIndex::psi_minus: return Correction::sigma_x_sigma_z;
    }
    return Correction::identity;
}

Matrix correction_unitary(Correction c) {
    switch (c) {
    case Correction::identity:        return identity_matrix(2);
    case Correction::sigma_z:         return sigma_z();
    case Correction::sigma_x:         return sigma_x();
    case Correction::sigma_x_sigma_z: return sigma_x() * sigma_z();
    }
    return identity_matrix(2);
}

const char* to_string(BellIndex k) {
    switch (k) {
    case BellIndex::phi_plus:  return "phi+";
    case BellIndex::phi_minus: return "phi-";
    case BellIndex::psi_plus:  return "psi+";
    case BellIndex::psi_minus: return "psi-";
    }
    return "?";
}

const char* to_string(Correction c) {
    switch (c) {
    case Correction::identity:        return "I";
    case Correction::sigma_z:         return "sz";
    case Correction::sigma_x:         return "sx";
    case Correction::sigma_x_sigma_z: return "sx*sz";
    }
    return "?";
}

namespace {

std::optional<Matrix> normalized_rank1(const Eigen::Vector2cd& unnormalized,
                                       double weight) {
    if (weight < kNullProbabilityTol) return std::nullopt;
    Eigen::Vector2cd v = unnormalized / std::sqrt(weight);
    return projector(v);
}

} // namespace

BranchPair teleport_pure_closed(const PureState2& psi, const PureChannel& ch) {
    const Complex c0 = psi.a0, c1 = psi.a1;
    const double t = std::norm(c0), s = std::norm(c1);

    BranchPair out;
    out.p_bar = ch.alpha * ch.alpha * t + ch.beta * ch.beta * s;
    out.p_ddot = 1.0 - out.p_bar;

    Eigen::Vector2cd bar(ch.alpha * c0, ch.beta * c1);
    Eigen::Vector2cd ddot(ch.beta * c0, ch.alpha * c1);
    out.rho_bar = normalized_rank1(bar, out.p_bar);
    out.rho_ddot = normalized_rank1(ddot, out.p_ddot);
    if (out.p_bar < kNullProbabilityTol) out.p_bar = 0.0;
    if (out.p_ddot < kNullProbabilityTol) out.p_ddot = 0.0;
    return out;
}

BranchPair teleport_x_closed(const PureState2& psi, const XState& x) {
    const Complex c0 = psi.a0, c1 = psi.a1;
    const double t = std::norm(c0), s = std::norm(c1);
    const Complex cross = c0 * std::conj(c1);

    BranchPair out;
    out.p_bar = (x.r11 + x.r22) * t + (x.r33 + x.r44) * s;
    out.p_ddot = 1.0 - out.p_bar;

    // Both corrected states share the same off-diagonal entry; only the
    // populations are exchanged between the branches.
    const Complex off = x.r14 * cross + x.r23 * std::conj(cross);

    if (out.p_bar >= kNullProbabilityTol) {
        Matrix bar(2, 2);
        bar << x.r11 * t + x.r33 * s, off,
               std::conj(off), x.r22 * t + x.r44 * s;
        out.rho_bar = bar / out.p_bar;
    } else {
        out.p_bar = 0.0;
    }
    if (out.p_ddot >= kNullProbabilityTol) {
        Matrix ddot(2, 2);
        ddot << x.r44 * t + x.r22 * s, off,
                std::conj(off), x.r11 * s + x.r33 * t;
        out.rho_ddot = ddot / out.p_ddot;
    } else {
        out.p_ddot = 0.0;
    }
    return out;
}

std::array<TeleportOutcome, 4> teleport_bruteforce(const PureState2& psi,
                                                   const Matrix& rho_ab) {
    if (rho_ab.rows() != 4 || rho_ab.cols() != 4)
        throw Error(ErrorKind::unsupported_dimension,
                    "channel must be a two-qubit state");
    const Matrix joint = tensor(psi.density(), rho_ab); // order a, A, B
    const Matrix id_b = identity_matrix(2);

    std::array<TeleportOutcome, 4> outcomes;
    for (std::size_t i = 0; i < kBellIndices.size(); ++i) {
        const BellIndex bell = kBellIndices[i];
        TeleportOutcome& o = outcomes[i];
        o.bell = bell;
        o.correction = correction_for(bell);

        ProjectionResult proj =
            project(joint, tensor(bell_projector(bell), id_b));
        o.probability = proj.probability;
        if (proj.state) {
            Matrix receiver = partial_trace(*proj.state, {2});
            Matrix u = correction_unitary(o.correction);
            o.corrected_state = u * receiver * u.adjoint();
        }
    }
    return outcomes;
}

} // namespace xtel
