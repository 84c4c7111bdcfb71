#include "xtel/use_extract.hpp"

#include <algorithm>
#include <cmath>

namespace xtel {

const char* to_string(Branch b) {
    return b == Branch::bar ? "bar" : "ddot";
}

UsePair build_use_unitaries(double ratio) {
    if (!std::isfinite(ratio) || ratio <= 0.0)
        throw Error(ErrorKind::use_zero_ratio,
                    "extraction impossible, zero ratio");
    if (ratio > 1.0)
        throw Error(ErrorKind::use_ratio_above_one, "non-canonical ordering");

    const double k = std::sqrt(std::max(0.0, 1.0 - ratio * ratio));
    Matrix u_b(2, 2);
    u_b << ratio, k,
           -k, ratio;

    Matrix bar = Matrix::Identity(4, 4);
    bar.block(2, 2, 2, 2) = u_b; // |0><0|_B (x) I + |1><1|_B (x) U_b

    const Matrix sx_b = tensor(sigma_x(), identity_matrix(2));
    UsePair pair;
    pair.u_bar = UseUnitary{bar, ratio};
    pair.u_ddot = UseUnitary{sx_b * bar * sx_b, ratio};
    return pair;
}

double use_ratio(const PureChannel& ch) {
    if (ch.alpha <= 0.0)
        throw Error(ErrorKind::use_zero_ratio,
                    "extraction impossible, zero ratio");
    return ch.alpha / ch.beta;
}

double use_ratio(const XState& x) {
    if (x.r11 <= 0.0)
        throw Error(ErrorKind::use_zero_ratio,
                    "extraction impossible, zero ratio");
    if (x.r44 <= 0.0)
        throw Error(ErrorKind::use_zero_ratio, "degenerate channel, r44 == 0");
    // canonical ordering is tolerance-guarded, so clamp the last-ulp overshoot
    return std::min(1.0, std::sqrt(x.r11 / x.r44));
}

namespace {

Matrix basis_state(int which) {
    Matrix m = Matrix::Zero(2, 2);
    m(which, which) = 1.0;
    return m;
}

} // namespace

UseResult use_pure(const PureState2& psi, const PureChannel& ch, Branch branch) {
    use_ratio(ch); // rejects alpha == 0

    const BranchPair pair = teleport_pure_closed(psi, ch);
    const double p_branch = branch == Branch::bar ? pair.p_bar : pair.p_ddot;

    UseResult out;
    out.branch = branch;
    if (p_branch < kNullProbabilityTol)
        throw Error(ErrorKind::invalid_argument,
                    "branch has zero probability");
    out.success_prob = std::min(1.0, ch.alpha * ch.alpha / p_branch);
    out.failure_prob = 1.0 - out.success_prob;
    out.success_state = psi.density();
    if (out.failure_prob >= kNullProbabilityTol) {
        out.failure_state = basis_state(branch == Branch::bar ? 1 : 0);
    } else {
        out.failure_prob = 0.0;
    }
    return out;
}

UseResult use_x_closed(const PureState2& psi, const XState& x, Branch branch) {
    use_ratio(x); // rejects r11 == 0 and degenerate r44

    const Complex c0 = psi.a0, c1 = psi.a1;
    const double t = std::norm(c0), s = std::norm(c1);
    const Complex cross = c0 * std::conj(c1);
    const double ratio2 = x.r11 / x.r44;
    const double ratio = std::sqrt(ratio2);

    const BranchPair pair = teleport_x_closed(psi, x);
    const double p_branch = branch == Branch::bar ? pair.p_bar : pair.p_ddot;
    if (p_branch < kNullProbabilityTol)
        throw Error(ErrorKind::invalid_argument,
                    "branch has zero probability");

    // Unnormalized success state; its trace is the joint probability
    // p_branch * conditional.
    Matrix n(2, 2);
    const Complex off = ratio * (x.r14 * cross + x.r23 * std::conj(cross));
    if (branch == Branch::bar) {
        n << x.r11 * t + x.r33 * s, off,
             std::conj(off), x.r11 * s + ratio2 * x.r22 * t;
    } else {
        n << x.r11 * t + ratio2 * x.r22 * s, off,
             std::conj(off), x.r11 * s + x.r33 * t;
    }

    UseResult out;
    out.branch = branch;
    const double joint = n.trace().real();
    out.success_prob = std::min(1.0, joint / p_branch);
    out.failure_prob = 1.0 - out.success_prob;
    if (joint >= kNullProbabilityTol) {
        out.success_state = n / joint;
    } else {
        out.success_prob = 0.0;
    }
    if (out.failure_prob >= kNullProbabilityTol) {
        out.failure_state = basis_state(branch == Branch::bar ? 1 : 0);
    } else {
        out.failure_prob = 0.0;
    }
    return out;
}

UseResult use_bruteforce(const Matrix& branch_state, const UseUnitary& u) {
    if (branch_state.rows() != 2 || branch_state.cols() != 2)
        throw Error(ErrorKind::unsupported_dimension,
                    "branch state must be a qubit state");
    if (!is_unitary(u.matrix, 1e-12))
        throw Error(ErrorKind::invalid_argument,
                    "extraction operator is not unitary");

    const Matrix joint =
        u.matrix * tensor(branch_state, basis_state(0)) * u.matrix.adjoint();

    UseResult out;
    out.branch = Branch::bar; // caller context decides; label not used here
    ProjectionResult success =
        project(joint, tensor(identity_matrix(2), basis_state(0)));
    ProjectionResult failure =
        project(joint, tensor(identity_matrix(2), basis_state(1)));

    out.success_prob = success.probability;
    out.failure_prob = failure.probability;
    if (success.state) out.success_state = partial_trace(*success.state, {0});
    if (failure.state) out.failure_state = partial_trace(*failure.state, {0});
    return out;
}

double extraction_probability(const PureChannel& ch) {
    return 2.0 * ch.alpha * ch.alpha;
}

double quasi_extraction_probability(const XState& x) {
    use_ratio(x);
    return 2.0 * x.r11 + x.r33 + x.r11 * x.r22 / x.r44;
}

} // namespace xtel
