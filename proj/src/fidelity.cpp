#include "xtel/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace xtel {

const char* to_string(Method m) {
    switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::quadrature:  return "quadrature";
    case Method::monte_carlo: return "monte_carlo";
    }
    return "?";
}

double fidelity_qubit(const Matrix& rho, const Matrix& sigma) {
    auto check = [](const Matrix& m) {
        if (m.rows() != 2 || m.cols() != 2)
            throw Error(ErrorKind::unsupported_dimension,
                        "qubit fidelity needs 2x2 states");
        if (!is_hermitian(m) || std::abs(m.trace().real() - 1.0) > 1e-9 ||
            m(0, 0).real() < -kPsdTol || m(1, 1).real() < -kPsdTol ||
            m.determinant().real() < -kPsdTol)
            throw Error(ErrorKind::not_density_matrix,
                        "not a valid density matrix");
    };
    check(rho);
    check(sigma);
    const double overlap = (rho * sigma).trace().real();
    const double det_product = std::max(0.0, rho.determinant().real()) *
                               std::max(0.0, sigma.determinant().real());
    return std::clamp(overlap + 2.0 * std::sqrt(det_product), 0.0, 1.0);
}

PureState2 HaarSampler::state_at(std::uint64_t seed, std::uint64_t index) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double t = mix_double(seed, 0, index);
    const double theta0 = two_pi * mix_double(seed, 1, index);
    const double theta1 = two_pi * mix_double(seed, 2, index);
    PureState2 psi;
    psi.a0 = std::polar(std::sqrt(t), theta0);
    psi.a1 = std::polar(std::sqrt(1.0 - t), theta1);
    return psi;
}

std::vector<std::pair<double, double>> gauss_legendre_01(int n) {
    if (n < 1)
        throw Error(ErrorKind::invalid_argument, "need at least one node");
    // Newton iteration on P_n over (-1, 1), then map to (0, 1).
    std::vector<std::pair<double, double>> nodes(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = {(1.0 - x) / 2.0, w / 2.0};
        nodes[n - 1 - i] = {(1.0 + x) / 2.0, w / 2.0};
    }
    return nodes;
}

namespace {

// Accumulates pairs (a, b) = (sum_k w_k F_k, sum_k w_k) for the ratio
// estimator a-bar / b-bar; with b == 1 this is the plain mean and the
// linearized variance reduces to the sample variance of a.
struct RatioAccumulator {
    double sum_a = 0, sum_b = 0;
    double sum_aa = 0, sum_ab = 0, sum_bb = 0;
    long long n = 0;

    void add(double a, double b, double weight = 1.0) {
        sum_a += weight * a;
        sum_b += weight * b;
        sum_aa += weight * a * a;
        sum_ab += weight * a * b;
        sum_bb += weight * b * b;
        ++n;
    }

    double ratio() const { return sum_a / sum_b; }

    double std_error() const {
        if (n < 2) return 0.0;
        const double r = ratio();
        const double mean_b = sum_b / n;
        // sum of (a_i - r b_i)^2 via the accumulated moments
        const double ss = sum_aa - 2.0 * r * sum_ab + r * r * sum_bb;
        const double var = std::max(0.0, ss / (n - 1));
        return std::sqrt(var / n) / mean_b;
    }
};

struct PointValue {
    double weighted_fidelity = 0; // sum_k w_k <psi|rho_k|psi>
    double total_weight = 0;      // sum_k w_k
};

PointValue evaluate_point(const Protocol& protocol, const PureState2& psi) {
    const Eigen::Vector2cd ket = psi.ket();
    PointValue out;
    for (const WeightedState& ws : protocol(psi)) {
        if (!ws.state) {
            if (ws.weight > 1e-12)
                throw Error(ErrorKind::protocol_weights,
                            "missing outcome state with non-null weight");
            continue;
        }
        const double f = std::clamp(
            (ket.adjoint() * (*ws.state) * ket)(0).real(), 0.0, 1.0);
        out.weighted_fidelity += ws.weight * f;
        out.total_weight += ws.weight;
    }
    return out;
}

FidelityEstimate run_average(const Protocol& protocol, const AverageSpec& spec,
                             bool conditional) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    RatioAccumulator acc;
    FidelityEstimate estimate;
    estimate.method = spec.method;

    if (spec.method == Method::quadrature) {
        const auto t_nodes = gauss_legendre_01(spec.quadrature.t_nodes);
        const int m = spec.quadrature.phase_nodes;
        if (m < 1)
            throw Error(ErrorKind::invalid_argument,
                        "need at least one phase node");
        for (const auto& [t, wt] : t_nodes) {
            for (int k = 0; k < m; ++k) {
                PureState2 psi;
                psi.a0 = std::sqrt(t);
                psi.a1 = std::polar(std::sqrt(1.0 - t), two_pi * k / m);
                const PointValue v = evaluate_point(protocol, psi);
                if (!conditional && std::abs(v.total_weight - 1.0) > 1e-9)
                    throw Error(ErrorKind::protocol_weights,
                                "outcome weights do not sum to 1");
                acc.add(v.weighted_fidelity,
                        conditional ? v.total_weight : 1.0, wt / m);
            }
        }
        estimate.n_samples =
            static_cast<long long>(t_nodes.size()) * m;
        estimate.value = acc.ratio();
        estimate.std_error = 0.0;
        return estimate;
    }

    if (spec.method == Method::monte_carlo) {
        if (spec.n_samples < 2)
            throw Error(ErrorKind::invalid_argument,
                        "need at least two samples");
        for (long long i = 0; i < spec.n_samples; ++i) {
            const PureState2 psi = HaarSampler::state_at(
                spec.seed, static_cast<std::uint64_t>(i));
            const PointValue v = evaluate_point(protocol, psi);
            if (!conditional && std::abs(v.total_weight - 1.0) > 1e-9)
                throw Error(ErrorKind::protocol_weights,
                            "outcome weights do not sum to 1");
            acc.add(v.weighted_fidelity, conditional ? v.total_weight : 1.0);
        }
        estimate.n_samples = spec.n_samples;
        estimate.value = acc.ratio();
        estimate.std_error = acc.std_error();
        return estimate;
    }

    throw Error(ErrorKind::invalid_argument,
                "closed_form is not an averaging method");
}

} // namespace

FidelityEstimate average_fidelity(const Protocol& protocol,
                                  const AverageSpec& spec) {
    return run_average(protocol, spec, /*conditional=*/false);
}

FidelityEstimate conditional_average_fidelity(const Protocol& protocol,
                                              const AverageSpec& spec) {
    return run_average(protocol, spec, /*conditional=*/true);
}

namespace {

void append_use_outcomes(std::vector<WeightedState>& out, double branch_prob,
                         const UseResult& use, bool success_only,
                         bool failure_only) {
    if (!failure_only)
        out.push_back({branch_prob * use.success_prob, use.success_state});
    if (!success_only)
        out.push_back({branch_prob * use.failure_prob, use.failure_state});
}

Protocol make_x_use(const XState& x, Route route, bool success_only,
                    bool failure_only) {
    const double ratio = use_ratio(x);
    if (route == Route::closed_outcomes) {
        return [x, success_only, failure_only](const PureState2& psi) {
            std::vector<WeightedState> out;
            const BranchPair pair = teleport_x_closed(psi, x);
            for (Branch branch : {Branch::bar, Branch::ddot}) {
                const double p =
                    branch == Branch::bar ? pair.p_bar : pair.p_ddot;
                if (p <= 0.0) continue;
                append_use_outcomes(out, p, use_x_closed(psi, x, branch),
                                    success_only, failure_only);
            }
            return out;
        };
    }
    const UsePair unitaries = build_use_unitaries(ratio);
    const Matrix rho_ab = x.as_matrix();
    return [rho_ab, unitaries, success_only,
            failure_only](const PureState2& psi) {
        std::vector<WeightedState> out;
        for (const TeleportOutcome& o : teleport_bruteforce(psi, rho_ab)) {
            if (!o.corrected_state) continue;
            const bool bar = o.bell == BellIndex::phi_plus ||
                             o.bell == BellIndex::phi_minus;
            const UseResult use = use_bruteforce(
                *o.corrected_state, bar ? unitaries.u_bar : unitaries.u_ddot);
            append_use_outcomes(out, o.probability, use, success_only,
                                failure_only);
        }
        return out;
    };
}

} // namespace

Protocol classical_protocol() {
    return [](const PureState2& psi) {
        Matrix zero = Matrix::Zero(2, 2), one = Matrix::Zero(2, 2);
        zero(0, 0) = 1.0;
        one(1, 1) = 1.0;
        return std::vector<WeightedState>{{std::norm(psi.a0), zero},
                                          {std::norm(psi.a1), one}};
    };
}

Protocol pure_teleport_protocol(const PureChannel& ch, Route route) {
    if (route == Route::closed_outcomes) {
        return [ch](const PureState2& psi) {
            const BranchPair pair = teleport_pure_closed(psi, ch);
            return std::vector<WeightedState>{{pair.p_bar, pair.rho_bar},
                                              {pair.p_ddot, pair.rho_ddot}};
        };
    }
    const Matrix rho_ab = ch.density();
    return [rho_ab](const PureState2& psi) {
        std::vector<WeightedState> out;
        for (const TeleportOutcome& o : teleport_bruteforce(psi, rho_ab))
            out.push_back({o.probability, o.corrected_state});
        return out;
    };
}

Protocol pure_use_protocol(const PureChannel& ch, Route route) {
    if (route == Route::closed_outcomes) {
        use_ratio(ch);
        return [ch](const PureState2& psi) {
            std::vector<WeightedState> out;
            const BranchPair pair = teleport_pure_closed(psi, ch);
            for (Branch branch : {Branch::bar, Branch::ddot}) {
                const double p =
                    branch == Branch::bar ? pair.p_bar : pair.p_ddot;
                if (p <= 0.0) continue;
                append_use_outcomes(out, p, use_pure(psi, ch, branch), false,
                                    false);
            }
            return out;
        };
    }
    return make_x_use(embed_pure_channel(ch), route, false, false);
}

Protocol x_teleport_protocol(const XState& x, Route route) {
    if (route == Route::closed_outcomes) {
        return [x](const PureState2& psi) {
            const BranchPair pair = teleport_x_closed(psi, x);
            return std::vector<WeightedState>{{pair.p_bar, pair.rho_bar},
                                              {pair.p_ddot, pair.rho_ddot}};
        };
    }
    const Matrix rho_ab = x.as_matrix();
    return [rho_ab](const PureState2& psi) {
        std::vector<WeightedState> out;
        for (const TeleportOutcome& o : teleport_bruteforce(psi, rho_ab))
            out.push_back({o.probability, o.corrected_state});
        return out;
    };
}

Protocol x_use_protocol(const XState& x, Route route) {
    return make_x_use(x, route, false, false);
}

Protocol x_use_success_protocol(const XState& x, Route route) {
    return make_x_use(x, route, true, false);
}

Protocol x_use_failure_protocol(const XState& x, Route route) {
    return make_x_use(x, route, false, true);
}

Protocol pure_branch_protocol(const PureChannel& ch, Branch branch) {
    return [ch, branch](const PureState2& psi) {
        const BranchPair pair = teleport_pure_closed(psi, ch);
        const double p = branch == Branch::bar ? pair.p_bar : pair.p_ddot;
        const auto& state =
            branch == Branch::bar ? pair.rho_bar : pair.rho_ddot;
        return std::vector<WeightedState>{{p, state}};
    };
}

Protocol x_branch_protocol(const XState& x, Branch branch) {
    return [x, branch](const PureState2& psi) {
        const BranchPair pair = teleport_x_closed(psi, x);
        const double p = branch == Branch::bar ? pair.p_bar : pair.p_ddot;
        const auto& state =
            branch == Branch::bar ? pair.rho_bar : pair.rho_ddot;
        return std::vector<WeightedState>{{p, state}};
    };
}

double closed_f_classical() {
    return 2.0 / 3.0;
}

double closed_f_p(const PureChannel& ch) {
    return 2.0 / 3.0 + pure_concurrence(ch) / 3.0;
}

double closed_f_p_use(const PureChannel& ch) {
    const double c = pure_concurrence(ch);
    return 1.0 - std::sqrt(std::max(0.0, 1.0 - c * c)) / 3.0;
}

double closed_f_x(const XState& x) {
    return 2.0 / 3.0 + (2.0 * x.r14 - (x.r22 + x.r33)) / 3.0;
}

double closed_f_x_use(const XState& x) {
    const double ratio = use_ratio(x);
    return (2.0 / 3.0) * (1.0 + x.r14 * ratio - 0.5 * (x.r22 + x.r33));
}

WeightedFidelity closed_f_x_use_success(const XState& x) {
    const double ratio = use_ratio(x);
    const double weight = quasi_extraction_probability(x);
    const double numerator =
        2.0 * ratio * x.r14 - (x.r33 + ratio * ratio * x.r22);
    return {2.0 / 3.0 + numerator / (3.0 * weight), weight};
}

WeightedFidelity closed_f_x_use_failure(const XState& x) {
    use_ratio(x);
    const double weight =
        std::max(0.0, 1.0 - quasi_extraction_probability(x));
    // r11 == r44 makes the extraction unitary the identity: failures never
    // occur and the conditional fidelity has no value.
    if (weight < 1e-12) return {0.0, weight};
    const double correction =
        x.r22 * (1.0 - x.r11 / x.r44) / (3.0 * weight);
    return {2.0 / 3.0 - correction, weight};
}

} // namespace xtel
