#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "xtel/report.hpp"

namespace xtel {

namespace {

std::string describe(const XState& x) {
    return "r11=" + format_number(x.r11) + ",r22=" + format_number(x.r22) +
           ",r33=" + format_number(x.r33) + ",r44=" + format_number(x.r44) +
           ",r14=" + format_number(x.r14) + ",r23=" + format_number(x.r23);
}

struct Worst {
    double value = 0;
    std::string channel;

    void update(double v, const XState& x) {
        if (v > value) {
            value = v;
            channel = describe(x);
        }
    }
};

double max_entry_diff(const Matrix& a, const Matrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace

int run_validate(const ValidateOptions& opts, std::ostream& out) {
    constexpr double kQuadTol = 1e-10;
    constexpr double kStateTol = 1e-10;
    constexpr double kIdentityTol = 1e-12;
    constexpr double kConcurrenceTol = 1e-9;
    constexpr double kMcSigmaTol = 5.0;

    // corrupt-fixture bias, used by the negative-control test
    const double bias = opts.inject_error ? 1e-6 : 0.0;

    SplitMix64 channel_rng(opts.seed);
    std::vector<XState> channels;
    channels.reserve(static_cast<std::size_t>(opts.channels));
    for (int i = 0; i < opts.channels; ++i)
        channels.push_back(sample_x_state(channel_rng));

    // The principal-subspace concurrence form C = max(0, c14) agrees with the
    // general Wootters value only where c23 <= 0; sample that regime for the
    // concurrence gate.
    SplitMix64 strict_rng(opts.seed ^ 0x9d2c5680u);
    std::vector<XState> strict_channels;
    strict_channels.reserve(static_cast<std::size_t>(opts.channels));
    for (int i = 0; i < opts.channels; ++i)
        strict_channels.push_back(sample_x_state(strict_rng, /*strict=*/true));

    AverageSpec quad;
    quad.method = Method::quadrature;
    quad.quadrature = opts.quadrature;

    Worst quad_fx, quad_fx_use, quad_fx_use_0, quad_fx_use_1;
    Worst brute_teleport, brute_use, identity, concurrence;

    HaarSampler psi_sampler{opts.seed ^ 0x5bf0a8b1u, 0};

    for (int i = 0; i < opts.channels; ++i) {
        const XState& x = channels[i];

        quad_fx.update(
            std::abs(average_fidelity(x_teleport_protocol(x), quad).value -
                     closed_f_x(x) - bias),
            x);
        quad_fx_use.update(
            std::abs(average_fidelity(x_use_protocol(x), quad).value -
                     closed_f_x_use(x)),
            x);
        const WeightedFidelity success = closed_f_x_use_success(x);
        quad_fx_use_0.update(
            std::abs(
                conditional_average_fidelity(x_use_success_protocol(x), quad)
                    .value -
                success.fidelity),
            x);
        const WeightedFidelity failure = closed_f_x_use_failure(x);
        if (failure.weight >= 1e-9)
            quad_fx_use_1.update(
                std::abs(conditional_average_fidelity(
                             x_use_failure_protocol(x), quad)
                             .value -
                         failure.fidelity),
                x);

        identity.update(
            std::abs(success.weight * success.fidelity +
                     failure.weight * failure.fidelity - closed_f_x_use(x)),
            x);

        const XState& strict_x = strict_channels[static_cast<std::size_t>(i)];
        concurrence.update(
            std::abs(x_concurrence(strict_x).concurrence -
                     general_concurrence(strict_x.as_matrix())),
            strict_x);

        // simulation path vs the closed-form outcome states at two inputs
        const UsePair unitaries = build_use_unitaries(use_ratio(x));
        for (int rep = 0; rep < 2; ++rep) {
            const PureState2 psi = psi_sampler.next();
            const BranchPair closed = teleport_x_closed(psi, x);
            for (const TeleportOutcome& o :
                 teleport_bruteforce(psi, x.as_matrix())) {
                const bool bar = o.bell == BellIndex::phi_plus ||
                                 o.bell == BellIndex::phi_minus;
                const double p_closed = bar ? closed.p_bar : closed.p_ddot;
                const auto& rho_closed = bar ? closed.rho_bar : closed.rho_ddot;
                brute_teleport.update(std::abs(o.probability - p_closed / 2),
                                      x);
                if (!o.corrected_state || !rho_closed) continue;
                brute_teleport.update(
                    max_entry_diff(*o.corrected_state, *rho_closed), x);

                const UseResult sim = use_bruteforce(
                    *o.corrected_state,
                    bar ? unitaries.u_bar : unitaries.u_ddot);
                const UseResult cf =
                    use_x_closed(psi, x, bar ? Branch::bar : Branch::ddot);
                brute_use.update(std::abs(sim.success_prob - cf.success_prob),
                                 x);
                if (sim.success_state && cf.success_state)
                    brute_use.update(
                        max_entry_diff(*sim.success_state, *cf.success_state),
                        x);
                if (sim.failure_state && cf.failure_state)
                    brute_use.update(
                        max_entry_diff(*sim.failure_state, *cf.failure_state),
                        x);
            }
        }
    }

    // Monte Carlo cross-check on a deterministic subset
    Worst mc_sigma;
    const int mc_count = std::min(opts.mc_channels, opts.channels);
    for (int i = 0; i < mc_count; ++i) {
        const XState& x = channels[i];
        AverageSpec mc;
        mc.method = Method::monte_carlo;
        mc.n_samples = opts.mc_samples;
        mc.seed = opts.seed + 1000003 * static_cast<std::uint64_t>(i + 1);
        const FidelityEstimate estimate =
            average_fidelity(x_use_protocol(x), mc);
        if (estimate.std_error > 0)
            mc_sigma.update(
                std::abs(estimate.value - closed_f_x_use(x)) /
                    estimate.std_error,
                x);
    }

    out << "validate: channels=" << opts.channels << " seed=" << opts.seed
        << " t_nodes=" << opts.quadrature.t_nodes
        << " phase_nodes=" << opts.quadrature.phase_nodes
        << " mc_channels=" << mc_count << " mc_samples=" << opts.mc_samples
        << "\n";

    struct Gate {
        const char* name;
        const Worst* worst;
        double tolerance;
    };
    const Gate gates[] = {
        {"quadrature f_x", &quad_fx, kQuadTol},
        {"quadrature f_x_use", &quad_fx_use, kQuadTol},
        {"quadrature f_x_use_0", &quad_fx_use_0, kQuadTol},
        {"quadrature f_x_use_1", &quad_fx_use_1, kQuadTol},
        {"bruteforce teleport states", &brute_teleport, kStateTol},
        {"bruteforce use states", &brute_use, kStateTol},
        {"decomposition identity", &identity, kIdentityTol},
        {"concurrence oracle", &concurrence, kConcurrenceTol},
        {"mc f_x_use |delta|/sigma", &mc_sigma, kMcSigmaTol},
    };

    bool ok = true;
    for (const Gate& gate : gates) {
        const bool pass = gate.worst->value <= gate.tolerance;
        ok = ok && pass;
        out << (pass ? "ok   " : "FAIL ") << gate.name << " max "
            << format_number(gate.worst->value) << " (tol "
            << format_number(gate.tolerance) << ")\n";
        if (!pass && !gate.worst->channel.empty())
            out << "     offending channel: " << gate.worst->channel << "\n";
    }
    out << (ok ? "OK: all checks within tolerance\n"
               : "FAILED: tolerance violation\n");
    return ok ? 0 : 3;
}

} // namespace xtel
