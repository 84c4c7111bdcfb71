#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "xtel/use_extract.hpp"

namespace xtel {

enum class Method { closed_form, quadrature, monte_carlo };

const char* to_string(Method m);

struct FidelityEstimate {
    double value = 0;
    Method method = Method::closed_form;
    double std_error = 0;      // 0 for deterministic methods
    long long n_samples = 0;   // MC draws, or quadrature grid size
};

/// Qubit fidelity tr(rho sigma) + 2 sqrt(det rho det sigma). Symmetric;
/// reduces to <psi|sigma|psi> when rho is pure. Both arguments must be valid
/// 2x2 density matrices.
double fidelity_qubit(const Matrix& rho, const Matrix& sigma);

/// Input-state distribution: t = |<0|psi>|^2 uniform on [0,1], both phases
/// uniform on [0,2pi). Counter-based, so the stream for a given seed does not
/// depend on how it is partitioned across workers.
struct HaarSampler {
    std::uint64_t seed = 0;
    std::uint64_t counter = 0;

    PureState2 next() { return state_at(seed, counter++); }
    static PureState2 state_at(std::uint64_t seed, std::uint64_t index);
};

struct WeightedState {
    double weight = 0;
    std::optional<Matrix> state; // may be empty only for weight ~ 0
};

/// A protocol maps an input state to its weighted outcome states.
using Protocol = std::function<std::vector<WeightedState>(const PureState2&)>;

/// Gauss-Legendre on t composed with equispaced nodes on the relative phase.
/// Every average in this project is a low-degree polynomial in t times
/// harmonics of order <= 2, so the defaults are exact to machine precision.
struct QuadratureSpec {
    int t_nodes = 12;
    int phase_nodes = 16;
};

struct AverageSpec {
    Method method = Method::quadrature;
    QuadratureSpec quadrature{};
    long long n_samples = 100000;
    std::uint64_t seed = 0;
};

/// Average of sum_k w_k <psi|rho_k|psi> over the input-state distribution.
/// The weights must sum to 1 for every psi (within 1e-9) or
/// ErrorKind::protocol_weights is thrown.
FidelityEstimate average_fidelity(const Protocol& protocol,
                                  const AverageSpec& spec);

/// Ratio estimator for sub-normalized outcome families:
///   (avg of sum_k w_k F_k) / (avg of sum_k w_k).
/// Used for the filtered (success-only / failure-only) averages. MC standard
/// error comes from the linearized ratio estimator, which reduces to the
/// plain sample standard error when the weights sum to 1.
FidelityEstimate conditional_average_fidelity(const Protocol& protocol,
                                              const AverageSpec& spec);

/// Which outcome generator backs a protocol: the closed-form branch states,
/// or the full density-matrix simulation (8x8 teleport stage + simulated
/// extraction). The two routes are independent code paths.
enum class Route { closed_outcomes, bruteforce };

Protocol classical_protocol(); // measure in sz basis, resend the eigenstate
Protocol pure_teleport_protocol(const PureChannel& ch,
                                Route route = Route::closed_outcomes);
Protocol pure_use_protocol(const PureChannel& ch,
                           Route route = Route::closed_outcomes);
Protocol x_teleport_protocol(const XState& x,
                             Route route = Route::closed_outcomes);
Protocol x_use_protocol(const XState& x, Route route = Route::closed_outcomes);
// Sub-normalized families for the filtered averages (weights sum to the
// branch probability, not to 1):
Protocol x_use_success_protocol(const XState& x,
                                Route route = Route::closed_outcomes);
Protocol x_use_failure_protocol(const XState& x,
                                Route route = Route::closed_outcomes);
// Single-branch teleport outcome, weight p_bar resp. p_ddot.
Protocol pure_branch_protocol(const PureChannel& ch, Branch branch);
Protocol x_branch_protocol(const XState& x, Branch branch);

// Closed-form averages.
double closed_f_classical();              // exactly 2/3
double closed_f_p(const PureChannel& ch); // 2/3 + C/3
double closed_f_p_use(const PureChannel& ch); // 1 - sqrt(1 - C^2)/3
double closed_f_x(const XState& x); // 2/3 + (2 r14 - (r22 + r33))/3
double closed_f_x_use(const XState& x);

struct WeightedFidelity {
    double fidelity = 0;
    double weight = 0; // probability mass of the filtered family
};

/// Normalized average fidelity of the successful extractions; weight is the
/// quasiextraction probability.
WeightedFidelity closed_f_x_use_success(const XState& x);
/// Normalized average fidelity of the failed extractions; weight is
/// 1 - quasiextraction probability.
WeightedFidelity closed_f_x_use_failure(const XState& x);

/// Nodes and weights on [0, 1].
std::vector<std::pair<double, double>> gauss_legendre_01(int n);

} // namespace xtel
