#include "xtel/channels.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace xtel {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

} // namespace

std::map<std::string, double> parse_key_values(const std::string& spec) {
    std::map<std::string, double> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorKind::parse_error,
                        "expected key=value, got '" + item + "'");
        std::string key = item.substr(0, eq);
        std::string value = item.substr(eq + 1);
        try {
            std::size_t used = 0;
            double v = std::stod(value, &used);
            if (used != value.size())
                throw std::invalid_argument(value);
            if (!out.emplace(key, v).second)
                throw Error(ErrorKind::parse_error, "duplicate key '" + key + "'");
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            throw Error(ErrorKind::parse_error,
                        "bad numeric value for '" + key + "': '" + value + "'");
        }
    }
    return out;
}

Eigen::Vector4cd PureChannel::ket() const {
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    v(0) = alpha; // |00>
    v(3) = beta;  // |11>
    return v;
}

Matrix PureChannel::density() const {
    return projector(ket());
}

PureChannel make_pure_channel(double alpha) {
    if (!std::isfinite(alpha) || alpha < 0.0 || alpha > kInvSqrt2 + 1e-12)
        throw Error(ErrorKind::channel_canonical_order,
                    "violates alpha <= beta canonical form");
    PureChannel ch;
    ch.alpha = alpha;
    ch.beta = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
    return ch;
}

double pure_concurrence(const PureChannel& ch) {
    return 2.0 * ch.alpha * ch.beta;
}

Matrix XState::as_matrix() const {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = r11;
    m(1, 1) = r22;
    m(2, 2) = r33;
    m(3, 3) = r44;
    m(0, 3) = m(3, 0) = r14;
    m(1, 2) = m(2, 1) = r23;
    return m;
}

XState make_x_state(double r11, double r22, double r33, double r44,
                    double r14, double r23, bool strict) {
    for (double v : {r11, r22, r33, r44, r14, r23})
        if (!std::isfinite(v))
            throw Error(ErrorKind::invalid_argument, "non-finite parameter");
    if (std::abs(r11 + r22 + r33 + r44 - 1.0) > kChannelTraceTol)
        throw Error(ErrorKind::channel_trace, "populations must sum to 1");
    if (r11 < 0 || r22 < 0 || r33 < 0 || r44 < 0 || r14 < 0 || r23 < 0)
        throw Error(ErrorKind::channel_negative_population,
                    "populations and coherences must be non-negative");
    if (r14 * r14 > r11 * r44 + kPsdTol || r23 * r23 > r22 * r33 + kPsdTol)
        throw Error(ErrorKind::channel_psd,
                    "state is not positive semidefinite");
    if (r11 > r44 + kChannelTraceTol)
        throw Error(ErrorKind::channel_canonical_order,
                    "requires canonical ordering r11 <= r44");
    if (strict && !(r11 * r44 > r22 * r33))
        throw Error(ErrorKind::channel_principal_subspace,
                    "requires r11*r44 > r22*r33");
    return XState{r11, r22, r33, r44, r14, r23};
}

XState embed_pure_channel(const PureChannel& ch) {
    const double a2 = ch.alpha * ch.alpha;
    return make_x_state(a2, 0.0, 0.0, 1.0 - a2, ch.alpha * ch.beta, 0.0);
}

ConcurrenceReport x_concurrence(const XState& x) {
    ConcurrenceReport report;
    report.c14 = 2.0 * (x.r14 - std::sqrt(x.r22 * x.r33));
    report.c23 = 2.0 * (x.r23 - std::sqrt(x.r11 * x.r44));
    report.concurrence = std::max(0.0, report.c14);
    return report;
}

double general_concurrence(const Matrix& rho) {
    if (rho.rows() != 4 || rho.cols() != 4)
        throw Error(ErrorKind::unsupported_dimension,
                    "concurrence needs a two-qubit state");
    if (!is_density_matrix(rho))
        throw Error(ErrorKind::not_density_matrix,
                    "not a valid density matrix");

    const Matrix flip = tensor(sigma_y(), sigma_y());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho);

    // Rank-1 states: the square-root route would amplify O(eps) eigenvalue
    // noise to O(sqrt(eps)); use the definitional overlap |<psi|ss|psi*>|.
    if (solver.eigenvalues().maxCoeff() >= 1.0 - 1e-12) {
        const Eigen::VectorXcd psi = solver.eigenvectors().col(3);
        return std::abs((psi.adjoint() * flip * psi.conjugate())(0));
    }

    Eigen::Vector4d clamped = solver.eigenvalues().cwiseMax(0.0);
    Matrix sqrt_rho = solver.eigenvectors() *
                      clamped.cwiseSqrt().asDiagonal() *
                      solver.eigenvectors().adjoint();

    Matrix r = sqrt_rho * flip * rho.conjugate() * flip * sqrt_rho;
    // Hermitian PSD by construction; symmetrize away the last-ulp skew.
    r = (r + Matrix(r.adjoint())) / 2.0;

    Eigen::SelfAdjointEigenSolver<Matrix> rsolver(r, Eigen::EigenvaluesOnly);
    Eigen::Vector4d lambda = rsolver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    // ascending order from Eigen
    return std::max(0.0, lambda(3) - lambda(2) - lambda(1) - lambda(0));
}

XState parse_x_state(const std::string& spec, bool strict) {
    auto kv = parse_key_values(spec);
    auto take = [&](const char* key) {
        auto it = kv.find(key);
        if (it == kv.end()) return 0.0;
        double v = it->second;
        kv.erase(it);
        return v;
    };
    double r11 = take("r11"), r22 = take("r22"), r33 = take("r33");
    double r44 = take("r44"), r14 = take("r14"), r23 = take("r23");
    if (!kv.empty())
        throw Error(ErrorKind::parse_error,
                    "unknown key '" + kv.begin()->first + "'");
    return make_x_state(r11, r22, r33, r44, r14, r23, strict);
}

PureChannel parse_pure_channel(const std::string& spec) {
    auto kv = parse_key_values(spec);
    auto it = kv.find("alpha");
    if (it == kv.end() || kv.size() != 1)
        throw Error(ErrorKind::parse_error,
                    "pure channel spec must be alpha=<value>");
    return make_pure_channel(it->second);
}

XState sample_x_state(SplitMix64& rng, bool strict) {
    for (;;) {
        // flat Dirichlet over the 4-simplex via normalized exponentials
        double e[4];
        double sum = 0;
        for (double& v : e) {
            v = -std::log(1.0 - rng.next_double());
            sum += v;
        }
        double r11 = e[0] / sum, r22 = e[1] / sum, r33 = e[2] / sum,
               r44 = e[3] / sum;
        if (r11 > r44) std::swap(r11, r44);
        const double r14 = rng.next_double() * std::sqrt(r11 * r44);
        const double r23 = rng.next_double() * std::sqrt(r22 * r33);
        if (strict && !(r11 * r44 > r22 * r33)) continue;
        // renormalize away the last-ulp drift from the divisions
        const double trace = r11 + r22 + r33 + r44;
        return make_x_state(r11 / trace, r22 / trace, r33 / trace, r44 / trace,
                            r14, r23, strict);
    }
}

} // namespace xtel
