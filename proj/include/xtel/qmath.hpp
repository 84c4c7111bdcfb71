#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "xtel/errors.hpp"

namespace xtel {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Absolute tolerance for Hermiticity / unitarity / projector checks.
inline constexpr double kHermitianTol = 1e-10;
/// Eigenvalues above -kPsdTol count as non-negative.
inline constexpr double kPsdTol = 1e-10;
/// Probabilities below this are reported as zero with no post-state.
inline constexpr double kNullProbabilityTol = 1e-14;

// Basis convention used everywhere: tensor factors are qubits ordered left to
// right, so the basis state |q0 q1 ... q(n-1)> maps to row index
// q0*2^(n-1) + q1*2^(n-2) + ... + q(n-1). System order is a, A, B, with the
// auxiliary qubit b appended last when present.

/// A normalized single-qubit pure state; amplitudes on |0> and |1>.
struct PureState2 {
    Complex a0{1.0, 0.0};
    Complex a1{0.0, 0.0};

    Eigen::Vector2cd ket() const;
    Matrix density() const;
    double norm2() const; // |a0|^2 + |a1|^2
};

/// Validates normalization (and finiteness) before constructing.
PureState2 make_pure_state(Complex a0, Complex a1);

Matrix identity_matrix(int dim);
Matrix sigma_x();
Matrix sigma_y();
Matrix sigma_z();

/// |v><v| for a (not necessarily normalized) ket.
Matrix projector(const Eigen::VectorXcd& ket);

bool is_hermitian(const Matrix& m, double tol = kHermitianTol);
bool is_unitary(const Matrix& m, double tol = kHermitianTol);
/// Hermitian, unit trace, and eigenvalues >= -kPsdTol.
bool is_density_matrix(const Matrix& m, double tol = kHermitianTol);

/// Kronecker product. Supported result dimensions are 4 and 8; anything
/// larger throws ErrorKind::unsupported_dimension.
Matrix tensor(const Matrix& a, const Matrix& b);

/// Trace out all tensor factors not listed in `keep` (ascending factor
/// indices into the qubit ordering above). Preserves the trace.
Matrix partial_trace(const Matrix& m, const std::vector<int>& keep);

struct ProjectionResult {
    double probability = 0.0;
    /// Normalized post-measurement state; empty when the probability is
    /// below kNullProbabilityTol.
    std::optional<Matrix> state;
};

/// Projects Hermitian m onto the projector p: probability tr(p m p) and the
/// renormalized post state p m p / prob.
ProjectionResult project(const Matrix& m, const Matrix& p);

/// Real eigenvalues of a Hermitian matrix, sorted descending.
std::vector<double> hermitian_eigenvalues(const Matrix& m);

} // namespace xtel
