#include "xtel/qmath.hpp"

#include <algorithm>
#include <cmath>

namespace xtel {

namespace {

bool all_finite(const Matrix& m) {
    return m.allFinite();
}

int qubit_count(Eigen::Index dim) {
    switch (dim) {
    case 2: return 1;
    case 4: return 2;
    case 8: return 3;
    default:
        throw Error(ErrorKind::unsupported_dimension,
                    "unsupported dimension " + std::to_string(dim));
    }
}

void require_square(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw Error(ErrorKind::unsupported_dimension, "matrix must be square");
    qubit_count(m.rows());
}

} // namespace

Eigen::Vector2cd PureState2::ket() const {
    return Eigen::Vector2cd(a0, a1);
}

Matrix PureState2::density() const {
    return projector(ket());
}

double PureState2::norm2() const {
    return std::norm(a0) + std::norm(a1);
}

PureState2 make_pure_state(Complex a0, Complex a1) {
    PureState2 psi{a0, a1};
    if (!std::isfinite(a0.real()) || !std::isfinite(a0.imag()) ||
        !std::isfinite(a1.real()) || !std::isfinite(a1.imag()))
        throw Error(ErrorKind::invalid_argument, "non-finite amplitude");
    if (std::abs(psi.norm2() - 1.0) > 1e-9)
        throw Error(ErrorKind::invalid_argument, "state is not normalized");
    return psi;
}

Matrix identity_matrix(int dim) {
    qubit_count(dim);
    return Matrix::Identity(dim, dim);
}

Matrix sigma_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix sigma_y() {
    Matrix m(2, 2);
    m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return m;
}

Matrix sigma_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix projector(const Eigen::VectorXcd& ket) {
    return ket * ket.adjoint();
}

bool is_hermitian(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    Matrix d = m * m.adjoint() - Matrix::Identity(m.rows(), m.cols());
    return d.cwiseAbs().maxCoeff() <= tol;
}

bool is_density_matrix(const Matrix& m, double tol) {
    if (!is_hermitian(m, tol)) return false;
    if (std::abs(m.trace().real() - 1.0) > 1e-9 ||
        std::abs(m.trace().imag()) > tol)
        return false;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m,
                                                 Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff() >= -kPsdTol;
}

Matrix tensor(const Matrix& a, const Matrix& b) {
    require_square(a);
    require_square(b);
    const Eigen::Index dim = a.rows() * b.rows();
    if (dim != 4 && dim != 8)
        throw Error(ErrorKind::unsupported_dimension,
                    "unsupported dimension " + std::to_string(dim));
    Matrix out(dim, dim);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
                a(i, j) * b;
    return out;
}

Matrix partial_trace(const Matrix& m, const std::vector<int>& keep) {
    require_square(m);
    if (!all_finite(m))
        throw Error(ErrorKind::invalid_argument, "non-finite matrix entry");
    const int n = qubit_count(m.rows());
    if (keep.empty())
        throw Error(ErrorKind::invalid_argument, "empty subsystem set");
    std::vector<bool> kept(n, false);
    for (int f : keep) {
        if (f < 0 || f >= n)
            throw Error(ErrorKind::invalid_argument,
                        "subsystem index out of range");
        if (kept[f])
            throw Error(ErrorKind::invalid_argument,
                        "duplicate subsystem index");
        kept[f] = true;
    }
    std::vector<int> kept_factors, traced_factors;
    for (int f = 0; f < n; ++f)
        (kept[f] ? kept_factors : traced_factors).push_back(f);

    const int k = static_cast<int>(kept_factors.size());
    const int t = n - k;
    const Eigen::Index out_dim = Eigen::Index(1) << k;
    // Factor f occupies bit (n-1-f) of the row index (leftmost factor is the
    // most significant bit).
    auto full_index = [&](Eigen::Index kept_bits, Eigen::Index traced_bits) {
        Eigen::Index idx = 0;
        for (int i = 0; i < k; ++i)
            if (kept_bits >> (k - 1 - i) & 1)
                idx |= Eigen::Index(1) << (n - 1 - kept_factors[i]);
        for (int i = 0; i < t; ++i)
            if (traced_bits >> (t - 1 - i) & 1)
                idx |= Eigen::Index(1) << (n - 1 - traced_factors[i]);
        return idx;
    };

    Matrix out = Matrix::Zero(out_dim, out_dim);
    for (Eigen::Index i = 0; i < out_dim; ++i)
        for (Eigen::Index j = 0; j < out_dim; ++j)
            for (Eigen::Index tr = 0; tr < (Eigen::Index(1) << t); ++tr)
                out(i, j) += m(full_index(i, tr), full_index(j, tr));
    return out;
}

ProjectionResult project(const Matrix& m, const Matrix& p) {
    require_square(m);
    if (p.rows() != m.rows() || p.cols() != m.cols())
        throw Error(ErrorKind::unsupported_dimension,
                    "projector dimension mismatch");
    if (!is_hermitian(p) || (p * p - p).cwiseAbs().maxCoeff() > kHermitianTol)
        throw Error(ErrorKind::not_projector, "matrix is not a projector");
    if (!is_hermitian(m))
        throw Error(ErrorKind::not_hermitian, "state matrix is not Hermitian");

    Matrix post = p * m * p;
    double prob = post.trace().real();
    ProjectionResult result;
    if (prob < kNullProbabilityTol) {
        result.probability = 0.0;
        return result;
    }
    result.probability = std::min(prob, 1.0);
    result.state = post / prob;
    return result;
}

std::vector<double> hermitian_eigenvalues(const Matrix& m) {
    require_square(m);
    if (!is_hermitian(m))
        throw Error(ErrorKind::not_hermitian, "matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    std::vector<double> values(solver.eigenvalues().data(),
                               solver.eigenvalues().data() + m.rows());
    std::sort(values.begin(), values.end(), std::greater<>());
    return values;
}

} // namespace xtel
