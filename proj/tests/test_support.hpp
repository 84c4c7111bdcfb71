#pragma once

#include <doctest.h>

#include "xtel/fidelity.hpp"

namespace xtel::test {

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    REQUIRE(a.rows() == b.rows());
    REQUIRE(a.cols() == b.cols());
    return (a - b).cwiseAbs().maxCoeff();
}

inline Matrix random_density(SplitMix64& rng, int dim) {
    Matrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j)
            g(i, j) = Complex(rng.next_double() - 0.5, rng.next_double() - 0.5);
    Matrix rho = g * g.adjoint();
    return rho / rho.trace().real();
}

inline PureState2 random_state(SplitMix64& rng) {
    return HaarSampler::state_at(rng.next(), 0);
}

inline Matrix ket0_density() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1;
    return m;
}

inline Matrix ket1_density() {
    Matrix m = Matrix::Zero(2, 2);
    m(1, 1) = 1;
    return m;
}

} // namespace xtel::test
