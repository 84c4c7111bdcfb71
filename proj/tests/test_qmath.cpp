#include <doctest.h>

#include "test_support.hpp"
#include "xtel/teleport.hpp"

using namespace xtel;
using test::max_abs_diff;
using test::random_density;

TEST_CASE("tensor: identities and basis bookkeeping") {
    CHECK(max_abs_diff(tensor(identity_matrix(2), identity_matrix(2)),
                       identity_matrix(4)) == 0.0);

    Matrix d = tensor(test::ket0_density(), test::ket1_density());
    Matrix expected = Matrix::Zero(4, 4);
    expected(1, 1) = 1.0; // |01> in lexicographic order
    CHECK(max_abs_diff(d, expected) == 0.0);

    Matrix xx = tensor(sigma_x(), sigma_x());
    CHECK(max_abs_diff(xx * xx, identity_matrix(4)) < 1e-15);
}

TEST_CASE("tensor: trace multiplicativity and associativity") {
    SplitMix64 rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        Matrix a = random_density(rng, 2);
        Matrix b = random_density(rng, 2);
        Matrix c = random_density(rng, 2);
        CHECK(std::abs(tensor(a, b).trace() - a.trace() * b.trace()) < 1e-14);
        CHECK(max_abs_diff(tensor(tensor(a, b), c), tensor(a, tensor(b, c))) <
              1e-15);
    }
}

TEST_CASE("tensor: rejects dimensions beyond 8") {
    CHECK_THROWS_WITH_AS(tensor(identity_matrix(4), identity_matrix(4)),
                         doctest::Contains("unsupported dimension"), Error);
    try {
        tensor(identity_matrix(2), identity_matrix(8));
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::unsupported_dimension);
    }
}

TEST_CASE("partial_trace: product factorization") {
    SplitMix64 rng(12);
    for (int rep = 0; rep < 10; ++rep) {
        Matrix rho = random_density(rng, 2);
        Matrix sig = random_density(rng, 2);
        Matrix joint = tensor(rho, sig);
        CHECK(max_abs_diff(partial_trace(joint, {0}), rho) < 1e-14);
        CHECK(max_abs_diff(partial_trace(joint, {1}), sig) < 1e-14);
        CHECK(max_abs_diff(partial_trace(joint, {0, 1}), joint) == 0.0);
    }
}

TEST_CASE("partial_trace: Bell marginals are maximally mixed") {
    for (BellIndex k : kBellIndices) {
        Matrix p = bell_projector(k);
        CHECK(max_abs_diff(partial_trace(p, {0}), identity_matrix(2) / 2.0) <
              1e-15);
        CHECK(max_abs_diff(partial_trace(p, {1}), identity_matrix(2) / 2.0) <
              1e-15);
    }
}

TEST_CASE("partial_trace: preserves trace on random 8x8 states") {
    SplitMix64 rng(13);
    for (int rep = 0; rep < 10; ++rep) {
        Matrix m = random_density(rng, 8);
        for (const std::vector<int>& keep :
             {std::vector<int>{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}}) {
            Matrix reduced = partial_trace(m, keep);
            CHECK(std::abs(reduced.trace() - m.trace()) < 1e-13);
            CHECK(is_hermitian(reduced, 1e-12));
        }
    }
}

TEST_CASE("partial_trace: invalid subsystem sets") {
    Matrix m = identity_matrix(4) / 4.0;
    CHECK_THROWS_AS((void)partial_trace(m, {}), Error);
    CHECK_THROWS_AS((void)partial_trace(m, {2}), Error);
    CHECK_THROWS_AS((void)partial_trace(m, {-1}), Error);
    CHECK_THROWS_AS((void)partial_trace(m, {0, 0}), Error);
}

TEST_CASE("project: basic outcomes") {
    auto r = project(test::ket0_density(), test::ket0_density());
    CHECK(r.probability == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(r.state.has_value());
    CHECK(max_abs_diff(*r.state, test::ket0_density()) < 1e-15);

    auto half = project(identity_matrix(2) / 2.0, test::ket1_density());
    CHECK(half.probability == doctest::Approx(0.5).epsilon(1e-12));
    REQUIRE(half.state.has_value());
    CHECK(max_abs_diff(*half.state, test::ket1_density()) < 1e-15);
}

TEST_CASE("project: null outcome below tolerance") {
    auto r = project(test::ket0_density(), test::ket1_density());
    CHECK(r.probability == 0.0);
    CHECK(!r.state.has_value());
}

TEST_CASE("project: rejects non-projectors and non-Hermitian states") {
    Matrix not_projector = 0.5 * identity_matrix(2);
    try {
        project(identity_matrix(2) / 2.0, not_projector);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::not_projector);
    }
    Matrix skew(2, 2);
    skew << 0, 1, 0, 0;
    CHECK_THROWS_AS((void)project(skew, test::ket0_density()), Error);
}

// Bell projections of |psi><psi| (x) |C><C| must reproduce the branch
// probabilities p-bar/2 and p-ddot/2 predicted by the closed form.
TEST_CASE("project: Bell-basis probabilities match the branch closed form") {
    SplitMix64 rng(14);
    for (int rep = 0; rep < 25; ++rep) {
        PureState2 psi = test::random_state(rng);
        PureChannel ch =
            make_pure_channel(rng.next_double() * 0.70710678118654752440);
        Matrix joint = tensor(psi.density(), ch.density());
        const double t = std::norm(psi.a0);
        const double p_bar =
            ch.alpha * ch.alpha * t + ch.beta * ch.beta * (1.0 - t);

        double total = 0.0;
        for (BellIndex k : kBellIndices) {
            auto r = project(joint, tensor(bell_projector(k), identity_matrix(2)));
            const bool bar =
                k == BellIndex::phi_plus || k == BellIndex::phi_minus;
            const double expected = (bar ? p_bar : 1.0 - p_bar) / 2.0;
            CHECK(r.probability == doctest::Approx(expected).epsilon(1e-12));
            total += r.probability;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("hermitian_eigenvalues: fixed spectra") {
    Matrix half = 0.5 * identity_matrix(2);
    auto ev = hermitian_eigenvalues(half);
    CHECK(ev == std::vector<double>{0.5, 0.5});

    auto pauli = hermitian_eigenvalues(sigma_x());
    CHECK(pauli[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pauli[1] == doctest::Approx(-1.0).epsilon(1e-14));

    Matrix skew(2, 2);
    skew << 0, 1, 0, 0;
    try {
        hermitian_eigenvalues(skew);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::not_hermitian);
    }
}

TEST_CASE("hermitian_eigenvalues: projector spectra are 0/1, sum is trace") {
    SplitMix64 rng(15);
    for (int rep = 0; rep < 20; ++rep) {
        PureState2 psi = test::random_state(rng);
        Matrix p = psi.density();
        for (double ev : hermitian_eigenvalues(p))
            CHECK(std::min(std::abs(ev), std::abs(ev - 1.0)) < 1e-10);

        Matrix m = random_density(rng, 8);
        auto ev = hermitian_eigenvalues(m);
        double sum = 0;
        for (double v : ev) sum += v;
        CHECK(sum == doctest::Approx(m.trace().real()).epsilon(1e-12));
        CHECK(std::is_sorted(ev.rbegin(), ev.rend()));
    }
}

// X-state spectra come in two 2x2 blocks with known closed-form eigenvalues.
TEST_CASE("hermitian_eigenvalues: X-state block closed form") {
    SplitMix64 rng(16);
    for (int rep = 0; rep < 200; ++rep) {
        XState x = sample_x_state(rng);
        auto ev = hermitian_eigenvalues(x.as_matrix());

        auto block = [](double a, double d, double off) {
            const double mid = (a + d) / 2.0;
            const double rad =
                std::sqrt((a - d) * (a - d) / 4.0 + off * off);
            return std::pair{mid + rad, mid - rad};
        };
        auto [o1, o2] = block(x.r11, x.r44, x.r14);
        auto [i1, i2] = block(x.r22, x.r33, x.r23);
        std::vector<double> expected{o1, o2, i1, i2};
        std::sort(expected.begin(), expected.end(), std::greater<>());
        for (std::size_t i = 0; i < 4; ++i)
            CHECK(ev[i] == doctest::Approx(expected[i]).epsilon(1e-10));
        CHECK(ev[3] >= -kPsdTol);
    }
}

TEST_CASE("make_pure_state validates normalization") {
    CHECK_NOTHROW(make_pure_state({0.6, 0.0}, {0.0, 0.8}));
    CHECK_THROWS_AS(make_pure_state({1.0, 0.0}, {0.5, 0.0}), Error);
}
