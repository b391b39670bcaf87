#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace pseudospec;
using Catch::Matchers::WithinAbs;

namespace {
std::vector<cplx> sorted_values(const std::vector<EigenPair>& pairs) {
    std::vector<cplx> v;
    for (const auto& p : pairs) v.push_back(p.value);
    std::sort(v.begin(), v.end(), [](cplx a, cplx b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return v;
}
} // namespace

TEST_CASE("eigen_decompose on a diagonal matrix") {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = 2.0;
    const auto pairs = eigen_decompose(m);
    REQUIRE(pairs.size() == 2);
    for (const auto& p : pairs) {
        CHECK_THAT(p.vector.norm(), WithinAbs(1.0, 1e-12));
        CHECK((m * p.vector - p.value * p.vector).norm() < 1e-14);
    }
    const auto v = sorted_values(pairs);
    CHECK(std::abs(v[0] - 1.0) < 1e-14);
    CHECK(std::abs(v[1] - 2.0) < 1e-14);
}

TEST_CASE("eigen_decompose on a nilpotent Jordan block") {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    for (const auto& p : eigen_decompose(m)) CHECK(std::abs(p.value) < 1e-8);
}

TEST_CASE("eigen_decompose recovers prescribed eigenvalues") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix a = testsupport::random_well_conditioned(rng, 6, 1e3);
        std::vector<cplx> lambdas;
        std::uniform_real_distribution<double> u(-2, 2);
        ComplexMatrix d = ComplexMatrix::Zero(6, 6);
        for (int i = 0; i < 6; ++i) {
            lambdas.emplace_back(u(rng), u(rng));
            d(i, i) = lambdas.back();
        }
        const ComplexMatrix m = a * d * a.inverse();
        const auto pairs = eigen_decompose(m);
        auto got = sorted_values(pairs);
        std::sort(lambdas.begin(), lambdas.end(), [](cplx x, cplx y) {
            return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
        });
        for (int i = 0; i < 6; ++i) CHECK(std::abs(got[i] - lambdas[i]) < 1e-8);
        for (const auto& p : pairs) CHECK((m * p.vector - p.value * p.vector).norm() <= 1e-8 * m.norm());
    }
}

TEST_CASE("eigen_decompose rejects malformed input") {
    CHECK_THROWS_AS(eigen_decompose(ComplexMatrix::Zero(2, 3)), DimensionError);
    ComplexMatrix m = ComplexMatrix::Identity(2, 2);
    m(0, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(eigen_decompose(m), NonFiniteError);
}

TEST_CASE("numerical_rank") {
    CHECK(numerical_rank(ComplexMatrix::Identity(3, 3), 1e-10) == 3);
    ComplexMatrix n = ComplexMatrix::Zero(2, 2);
    n(0, 1) = 1.0;
    CHECK(numerical_rank(n, 1e-10) == 1);
    CHECK(numerical_rank(ComplexMatrix::Zero(3, 3), 1e-10) == 0);
    CHECK_THROWS_AS(numerical_rank(n, -1.0), InvalidArgument);

    SECTION("square of the two-level scattering Hamiltonian vanishes") {
        const ComplexMatrix h = testsupport::two_level_hamiltonian(0.37, 1.3, 2.0);
        CHECK(numerical_rank(h, 1e-10) == 1);
        CHECK(numerical_rank(h * h, 1e-10) == 0);
    }
}

TEST_CASE("numerical_rank is monotone under zero padding") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        ComplexMatrix m = testsupport::random_complex(rng, 4, 3) * testsupport::random_complex(rng, 3, 5);
        ComplexMatrix padded = ComplexMatrix::Zero(6, 7);
        padded.topLeftCorner(4, 5) = m;
        CHECK(numerical_rank(padded, 1e-10) <= numerical_rank(m, 1e-10));
        CHECK(numerical_rank(m, 1e-10) == 3);
    }
}

TEST_CASE("inverse") {
    CHECK((inverse(ComplexMatrix::Identity(3, 3)) - ComplexMatrix::Identity(3, 3)).norm() == 0.0);

    ComplexMatrix b(2, 2);
    b << 1.0, 1.0, -1.0, 0.0;
    ComplexMatrix expected(2, 2);
    expected << 0.0, -1.0, 1.0, 1.0;
    CHECK((inverse(b) - expected).norm() < 1e-15);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix m = testsupport::random_well_conditioned(rng, 8, 1e3);
        const double cond = condition_number(m);
        const ComplexMatrix mi = inverse(m);
        CHECK((m * mi - ComplexMatrix::Identity(8, 8)).norm() < 1e-10);
        CHECK((inverse(mi) - m).norm() <= 1e-9 * cond * cond);
    }
}

TEST_CASE("inverse reports singular input with a condition estimate") {
    ComplexMatrix s = ComplexMatrix::Zero(2, 2);
    s(0, 0) = 1.0;
    s(0, 1) = 1.0;
    s(1, 0) = 1.0;
    s(1, 1) = 1.0;
    try {
        inverse(s);
        FAIL("expected SingularMatrixError");
    } catch (const SingularMatrixError& e) {
        CHECK(e.condition() > 1e12);
    }
}

TEST_CASE("Schur reordering keeps a unitary similarity") {
    std::mt19937_64 rng(17);
    const ComplexMatrix h = testsupport::random_complex(rng, 7, 7);
    SchurForm s = complex_schur(h);
    const cplx target = s.T(5, 5);
    reorder_leading(s, {3, 5});
    CHECK((s.Q * s.T * s.Q.adjoint() - h).norm() < 1e-12 * h.norm());
    CHECK((s.Q.adjoint() * s.Q - ComplexMatrix::Identity(7, 7)).norm() < 1e-13);
    CHECK(s.T.triangularView<Eigen::StrictlyLower>().toDenseMatrix().norm() < 1e-12 * h.norm());
    CHECK(std::abs(s.T(1, 1) - target) < 1e-12 * h.norm());
}
