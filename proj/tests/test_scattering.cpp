#include <catch_amalgamated.hpp>

#include <cmath>

#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace pseudospec;

namespace {

PotentialSpec barrier(double v0, double a, double b, double k) { return PotentialSpec{RectangularBarrier{v0, a, b}, k}; }

// Exact U(L, 0) for a constant potential v on [0, L] from the Schrodinger
// solution psi = a e^{ikx} + b e^{-ikx}.
testsupport::CMat exact_constant_barrier(double v, double len, double k) {
    const double q2 = k * k - v;
    testsupport::CMat u(2, 2);
    for (int col = 0; col < 2; ++col) {
        const cplx a0 = col == 0 ? 1.0 : 0.0, b0 = col == 1 ? 1.0 : 0.0;
        const cplx psi0 = a0 + b0, dpsi0 = cplx(0, k) * (a0 - b0);
        cplx psi, dpsi;
        if (q2 > 0) {
            const double q = std::sqrt(q2);
            psi = psi0 * std::cos(q * len) + dpsi0 * std::sin(q * len) / q;
            dpsi = -psi0 * q * std::sin(q * len) + dpsi0 * std::cos(q * len);
        } else if (q2 < 0) {
            const double q = std::sqrt(-q2);
            psi = psi0 * std::cosh(q * len) + dpsi0 * std::sinh(q * len) / q;
            dpsi = psi0 * q * std::sinh(q * len) + dpsi0 * std::cosh(q * len);
        } else {
            psi = psi0 + dpsi0 * len;
            dpsi = dpsi0;
        }
        const cplx ik(0, k);
        u(0, col) = (psi + dpsi / ik) * std::exp(-ik * len) / 2.0;
        u(1, col) = (psi - dpsi / ik) * std::exp(ik * len) / 2.0;
    }
    return u;
}

} // namespace

TEST_CASE("hamiltonian_at") {
    const auto spec = barrier(2.0, 0.0, 1.0, 1.0);
    ComplexMatrix expected(2, 2);
    expected << 1.0, 1.0, -1.0, -1.0;
    CHECK((hamiltonian_at(0.0, spec) - expected).norm() < 1e-15);
    for (double x : {0.0, 0.3, 0.785398, 1.0})
        CHECK((hamiltonian_at(x, spec) - testsupport::two_level_hamiltonian(x, 1.0, 2.0)).norm() < 1e-15);
    CHECK(hamiltonian_at(1.5, spec).norm() == 0.0);
    CHECK(hamiltonian_at(-0.1, spec).norm() == 0.0);
    // nilpotent everywhere
    const ComplexMatrix h = hamiltonian_at(0.4, barrier(3.0, 0.0, 1.0, 0.7));
    CHECK((h * h).norm() < 1e-14);
}

TEST_CASE("potentials") {
    SECTION("rectangular barrier includes its endpoints") {
        const auto spec = barrier(1.5, 0.0, 1.0, 1.0);
        CHECK(spec.potential(0.0) == 1.5);
        CHECK(spec.potential(1.0) == 1.5);
        CHECK(spec.potential(1.0 + 1e-12) == 0.0);
    }
    SECTION("sampled potential interpolates linearly") {
        PotentialSpec spec{SampledPotential{{{0.0, 0.0}, {1.0, 2.0}, {3.0, -2.0}}}, 1.0};
        CHECK(spec.potential(0.5) == Catch::Approx(1.0));
        CHECK(spec.potential(2.0) == Catch::Approx(0.0));
        CHECK(spec.potential(3.0) == -2.0);
        CHECK_THROWS_AS(spec.potential(3.5), ExtrapolationError);
        CHECK_THROWS_AS(spec.potential(-0.1), ExtrapolationError);
    }
    SECTION("validation") {
        CHECK_THROWS_AS(barrier(1.0, 1.0, 0.0, 1.0).validate(), InvalidArgument);
        CHECK_THROWS_AS(barrier(1.0, 0.0, 1.0, 0.0).validate(), InvalidArgument);
        CHECK_THROWS_AS(barrier(1.0, 0.0, 1.0, -1.0).validate(), InvalidArgument);
        CHECK_THROWS_AS(barrier(std::nan(""), 0.0, 1.0, 1.0).validate(), NonFiniteError);
        CHECK_THROWS_AS((PotentialSpec{SampledPotential{}, 1.0}.validate()), InvalidArgument);
        CHECK_THROWS_AS((PotentialSpec{SampledPotential{{{0.0, 1.0}, {0.0, 2.0}}}, 1.0}.validate()), InvalidArgument);
    }
}

TEST_CASE("evolve_transfer against the exact barrier solution") {
    for (double k : {0.5, 1.0, 2.0}) {
        const auto spec = barrier(1.0, 0.0, 1.0, k);
        const auto result = evolve_transfer(spec, 0.0, 1.0, 2000);
        const auto exact = exact_constant_barrier(1.0, 1.0, k);
        CHECK(testsupport::max_abs(result.U - exact) < 1e-10);
        CHECK(result.det_drift < 1e-9);
        CHECK(result.steps == 2000);
    }
}

TEST_CASE("evolve_transfer over free space is the identity") {
    const auto result = evolve_transfer(barrier(1.0, 5.0, 6.0, 1.0), 0.0, 2.0, 50);
    CHECK((result.U - ComplexMatrix::Identity(2, 2)).norm() == 0.0);
}

TEST_CASE("transfer matrix is sigma_3-unitary and conserves flux") {
    PotentialSpec spec{SampledPotential{{{0.0, 0.0}, {0.5, 1.2}, {1.0, -0.4}, {2.0, 0.0}}}, 1.3};
    const auto result = evolve_transfer(spec, 0.0, 2.0, 2000);
    const ComplexMatrix& u = result.U;
    CHECK((u.adjoint() * testsupport::sigma3() * u - testsupport::sigma3()).norm() < 1e-10);
    const auto amp = amplitudes_from_transfer(u);
    CHECK(std::norm(amp.transmission) + std::norm(amp.reflection_left) == Catch::Approx(1.0).epsilon(1e-10));
    CHECK(std::norm(amp.transmission) + std::norm(amp.reflection_right) == Catch::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("RK4 converges at fourth order") {
    const auto spec = barrier(1.0, 0.0, 1.0, 1.0);
    const auto exact = exact_constant_barrier(1.0, 1.0, 1.0);
    const double e1 = testsupport::max_abs(evolve_transfer(spec, 0.0, 1.0, 10).U - exact);
    const double e2 = testsupport::max_abs(evolve_transfer(spec, 0.0, 1.0, 20).U - exact);
    const double e3 = testsupport::max_abs(evolve_transfer(spec, 0.0, 1.0, 40).U - exact);
    CHECK(std::log2(e1 / e2) == Catch::Approx(4.0).margin(0.2));
    CHECK(std::log2(e2 / e3) == Catch::Approx(4.0).margin(0.2));
}

TEST_CASE("evolve_transfer rejects bad arguments") {
    const auto spec = barrier(1.0, 0.0, 1.0, 1.0);
    CHECK_THROWS_AS(evolve_transfer(spec, 1.0, 0.0, 10), InvalidArgument);
    CHECK_THROWS_AS(evolve_transfer(spec, 0.0, 1.0, 0), InvalidArgument);
    PotentialSpec sampled{SampledPotential{{{0.0, 1.0}, {1.0, 1.0}}}, 1.0};
    CHECK_THROWS_AS(evolve_transfer(sampled, 0.0, 2.0, 10), ExtrapolationError);
}

TEST_CASE("closed-form Jordan data of H(x)") {
    for (double k : {0.5, 1.0, 2.0})
        for (double x : {0.0, 0.3, 0.785398, 1.0}) {
            const ComplexMatrix a = scattering_A(x, k);
            // H with v/(2k) = 1
            const ComplexMatrix h = testsupport::two_level_hamiltonian(x, k, 2 * k);
            CHECK((a * scattering_H0() * inverse(a) - h).norm() < 1e-14);
            CHECK((scattering_phi(x, k).adjoint() * a - ComplexMatrix::Identity(2, 2)).norm() < 1e-14);
            CHECK((scattering_head(x, k) - a.col(0)).norm() == 0.0);
        }
}

TEST_CASE("pipeline in the closed-form gauge") {
    for (double k : {0.5, 1.0, 2.0})
        for (double x : {0.0, 0.3, 0.785398, 1.0}) {
            const ComplexMatrix h = testsupport::two_level_hamiltonian(x, k, 2 * k);
            auto bd = block_diagonalize(h);
            align_to_closed_form(bd, x, k);
            const ComplexMatrix a = scattering_A(x, k);
            // aligned head is a positive multiple of the closed-form head
            const cplx ratio = bd.A(0, 0) / a(0, 0);
            CHECK(std::abs(ratio.imag()) < 1e-12);
            CHECK(ratio.real() > 0);
            CHECK((bd.A.col(0) - ratio * a.col(0)).norm() < 1e-12);
            CHECK((biorthonormal_complement(bd).adjoint() * bd.A - ComplexMatrix::Identity(2, 2)).norm() < 1e-12);

            const auto ops = synthesize(bd, classify_spectrum(bd.table));
            const auto cf = closed_form_operators(x, k);
            CHECK((ops.S - cf.S).norm() == 0.0);
            CHECK((ops.tau0.matrix() - cf.tau0.matrix()).norm() == 0.0);
            CHECK((ops.C0 - cf.C0).norm() == 0.0);
            CHECK((ops.eta0 - cf.eta0).norm() == 0.0);
            CHECK((ops.X0.matrix() - cf.X0.matrix()).norm() == 0.0);
            CHECK(testsupport::max_abs(ops.X.matrix() - testsupport::phase_sigma3(-2 * k * x)) < 1e-12);
            CHECK(residual_intertwine_antilinear(h, ops.tau) < 1e-12);
            CHECK(residual_intertwine_antilinear(h, ops.X * ops.tau * ops.X) < 1e-12);
        }
}

TEST_CASE("anti-pseudo-Hermiticity operator of H(x) with the closed-form basis") {
    for (double k : {0.5, 1.0})
        for (double x : {0.0, 0.3, 1.0}) {
            const ComplexMatrix a = scattering_A(x, k);
            // tau = (A sigma_1 T A^dagger)^{-1}, computed independently
            const testsupport::CMat inner = a * testsupport::sigma1() * a.transpose();
            const testsupport::CMat k_tau = inner.inverse().conjugate();
            testsupport::CMat expected(2, 2);
            expected << 0.0, -1.0, -1.0, -2.0 * std::polar(1.0, 2 * k * x);
            CHECK(testsupport::max_abs(k_tau - expected) < 1e-14);
            CHECK(residual_intertwine_antilinear(testsupport::two_level_hamiltonian(x, k, 2 * k), AntilinearOp(k_tau)) <
                  1e-14);
        }
}

TEST_CASE("scattering_tau_matrix is not Hermitian") {
    const AntilinearOp shown(scattering_tau_matrix(0.3, 1.0));
    CHECK_FALSE(is_hermitian(shown, 1e-8).holds);
    CHECK(residual_intertwine_antilinear(testsupport::two_level_hamiltonian(0.3, 1.0, 2.0), shown) > 0.1);
}
