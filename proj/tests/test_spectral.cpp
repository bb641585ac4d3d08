#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "qwalk/spectral.hpp"
#include "qwalk/walk_engine.hpp"

using namespace qwalk;

namespace {

Vector4c random_unit_alpha(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector4c alpha;
    for (int i = 0; i < 4; ++i) {
        alpha(i) = complexd(gauss(rng), gauss(rng));
    }
    return alpha / alpha.norm();
}

} // namespace

TEST_CASE("momentum operator rejects k outside [0, 2pi)") {
    const CoinParameters coin = CoinParameters::from_angle(0.8);
    CHECK_THROWS_AS(momentum_operator(-0.1, coin), std::domain_error);
    CHECK_THROWS_AS(momentum_operator(2.0 * pi, coin), std::domain_error);
    CHECK_NOTHROW(momentum_operator(0.0, coin));
    CHECK_NOTHROW(momentum_operator(2.0 * pi - 1e-12, coin));
}

TEST_CASE("momentum operator equals shift phases times the coin") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(0.05, pi / 2.0 - 0.05);
    std::uniform_real_distribution<double> momentum(0.0, 2.0 * pi);
    for (int trial = 0; trial < 100; ++trial) {
        const CoinParameters coin = CoinParameters::from_angle(angle(rng));
        const double k = momentum(rng);
        const Matrix4c coin_op = build_coin_operator(coin);
        Matrix4c expected = coin_op;
        for (int j = 0; j < 4; ++j) {
            expected(0, j) *= std::exp(complexd(0.0, k));
            expected(3, j) *= std::exp(complexd(0.0, -k));
        }
        const MomentumOperator op = momentum_operator(k, coin);
        CHECK((op.matrix - expected).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((op.matrix * op.matrix.adjoint() - Matrix4c::Identity())
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
    }
}

TEST_CASE("closed-form eigenvalues at the special momenta") {
    const CoinParameters coin = CoinParameters::from_angle(0.7);
    const EigenSystem at0 = eigen_system(0.0, coin);
    CHECK(std::abs(at0.lambda[0] - complexd(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(at0.lambda[1] - complexd(-1.0, 0.0)) < 1e-14);
    CHECK(std::abs(at0.group_velocity[0] - std::cos(0.7)) < 1e-14);
    CHECK(std::abs(at0.group_velocity[3] + std::cos(0.7)) < 1e-14);

    const EigenSystem atpi = eigen_system(pi, coin);
    CHECK(std::abs(atpi.lambda[0] - complexd(std::sin(0.7), std::cos(0.7))) < 1e-14);
    CHECK(std::abs(atpi.group_velocity[0]) < 1e-14);
}

TEST_CASE("closed-form spectrum matches a dense eigensolver") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> angle(0.05, pi / 2.0 - 0.05);
    std::uniform_real_distribution<double> momentum(0.0, 2.0 * pi);
    for (int trial = 0; trial < 40; ++trial) {
        const CoinParameters coin = CoinParameters::from_angle(angle(rng));
        const double k = momentum(rng);
        const EigenSystem sys = eigen_system(k, coin);
        const MomentumOperator op = momentum_operator(k, coin);

        Eigen::ComplexEigenSolver<Matrix4c> solver(op.matrix);
        REQUIRE(solver.info() == Eigen::Success);
        const Vector4c solved = solver.eigenvalues();
        for (int j = 0; j < 4; ++j) {
            double best = 1e30;
            for (int m = 0; m < 4; ++m) {
                best = std::min(best, std::abs(sys.branch_values[j] - solved(m)));
            }
            CHECK(best < 1e-10);
        }

        // flat pair sits exactly at -1, all branches on the unit circle
        CHECK(std::abs(sys.branch_values[1] - complexd(-1.0, 0.0)) < 1e-14);
        CHECK(std::abs(sys.branch_values[2] - complexd(-1.0, 0.0)) < 1e-14);
        for (int j = 0; j < 4; ++j) {
            CHECK(std::abs(std::abs(sys.branch_values[j]) - 1.0) < 1e-13);
        }

        // branch vectors are unit eigenvectors of the dual operator
        for (int j = 0; j < 4; ++j) {
            const Vector4c resid =
                op.matrix * sys.branch_vectors[j] -
                sys.branch_values[j] * sys.branch_vectors[j];
            CHECK(resid.cwiseAbs().maxCoeff() < 1e-12);
            CHECK(std::abs(sys.branch_vectors[j].norm() - 1.0) < 1e-13);
        }

        // the two one-qubit eigenvectors swap component magnitudes
        CHECK(std::abs(std::abs(sys.v[0](0)) - std::abs(sys.v[1](1))) < 1e-12);
        CHECK(std::abs(std::abs(sys.v[0](1)) - std::abs(sys.v[1](0))) < 1e-12);
    }
}

TEST_CASE("group velocity matches a finite-difference phase derivative") {
    const CoinParameters coin = CoinParameters::from_angle(0.95);
    const double dk = 1e-5;
    for (double k : {0.4, 1.3, 2.8, 4.4, 5.9}) {
        const EigenSystem lo = eigen_system(k - dk, coin);
        const EigenSystem hi = eigen_system(k + dk, coin);
        const EigenSystem mid = eigen_system(k, coin);
        double dphase = std::arg(hi.branch_values[0] / lo.branch_values[0]);
        const double fd = dphase / (2.0 * dk);
        CHECK(std::abs(fd - mid.group_velocity[0]) < 1e-6);
        CHECK(std::abs(mid.group_velocity[1]) == 0.0);
        CHECK(std::abs(mid.group_velocity[2]) == 0.0);
        CHECK(std::abs(mid.group_velocity[0] + mid.group_velocity[3]) < 1e-15);
    }
}

TEST_CASE("overlaps resolve the identity and pick out a pure branch") {
    std::mt19937_64 rng(13);
    const CoinParameters coin = CoinParameters::from_angle(0.33);
    for (int trial = 0; trial < 20; ++trial) {
        const Vector4c alpha = random_unit_alpha(rng);
        const EigenSystem sys = eigen_system(1.1, coin);
        const auto w = initial_overlap(sys, InitialCoinState::from_components(alpha));
        CHECK(std::abs(w[0] + w[1] + w[2] + w[3] - 1.0) < 1e-12);
        for (double wj : w) {
            CHECK(wj >= -1e-15);
        }
    }
    const EigenSystem sys = eigen_system(2.2, coin);
    const auto w = initial_overlap(
        sys, InitialCoinState::from_components(sys.branch_vectors[0]));
    CHECK(std::abs(w[0] - 1.0) < 1e-12);
    CHECK(std::abs(w[1]) < 1e-12);
    CHECK(std::abs(w[2]) < 1e-12);
    CHECK(std::abs(w[3]) < 1e-12);
}

TEST_CASE("momentum-integrated moments for the entangled state") {
    const CoinParameters coin = CoinParameters::from_angle(pi / 4.0);
    const InitialCoinState bell = InitialCoinState::bell();
    const QuadratureSpec quad;
    CHECK(std::abs(spectral_moment(coin, bell, 0, quad) - 1.0) < 1e-10);
    CHECK(std::abs(spectral_moment(coin, bell, 1, quad)) < 1e-10);
    CHECK(std::abs(spectral_moment(coin, bell, 2, quad) - 0.232233047033632) < 1e-9);
    CHECK(std::abs(spectral_c00(coin, bell, quad) - (std::sqrt(2.0) - 1.0)) < 1e-8);

    const InitialCoinState nl = InitialCoinState::nonlocalizing();
    CHECK(std::abs(spectral_c00(coin, nl, quad)) < 1e-8);
}

TEST_CASE("momentum-space reconstruction equals direct evolution") {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> angle(0.15, pi / 2.0 - 0.15);
    const QuadratureSpec quad;
    for (int trial = 0; trial < 6; ++trial) {
        const CoinParameters coin = CoinParameters::from_angle(angle(rng));
        const InitialCoinState initial =
            InitialCoinState::from_components(random_unit_alpha(rng));
        const long t = 3 + 2 * trial;
        const WalkState state = evolve(coin, initial, t);
        for (long x = -t; x <= t; ++x) {
            const Vector4c rebuilt = inverse_fourier_amplitude(coin, initial, t, x, quad);
            CHECK((rebuilt - state.at(x)).cwiseAbs().maxCoeff() < 1e-10);
        }
    }
    const CoinParameters coin = CoinParameters::from_angle(0.5);
    const InitialCoinState bell = InitialCoinState::bell();
    CHECK((inverse_fourier_amplitude(coin, bell, 0, 0, quad) - bell.components())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    CHECK(inverse_fourier_amplitude(coin, bell, 5, 6, quad).cwiseAbs().maxCoeff() ==
          0.0);
    CHECK(inverse_fourier_amplitude(coin, bell, 5, -6, quad).cwiseAbs().maxCoeff() ==
          0.0);
}
