#include "qwalk/spectral.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace qwalk {

namespace {

void require_momentum_range(double k) {
    if (!(k >= 0.0 && k < 2.0 * pi)) {
        throw std::domain_error("momentum must lie in [0, 2pi)");
    }
}

// 2x2 half-momentum operator diag(e^{ik/2}, e^{-ik/2}) A.
Matrix2c half_momentum_operator(double k, const CoinParameters& coin) {
    const complexd phase = std::polar(1.0, k / 2.0);
    Matrix2c u;
    u(0, 0) = phase * coin.cos_beta();
    u(0, 1) = phase * coin.sin_beta();
    u(1, 0) = coin.sin_beta() / phase;
    u(1, 1) = -coin.cos_beta() / phase;
    return u;
}

Vector4c kron2(const Vector2c& a, const Vector2c& b) {
    return Vector4c(a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1));
}

double ipow(double base, int exponent) {
    double out = 1.0;
    for (int i = 0; i < exponent; ++i) {
        out *= base;
    }
    return out;
}

} // namespace

MomentumOperator momentum_operator(double k, const CoinParameters& coin) {
    require_momentum_range(k);
    MomentumOperator op;
    op.k = k;
    const Matrix2c u = half_momentum_operator(k, coin);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            op.matrix.block<2, 2>(2 * i, 2 * j) = u(i, j) * u;
        }
    }
    return op;
}

EigenSystem eigen_system(double k, const CoinParameters& coin) {
    require_momentum_range(k);
    const double cb = coin.cos_beta();
    const double sb = coin.sin_beta();
    const double sk = std::sin(k / 2.0);
    const double ck = std::cos(k / 2.0);
    const double radial = std::sqrt(1.0 - cb * cb * sk * sk);
    // The two branches stay separated by 2 * radial >= 2 sin(beta); if this
    // ever trips, the closed form itself has been broken.
    if (radial < 0.5 * sb) {
        throw std::logic_error("eigenvalue branches collapsed; closed form violated");
    }

    EigenSystem sys;
    sys.k = k;
    sys.lambda[0] = complexd(radial, cb * sk);
    sys.lambda[1] = complexd(-radial, cb * sk);

    const Matrix2c u = half_momentum_operator(k, coin);
    for (int i = 0; i < 2; ++i) {
        // (u01, lambda - u00) is never the zero vector: |lambda - u00| is
        // bounded below by radial - cb|ck| > 0 for the plus branch and by
        // radial for the minus branch, and |u01| = sin(beta) regardless.
        Vector2c vec(u(0, 1), sys.lambda[i] - u(0, 0));
        sys.v[i] = vec / vec.norm();
    }

    sys.branch_values[0] = sys.lambda[0] * sys.lambda[0];
    sys.branch_values[1] = sys.lambda[0] * sys.lambda[1];
    sys.branch_values[2] = sys.lambda[0] * sys.lambda[1];
    sys.branch_values[3] = sys.lambda[1] * sys.lambda[1];

    sys.branch_vectors[0] = kron2(sys.v[0], sys.v[0]);
    sys.branch_vectors[1] = kron2(sys.v[0], sys.v[1]);
    sys.branch_vectors[2] = kron2(sys.v[1], sys.v[0]);
    sys.branch_vectors[3] = kron2(sys.v[1], sys.v[1]);

    const double h1 = cb * ck / radial;
    sys.group_velocity = {h1, 0.0, 0.0, -h1};
    return sys;
}

std::array<double, 4> initial_overlap(const EigenSystem& system,
                                      const InitialCoinState& initial) {
    std::array<double, 4> w{};
    for (int j = 0; j < 4; ++j) {
        w[j] = std::norm(system.branch_vectors[j].dot(initial.components()));
    }
    return w;
}

double spectral_moment(const CoinParameters& coin, const InitialCoinState& initial,
                       int r, const QuadratureSpec& quad) {
    if (r < 0) {
        throw std::invalid_argument("moment order must be nonnegative");
    }
    auto integrand = [&](double k) {
        const EigenSystem sys = eigen_system(k, coin);
        const auto w = initial_overlap(sys, initial);
        if (r == 0) {
            return w[0] + w[1] + w[2] + w[3];
        }
        // The two flat branches have zero velocity and drop out for r >= 1.
        return ipow(sys.group_velocity[0], r) * w[0] +
               ipow(sys.group_velocity[3], r) * w[3];
    };
    // Integrate over [0, 2pi) staying inside the validated momentum range.
    const double upper = std::nextafter(2.0 * pi, 0.0);
    return integrate(integrand, 0.0, upper, quad) / (2.0 * pi);
}

double spectral_c00(const CoinParameters& coin, const InitialCoinState& initial,
                    const QuadratureSpec& quad) {
    auto integrand = [&](double k) {
        const auto w = initial_overlap(eigen_system(k, coin), initial);
        return w[1] + w[2];
    };
    const double upper = std::nextafter(2.0 * pi, 0.0);
    return integrate(integrand, 0.0, upper, quad) / (2.0 * pi);
}

Vector4c inverse_fourier_amplitude(const CoinParameters& coin,
                                   const InitialCoinState& initial, long t, long x,
                                   const QuadratureSpec& quad) {
    if (t < 0) {
        throw std::invalid_argument("step count must be nonnegative");
    }
    if (std::labs(x) > t) {
        return Vector4c::Zero();
    }
    if (t == 0) {
        return initial.components();
    }
    const double flat_power = (t % 2 == 0) ? 1.0 : -1.0;  // (-1)^t
    auto integrand = [&](double k) -> Vector4c {
        const EigenSystem sys = eigen_system(k, coin);
        const complexd rising = std::pow(sys.lambda[0], 2.0 * static_cast<double>(t));
        const complexd falling = std::pow(sys.lambda[1], 2.0 * static_cast<double>(t));
        const std::array<complexd, 4> powered = {rising, flat_power, flat_power,
                                                 falling};
        Vector4c value = Vector4c::Zero();
        for (int j = 0; j < 4; ++j) {
            const complexd weight =
                sys.branch_vectors[j].dot(initial.components());
            value += powered[j] * weight * sys.branch_vectors[j];
        }
        return std::polar(1.0, -static_cast<double>(x) * k) * value;
    };
    const double upper = std::nextafter(2.0 * pi, 0.0);
    return integrate(integrand, 0.0, upper, quad) / (2.0 * pi);
}

} // namespace qwalk
