#include "qwalk/types.hpp"

#include <cmath>
#include <stdexcept>

namespace qwalk {

CoinParameters::CoinParameters(double beta)
    : beta_(beta), cos_(std::cos(beta)), sin_(std::sin(beta)) {}

CoinParameters CoinParameters::from_angle(double beta) {
    if (!(beta > 0.0 && beta < pi / 2.0)) {
        throw std::domain_error("coin angle must lie strictly inside (0, pi/2)");
    }
    return CoinParameters(beta);
}

Matrix2c CoinParameters::single_coin() const {
    Matrix2c a;
    a << cos_, sin_,
         sin_, -cos_;
    return a;
}

InitialCoinState InitialCoinState::from_components(const Vector4c& alpha) {
    const double norm = alpha.norm();
    if (std::abs(norm - 1.0) > 1e-12) {
        throw std::invalid_argument("initial coin state must have unit norm");
    }
    return InitialCoinState(alpha);
}

InitialCoinState InitialCoinState::normalized(const Vector4c& alpha) {
    const double norm = alpha.norm();
    if (norm < 1e-12) {
        throw std::invalid_argument("initial coin state is numerically zero");
    }
    return InitialCoinState(alpha / norm);
}

InitialCoinState InitialCoinState::bell() {
    const double h = std::sqrt(2.0) / 2.0;
    return InitialCoinState(Vector4c(h, 0.0, 0.0, h));
}

InitialCoinState InitialCoinState::nonlocalizing() {
    return InitialCoinState(Vector4c(-0.5, -0.5, -0.5, 0.5));
}

} // namespace qwalk
