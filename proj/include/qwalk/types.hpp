#pragma once
// Shared value types for the two-entangled-coin walk on the integer line:
// the coin angle and the four-component initial coin state.

#include <complex>
#include <Eigen/Dense>

namespace qwalk {

using complexd = std::complex<double>;
using Vector2c = Eigen::Vector2cd;
using Vector4c = Eigen::Vector4cd;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

inline constexpr double pi = 3.141592653589793238462643383279502884;

// Coin angle beta, strictly inside (0, pi/2). The one-qubit coin is
//   A = [ cos b  sin b ]
//       [ sin b -cos b ]
// (real symmetric, det A = -1); the walk coin is A (x) A.
class CoinParameters {
public:
    // Throws std::domain_error at or outside the open interval endpoints.
    static CoinParameters from_angle(double beta);

    double beta() const { return beta_; }
    double cos_beta() const { return cos_; }
    double sin_beta() const { return sin_; }
    double tan_beta() const { return sin_ / cos_; }
    double sec_beta() const { return 1.0 / cos_; }

    Matrix2c single_coin() const;

    // arg det A; always pi for this family.
    double det_phase() const { return pi; }

private:
    explicit CoinParameters(double beta);
    double beta_;
    double cos_;
    double sin_;
};

// Unit four-vector of coin amplitudes (basis order 00, 01, 10, 11).
class InitialCoinState {
public:
    // Requires ||alpha|| = 1 within 1e-12; throws std::invalid_argument.
    static InitialCoinState from_components(const Vector4c& alpha);
    // Rescales to unit norm; rejects vectors with norm below 1e-12.
    static InitialCoinState normalized(const Vector4c& alpha);

    // (sqrt2/2, 0, 0, sqrt2/2): maximally entangled, localizing.
    static InitialCoinState bell();
    // (-1/2, -1/2, -1/2, 1/2): the state whose point mass vanishes.
    static InitialCoinState nonlocalizing();

    const Vector4c& components() const { return alpha_; }
    complexd operator[](int i) const { return alpha_(i); }

private:
    explicit InitialCoinState(Vector4c alpha) : alpha_(std::move(alpha)) {}
    Vector4c alpha_;
};

} // namespace qwalk
