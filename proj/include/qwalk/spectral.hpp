#pragma once
// Momentum-space picture. The dual one-step operator at momentum k factors
// into a Kronecker square of the half-momentum 2x2 operator
//   U(k/2) = diag(e^{ik/2}, e^{-ik/2}) A(beta),
// whose eigenvalues are lambda = +-R + i cos(beta) sin(k/2) with
// R = sqrt(1 - cos^2(beta) sin^2(k/2)) >= sin(beta) > 0. Everything here is
// built from that closed form; the four-dimensional branches are the pairwise
// products of the two one-qubit branches.

#include <array>

#include "qwalk/quadrature.hpp"
#include "qwalk/types.hpp"

namespace qwalk {

// Dual-space one-step operator at momentum k in [0, 2pi).
struct MomentumOperator {
    double k = 0.0;
    Matrix4c matrix;
};

MomentumOperator momentum_operator(double k, const CoinParameters& coin);

// Full spectral data at one momentum. lambda[0] is the branch with positive
// real part. The four product branches are ordered 11, 12, 21, 22 so that
// Lambda[1] = Lambda[2] = lambda1 * lambda2 = -1 are the flat branches.
struct EigenSystem {
    double k = 0.0;
    std::array<complexd, 2> lambda;          // one-qubit eigenvalues
    std::array<Vector2c, 2> v;               // one-qubit eigenvectors (unit)
    std::array<complexd, 4> branch_values;   // products lambda_i lambda_j
    std::array<Vector4c, 4> branch_vectors;  // Kronecker pairs v_i (x) v_j
    std::array<double, 4> group_velocity;    // phase derivatives; middle two vanish
};

EigenSystem eigen_system(double k, const CoinParameters& coin);

// Squared overlaps |<V_j(k), alpha>|^2; sums to 1 at every k.
std::array<double, 4> initial_overlap(const EigenSystem& system,
                                      const InitialCoinState& initial);

// Integral over k of sum_j h_j(k)^r |<V_j, alpha>|^2 / 2pi: the r-th moment of
// the limiting velocity distribution. r = 0 recovers total mass 1.
double spectral_moment(const CoinParameters& coin, const InitialCoinState& initial,
                       int r, const QuadratureSpec& quad);

// Integral over k of the two flat-branch overlaps / 2pi: the point mass the
// walk leaves at the origin in the weak limit.
double spectral_c00(const CoinParameters& coin, const InitialCoinState& initial,
                    const QuadratureSpec& quad);

// Amplitude at site x after t steps, reconstructed by integrating the
// spectral representation over momentum. Agrees with direct evolution; zero
// for |x| > t.
Vector4c inverse_fourier_amplitude(const CoinParameters& coin,
                                   const InitialCoinState& initial, long t, long x,
                                   const QuadratureSpec& quad);

} // namespace qwalk
