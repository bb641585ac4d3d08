#pragma once
// Closed forms for the two long-time laws of the walk: the weak-limit
// velocity density (point mass at 0 plus an absolutely continuous part on
// (-cos b, cos b)) and the stationary position law (geometric tails around
// the origin). Both are evaluated twice, once from the coefficient formulas
// and once through the stationary-phase amplitude constants, and the two
// paths are required to agree.

#include <array>

#include "qwalk/quadrature.hpp"
#include "qwalk/types.hpp"

namespace qwalk {

// Weak-limit density f(y) = c00 delta_0(y) + ac(y) with
//   ac(y) = tan(b) (c0 + c1 y + c2 y^2) / (pi (1 - y^2) sqrt(1 - y^2 sec^2 b))
// supported on |y| < support = cos(b). The point mass is carried
// symbolically in c00, never as a numerical spike.
struct LimitDensity {
    double beta = 0.0;
    double c00 = 0.0;
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double support = 0.0;  // cos(beta)
};

LimitDensity limit_density(const CoinParameters& coin, const InitialCoinState& initial);

// Absolutely continuous part only; zero outside the open support, +infinity
// at |y| = support where the integrable singularity sits.
double density_at(const LimitDensity& d, double y);

// F(y) = c00 H(y) + integral of the ac part up to y, computed under the
// substitution y = support * sin(theta) which removes the edge singularity.
// Right-continuous; limit_cdf_left gives the left limit (differs only at 0).
double limit_cdf(const LimitDensity& d, double y, const QuadratureSpec& quad);
double limit_cdf_left(const LimitDensity& d, double y, const QuadratureSpec& quad);

// CDF values at many ascending points in one sweep. When left_limits is true
// each entry is F(y-), otherwise F(y).
std::vector<double> limit_cdf_batch(const LimitDensity& d,
                                    const std::vector<double>& ys, bool left_limits,
                                    const QuadratureSpec& quad);

// r-th moment of the full law (atom contributes only to r = 0).
double density_moment(const LimitDensity& d, int r, const QuadratureSpec& quad);

// Stationary position law: p(0) = p0 and p(x) = J r^|x| with J = j_plus for
// x >= 1, j_minus for x <= -1, ratio r = (1 - sin b)^4 sec^4 b.
struct StationaryLaw {
    double p0 = 0.0;
    double j_plus = 0.0;
    double j_minus = 0.0;
    double ratio = 0.0;
};

StationaryLaw stationary_law(const CoinParameters& coin, const InitialCoinState& initial);

double stationary_probability(const StationaryLaw& law, long x);

// Constants of the stationary-phase amplitude representation. The limit
// amplitude at site x is assembled from the two real poles z1 z2 = 1:
//   x = 0:    extra_i + (c_i z1 + b_i) / (z1 - z2)
//   x >= 1:   (b_i z2 + c_i) / ((z1 - z2) z2^{x+1})
//   x <= -1:  (b_i z1 + c_i) / ((z1 - z2) z1^{x+1})
struct StationaryAmplitudes {
    std::array<complexd, 4> b{};
    std::array<complexd, 4> c{};
    std::array<complexd, 4> extra{};  // additive origin-only terms
    double z1 = 0.0;
    double z2 = 0.0;
};

StationaryAmplitudes stationary_amplitudes(const CoinParameters& coin,
                                           const InitialCoinState& initial);

// Limit amplitude vector at site x; its squared norm reproduces the
// stationary law.
Vector4c stationary_wave(const StationaryAmplitudes& amp, long x);

} // namespace qwalk
