#include "qwalk/limit_laws.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace qwalk {

namespace {

double re(const complexd& z) { return z.real(); }

// ac-part integrand after the substitution y = support * sin(theta):
//   f(y) dy = sin(b) (c0 + c1 y + c2 y^2) / (pi (1 - y^2)) dtheta,
// smooth on the closed interval [-pi/2, pi/2].
double substituted_density(const LimitDensity& d, double theta) {
    const double y = d.support * std::sin(theta);
    const double sb = std::sin(d.beta);
    return sb * (d.c0 + d.c1 * y + d.c2 * y * y) / (pi * (1.0 - y * y));
}

// Cumulative ac mass from the lower support edge to y, clamped outside.
double theta_of(const LimitDensity& d, double y) {
    const double ratio = y / d.support;
    if (ratio <= -1.0) {
        return -pi / 2.0;
    }
    if (ratio >= 1.0) {
        return pi / 2.0;
    }
    return std::asin(ratio);
}

double powi(double base, long exponent) {
    // Integer power with negative exponents; bases here are nonzero.
    if (exponent < 0) {
        return 1.0 / powi(base, -exponent);
    }
    double out = 1.0;
    double cur = base;
    while (exponent > 0) {
        if (exponent & 1) {
            out *= cur;
        }
        cur *= cur;
        exponent >>= 1;
    }
    return out;
}

} // namespace

LimitDensity limit_density(const CoinParameters& coin, const InitialCoinState& initial) {
    const complexd a1 = initial[0];
    const complexd a2 = initial[1];
    const complexd a3 = initial[2];
    const complexd a4 = initial[3];
    const double s = coin.sin_beta();
    const double tb = coin.tan_beta();

    const double n2 = std::norm(a2);
    const double n3 = std::norm(a3);
    const double r14 = re(a1 * std::conj(a4));
    const double r23 = re(a2 * std::conj(a3));
    const double cross_minus =
        re(a1 * std::conj(a2) + a1 * std::conj(a3) - a2 * std::conj(a4) -
           a3 * std::conj(a4));
    const double cross_plus =
        re(a1 * std::conj(a2) + a1 * std::conj(a3) + a2 * std::conj(a4) +
           a3 * std::conj(a4));
    const double root_gap = 1.0 / std::sqrt(s) - std::sqrt(s);

    LimitDensity d;
    d.beta = coin.beta();
    d.support = coin.cos_beta();
    d.c00 = s / 2.0 - (s - 1.0) * (n2 + n3) + tb * tb * root_gap * root_gap * r14 +
            (s - 1.0) * tb * cross_minus - s * r23;
    d.c2 = 0.5 - (n2 + n3) - r23 + (2.0 * tb * tb + 1.0) * r14 + tb * cross_minus;
    d.c1 = std::norm(a1) - std::norm(a4) + tb * cross_plus;
    d.c0 = 0.5 + r23 - r14;
    return d;
}

double density_at(const LimitDensity& d, double y) {
    if (std::abs(y) > d.support) {
        return 0.0;
    }
    const double sec2 = 1.0 / (d.support * d.support);
    const double radicand = 1.0 - y * y * sec2;
    if (radicand <= 0.0) {
        // Integrable edge singularity; flag rather than invent a value.
        return std::numeric_limits<double>::infinity();
    }
    const double tb = std::tan(d.beta);
    return tb * (d.c0 + d.c1 * y + d.c2 * y * y) /
           (pi * (1.0 - y * y) * std::sqrt(radicand));
}

double limit_cdf(const LimitDensity& d, double y, const QuadratureSpec& quad) {
    const double atom = (y >= 0.0) ? d.c00 : 0.0;
    auto f = [&](double theta) { return substituted_density(d, theta); };
    return atom + integrate(f, -pi / 2.0, theta_of(d, y), quad);
}

double limit_cdf_left(const LimitDensity& d, double y, const QuadratureSpec& quad) {
    const double atom = (y > 0.0) ? d.c00 : 0.0;
    auto f = [&](double theta) { return substituted_density(d, theta); };
    return atom + integrate(f, -pi / 2.0, theta_of(d, y), quad);
}

std::vector<double> limit_cdf_batch(const LimitDensity& d,
                                    const std::vector<double>& ys, bool left_limits,
                                    const QuadratureSpec& quad) {
    std::vector<double> thetas;
    thetas.reserve(ys.size());
    for (double y : ys) {
        thetas.push_back(theta_of(d, y));
    }
    auto f = [&](double theta) { return substituted_density(d, theta); };
    std::vector<double> out = integrate_cumulative(f, -pi / 2.0, thetas, quad);
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const bool atom_counted = left_limits ? (ys[i] > 0.0) : (ys[i] >= 0.0);
        if (atom_counted) {
            out[i] += d.c00;
        }
    }
    return out;
}

double density_moment(const LimitDensity& d, int r, const QuadratureSpec& quad) {
    if (r < 0) {
        throw std::invalid_argument("moment order must be nonnegative");
    }
    auto f = [&](double theta) {
        const double y = d.support * std::sin(theta);
        return powi(y, r) * substituted_density(d, theta);
    };
    const double ac_part = integrate(f, -pi / 2.0, pi / 2.0, quad);
    return ac_part + (r == 0 ? d.c00 : 0.0);
}

StationaryLaw stationary_law(const CoinParameters& coin, const InitialCoinState& initial) {
    const complexd a1 = initial[0];
    const complexd a2 = initial[1];
    const complexd a3 = initial[2];
    const complexd a4 = initial[3];
    const double s = coin.sin_beta();
    const double tb = coin.tan_beta();
    const double sc = coin.sec_beta();

    const double n1 = std::norm(a1);
    const double n2 = std::norm(a2);
    const double n3 = std::norm(a3);
    const double n4 = std::norm(a4);
    const double r23 = re(a2 * std::conj(a3));
    const double r1_23 = re(a1 * std::conj(a2) + a1 * std::conj(a3));
    const double r23_4 = re(a2 * std::conj(a4) + a3 * std::conj(a4));
    const double r14_23 = re(a1 * std::conj(a4) + a2 * std::conj(a3));

    StationaryLaw law;
    law.p0 = tb * tb * sc * sc * (1.0 - s) * (1.0 - s) * (n1 + n4) +
             sc * sc * (1.0 - s) * (n2 + n3) +
             tb * sc * sc * (1.0 - s) * (1.0 - s) * (r23_4 - r1_23) -
             2.0 * tb * sc * (1.0 - s) * r23;
    law.j_plus = tb * tb *
                 (sc * sc * (1.0 + s) * (1.0 + s) * n1 + n2 + n3 +
                  sc * sc * (1.0 - s) * (1.0 - s) * n4 -
                  2.0 * sc * (1.0 + s) * r1_23 + 2.0 * r14_23 -
                  2.0 * sc * (1.0 - s) * r23_4);
    law.j_minus = tb * tb *
                  (sc * sc * (1.0 - s) * (1.0 - s) * n1 + n2 + n3 +
                   sc * sc * (1.0 + s) * (1.0 + s) * n4 +
                   2.0 * sc * (1.0 - s) * r1_23 + 2.0 * r14_23 +
                   2.0 * sc * (1.0 + s) * r23_4);
    law.ratio = (1.0 - s) * (1.0 - s) * (1.0 - s) * (1.0 - s) * sc * sc * sc * sc;
    return law;
}

double stationary_probability(const StationaryLaw& law, long x) {
    if (x == 0) {
        return law.p0;
    }
    const double prefactor = (x > 0) ? law.j_plus : law.j_minus;
    return prefactor * powi(law.ratio, std::labs(x));
}

StationaryAmplitudes stationary_amplitudes(const CoinParameters& coin,
                                           const InitialCoinState& initial) {
    const complexd a1 = initial[0];
    const complexd a2 = initial[1];
    const complexd a3 = initial[2];
    const complexd a4 = initial[3];
    const double s = coin.sin_beta();
    const double sc = coin.sec_beta();
    const double tb = coin.tan_beta();
    const double tb2 = tb * tb;
    const double tb3 = tb2 * tb;
    const double tb4 = tb2 * tb2;

    StationaryAmplitudes amp;
    amp.z1 = -(1.0 - s) * (1.0 - s) * sc * sc;
    amp.z2 = -(1.0 + s) * (1.0 + s) * sc * sc;
    amp.b = {
        -(a2 + a3) * tb + 2.0 * a1 * tb2,
        (a1 + a4) * tb - 2.0 * (a2 + a3) * tb2 + 4.0 * a1 * tb3,
        (a1 + a4) * tb - 2.0 * (a2 + a3) * tb2 + 4.0 * a1 * tb3,
        -(a2 + a3) * tb + (4.0 * a1 + 2.0 * a4) * tb2 - 4.0 * (a2 + a3) * tb3 +
            8.0 * a1 * tb4,
    };
    amp.c = {
        -(a2 + a3) * tb - 2.0 * a4 * tb2,
        (a1 + a4) * tb,
        (a1 + a4) * tb,
        -(a2 + a3) * tb + 2.0 * a1 * tb2,
    };
    amp.extra = {
        complexd(0.0),
        a2 - a1 * tb,
        a3 - a1 * tb,
        (a2 + a3) * tb - 2.0 * a1 * tb2,
    };
    return amp;
}

Vector4c stationary_wave(const StationaryAmplitudes& amp, long x) {
    const double dz = amp.z1 - amp.z2;
    Vector4c out;
    if (x == 0) {
        for (int i = 0; i < 4; ++i) {
            out(i) = amp.extra[i] + (amp.c[i] * amp.z1 + amp.b[i]) / dz;
        }
        return out;
    }
    const double z = (x >= 1) ? amp.z2 : amp.z1;
    const double scale = powi(z, x >= 1 ? x + 1 : -(x + 1));
    for (int i = 0; i < 4; ++i) {
        const complexd numerator = amp.b[i] * z + amp.c[i];
        out(i) = (x >= 1) ? numerator / (dz * scale) : numerator * scale / dz;
    }
    return out;
}

} // namespace qwalk
