#pragma once
// Composite Gauss-Legendre quadrature with panel-count doubling. All the
// momentum and density integrals in this project go through here so that a
// single convergence policy (successive halvings agree to tolerance) applies
// everywhere.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qwalk/types.hpp"

namespace qwalk {

struct QuadratureSpec {
    double tolerance = 1e-9;  // stop when successive estimates agree to this
    int order = 16;           // Gauss-Legendre points per panel
    int max_panels = 4096;    // doubling cap before giving up
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double value, double estimate)
        : std::runtime_error(what), last_value(value), error_estimate(estimate) {}
    double last_value;
    double error_estimate;
};

// Nodes/weights on [-1, 1] for the given order; cached, thread-safe.
const std::vector<double>& gl_nodes(int order);
const std::vector<double>& gl_weights(int order);

namespace detail {

template <class V>
struct quad_traits;

template <>
struct quad_traits<double> {
    static double zero() { return 0.0; }
    static double diff(double a, double b) { return std::abs(a - b); }
    static double magnitude(double a) { return std::abs(a); }
};

template <>
struct quad_traits<Vector4c> {
    static Vector4c zero() { return Vector4c::Zero(); }
    static double diff(const Vector4c& a, const Vector4c& b) {
        return (a - b).cwiseAbs().maxCoeff();
    }
    static double magnitude(const Vector4c& a) { return a.cwiseAbs().maxCoeff(); }
};

} // namespace detail

// Integrates f over [a, b]. Starts from one panel of `order` points and
// doubles the panel count until two successive estimates agree to
// tolerance * max(1, |result|). Throws QuadratureError at the panel cap.
template <class F>
auto integrate(F&& f, double a, double b, const QuadratureSpec& spec) {
    using V = std::decay_t<decltype(f(a))>;
    using T = detail::quad_traits<V>;
    if (a == b) {
        return T::zero();
    }
    const auto& nodes = gl_nodes(spec.order);
    const auto& weights = gl_weights(spec.order);
    auto estimate = [&](int panels) {
        V acc = T::zero();
        const double width = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = a + (p + 0.5) * width;
            const double half = width / 2.0;
            V local = T::zero();
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                local += weights[i] * f(mid + half * nodes[i]);
            }
            acc += half * local;
        }
        return acc;
    };
    V previous = estimate(1);
    for (int panels = 2; panels <= spec.max_panels; panels *= 2) {
        V current = estimate(panels);
        const double change = T::diff(current, previous);
        if (change <= spec.tolerance * std::max(1.0, T::magnitude(current))) {
            return current;
        }
        previous = current;
    }
    throw QuadratureError("quadrature did not converge within the panel cap",
                          T::magnitude(previous), spec.tolerance);
}

// Cumulative integrals of f from `a` to each of `points` (ascending; repeated
// values allowed). One sweep over the segments, reusing each partial sum.
template <class F>
std::vector<double> integrate_cumulative(F&& f, double a,
                                         const std::vector<double>& points,
                                         const QuadratureSpec& spec) {
    std::vector<double> out;
    out.reserve(points.size());
    double running = 0.0;
    double previous = a;
    for (double p : points) {
        if (p < previous) {
            throw std::invalid_argument("cumulative quadrature points must ascend");
        }
        running += integrate(f, previous, p, spec);
        previous = p;
        out.push_back(running);
    }
    return out;
}

} // namespace qwalk
