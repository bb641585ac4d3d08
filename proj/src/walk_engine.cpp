#include "qwalk/walk_engine.hpp"

#include <cmath>
#include <stdexcept>

namespace qwalk {

Vector4c WalkState::at(long x) const {
    if (x < min_site() || x > max_site()) {
        return Vector4c::Zero();
    }
    return amplitudes[static_cast<std::size_t>(x - offset)];
}

double WalkState::norm_squared() const {
    double total = 0.0;
    for (const auto& a : amplitudes) {
        total += a.squaredNorm();
    }
    return total;
}

double PositionDistribution::at(long x) const {
    if (x < min_site() || x > max_site()) {
        return 0.0;
    }
    return p[static_cast<std::size_t>(x - offset)];
}

double PositionDistribution::total() const {
    double total = 0.0;
    for (double v : p) {
        total += v;
    }
    return total;
}

Matrix4c build_coin_operator(const CoinParameters& coin) {
    const Matrix2c a = coin.single_coin();
    Matrix4c out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * a;
        }
    }
    return out;
}

WalkState initial_state(const InitialCoinState& initial) {
    WalkState state;
    state.t = 0;
    state.offset = 0;
    state.amplitudes.assign(1, initial.components());
    return state;
}

void step(WalkState& state, const Matrix4c& coin) {
    const std::size_t n = state.amplitudes.size();
    std::vector<Vector4c> next(n + 2, Vector4c::Zero());
    for (std::size_t i = 0; i < n; ++i) {
        const Vector4c b = coin * state.amplitudes[i];
        next[i + 2](0) += b(0);  // 00 moves right
        next[i + 1](1) += b(1);  // 01 stays
        next[i + 1](2) += b(2);  // 10 stays
        next[i](3) += b(3);      // 11 moves left
    }
    state.amplitudes = std::move(next);
    state.offset -= 1;
    state.t += 1;
}

WalkState evolve(const CoinParameters& coin, const InitialCoinState& initial, long t) {
    if (t < 0) {
        throw std::invalid_argument("step count must be nonnegative");
    }
    const Matrix4c c = build_coin_operator(coin);
    WalkState state = initial_state(initial);
    for (long s = 0; s < t; ++s) {
        step(state, c);
    }
    return state;
}

PositionDistribution position_distribution(const WalkState& state) {
    PositionDistribution dist;
    dist.t = state.t;
    dist.offset = state.offset;
    dist.p.resize(state.amplitudes.size());
    for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
        dist.p[i] = state.amplitudes[i].squaredNorm();
    }
    return dist;
}

double empirical_moment(const PositionDistribution& dist, int r) {
    if (r < 0) {
        throw std::invalid_argument("moment order must be nonnegative");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < dist.p.size(); ++i) {
        const double x = static_cast<double>(dist.offset + static_cast<long>(i));
        total += std::pow(x, r) * dist.p[i];
    }
    return total;
}

} // namespace qwalk
