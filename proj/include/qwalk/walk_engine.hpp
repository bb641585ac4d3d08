#pragma once
// Direct-space evolution of the four-state walk: coin A(x)A on the internal
// space, then the three-direction shift (component 00 moves +1, components
// 01 and 10 stay, component 11 moves -1).

#include <vector>

#include "qwalk/types.hpp"

namespace qwalk {

// Dense window of coin amplitudes. Slot i holds site offset + i; the window
// is exactly [-t, t] after t steps, so amplitudes outside it are exactly zero.
struct WalkState {
    long t = 0;
    long offset = 0;
    std::vector<Vector4c> amplitudes;

    long min_site() const { return offset; }
    long max_site() const { return offset + static_cast<long>(amplitudes.size()) - 1; }
    // Zero vector outside the stored window.
    Vector4c at(long x) const;
    double norm_squared() const;
};

// Per-site probabilities p_t(x) = ||psi_t(x)||^2 over the same window.
struct PositionDistribution {
    long t = 0;
    long offset = 0;
    std::vector<double> p;

    long min_site() const { return offset; }
    long max_site() const { return offset + static_cast<long>(p.size()) - 1; }
    double at(long x) const;
    double total() const;
};

// The four-dimensional coin A(beta) (x) A(beta).
Matrix4c build_coin_operator(const CoinParameters& coin);

// State at t = 0: the initial coin vector sitting on the origin.
WalkState initial_state(const InitialCoinState& initial);

// One step: coin first, then shift. Grows the window one site on each side.
void step(WalkState& state, const Matrix4c& coin);

// Runs t steps from the origin state. t >= 0.
WalkState evolve(const CoinParameters& coin, const InitialCoinState& initial, long t);

PositionDistribution position_distribution(const WalkState& state);

// Sum over x of x^r p(x); r = 0 recovers the total mass.
double empirical_moment(const PositionDistribution& dist, int r);

} // namespace qwalk
