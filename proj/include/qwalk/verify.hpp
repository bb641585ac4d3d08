#pragma once
// Cross-validation harness: exact simulation against the closed-form laws.
// Produces machine-checkable reports (name, parameters, measured value,
// bound, pass flag) so the CLI and the tests share one source of truth.

#include <cstdint>
#include <string>
#include <vector>

#include "qwalk/limit_laws.hpp"
#include "qwalk/quadrature.hpp"
#include "qwalk/types.hpp"
#include "qwalk/walk_engine.hpp"

namespace qwalk {

struct CheckResult {
    std::string name;    // check family
    std::string params;  // parameter dump for reproduction
    double measured = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct SuiteReport {
    std::vector<CheckResult> checks;
    bool all_pass() const;
    // Parameter dump of the first failing check, empty when everything passed.
    std::string first_failure() const;
};

// Trace of the approach to the long-time laws along a logarithmic schedule.
struct ConvergenceReport {
    std::vector<long> t_values;
    std::vector<double> ks_distances;  // sup-distance against the limit CDF
    std::vector<double> ks_adjusted;   // same, against the finite-t reference
    std::vector<double> p0_trace;      // p_t(0) along the schedule
    double p0_limit = 0.0;             // closed-form stationary value
    double decay_fit = 0.0;            // log-slope over the stationary window
    double decay_fit_unfiltered = 0.0; // log-slope over x in [1, 8] regardless
    long decay_window = 0;             // last x the stationarity filter kept
    double decay_reference = 0.0;      // log of the closed-form ratio
    double parity_gap = 0.0;           // max |p_t(x) - p_{t+1}(x)|, |x| <= 5
};

// Sup over the empirical breakpoints y = x/t of |F_empirical - F_limit|,
// taking both one-sided limits at every breakpoint so the atom at 0 is
// compared from both sides. Note: when the law localizes, this statistic
// does not vanish as t grows; it converges to the one-sided stationary tail
// mass, because the limit CDF lumps at y = 0 mass that the walk keeps at
// fixed positions x > 0 (breakpoints y = x/t > 0). Use adjusted_ks_distance
// for a diagnostic that does decay.
double ks_distance(const PositionDistribution& dist, const LimitDensity& d,
                   const QuadratureSpec& quad);

// Same sup, but the reference CDF keeps the stationary mass at its finite-t
// breakpoints (ac part plus stationary partial sums over |x| <= 64) instead
// of lumping it at 0. Decays with t for localizing and non-localizing laws
// alike.
double adjusted_ks_distance(const PositionDistribution& dist, const LimitDensity& d,
                            const StationaryLaw& law, const QuadratureSpec& quad);

// Evolves to t_max + 1, recording p_t(0) and the sup-distances at
// {t_max/8, t_max/4, t_max/2, t_max}, then fits the tail decay of the final
// distribution and measures the parity gap from the last two steps. The
// decay fit runs over x in [1, m] where m <= 8 is chosen by a stationarity
// filter: the window grows while the local log-ratio stays within 10% of the
// first one (and p > 1e-12); the unfiltered [1, 8] slope is reported too.
// Requires t_max >= 100.
ConvergenceReport localization_check(const CoinParameters& coin,
                                     const InitialCoinState& initial, long t_max);

// Identity suite over pinned cases plus `samples` random draws (beta uniform
// in [0.1, pi/2 - 0.1], alpha uniform on the complex unit 3-sphere, each draw
// seeded deterministically from `seed` and its index). samples = 0 runs the
// pinned cases alone. jobs = 0 means one worker per hardware thread.
SuiteReport theorem_consistency_suite(long samples, std::uint64_t seed, int jobs = 0);

// Everything: the consistency suite, the two pinned convergence runs, the
// simulation-vs-spectral oracle comparison, and the sup-distance regression
// checks. This is what the CLI's verify command executes.
SuiteReport full_verification(long samples, std::uint64_t seed, int jobs = 0);

} // namespace qwalk
