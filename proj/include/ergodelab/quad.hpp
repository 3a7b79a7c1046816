#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ergodelab {

inline constexpr double default_tolerance = 1e-8;
inline constexpr int panel_budget = 10000;
inline constexpr double inf = std::numeric_limits<double>::infinity();

using Integrand = std::function<double(double)>;

struct Interval {
    double lower = 0.0;
    double upper = inf;
};

// Integrable endpoint behaviour the integrator should remove analytically.
//
//   singularity: f ~ (s - lower)^{-p} near the lower endpoint, p < 1
//   tail:        f ~ s^{-1-q} as s -> infinity, q > 0
//
// Hints are advisory; a wrong-but-legal hint costs subdivisions, not
// correctness.  An infinite upper limit requires a tail hint.
struct EndpointHint {
    std::optional<double> singularity;
    std::optional<double> tail;

    static EndpointHint none() { return {}; }
    static EndpointHint lower(double p) { return {p, std::nullopt}; }
    static EndpointHint upper(double q) { return {std::nullopt, q}; }
    static EndpointHint both(double p, double q) { return {p, q}; }
};

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
    int subdivisions = 0;
};

// Adaptive Gauss-Kronrod 15 over a possibly half-infinite interval.
// Stops when the summed error estimate drops below max(tol, tol*|value|);
// throws NonConvergent once the panel budget is spent or a panel can no
// longer be split.  Refinement order is deterministic: the panel with the
// largest error estimate is split first, ties resolved toward the earlier
// piece and then the smaller left edge.
QuadResult integrate(const Integrand& f, Interval iv,
                     EndpointHint hint = EndpointHint::none(),
                     double tol = default_tolerance);

enum class Verdict { converges, diverges, inconclusive };

std::string to_string(Verdict v);

struct ClassifyOptions {
    double converge_ratio = 0.9;   // increment ratios at or below this settle
    double diverge_ratio = 0.97;   // increment ratios at or above this grow
    int confirmations = 3;         // consecutive ratios required either way
    double floor_scale = 1e-12;    // noise floor relative to max(1, max |v|)
};

struct SequenceProbe {
    Verdict verdict = Verdict::inconclusive;
    std::optional<double> limit;   // present only when verdict == converges
    std::vector<double> values;
    std::vector<double> increments;
};

// Decides whether a monotone-index sequence of partial values settles.
// Trailing increments at the noise floor give an exact limit (last value);
// geometrically shrinking increments give a ratio-extrapolated limit, exact
// for geometric sequences.  Ratios stuck near 1 read as divergence.  The
// band between the two thresholds stays Inconclusive on purpose.
SequenceProbe classify_values(std::span<const double> values,
                              ClassifyOptions opt = {});

// Same decision applied to a sequence of block increments (classifies the
// partial sums of the given increments).
SequenceProbe classify_increments(std::span<const double> increments,
                                  ClassifyOptions opt = {});

// Evaluates fn along a strictly decreasing positive schedule (a limit probe
// toward zero) and classifies the resulting values.  Schedules shorter than
// six points are rejected.
SequenceProbe probe_limit(const std::function<double(double)>& fn,
                          std::span<const double> schedule,
                          ClassifyOptions opt = {});

// first, first*ratio, first*ratio^2, ... (count terms)
std::vector<double> geometric_schedule(double first, double ratio, int count);

// Convergence certificate for integrals whose integrand, written in the
// variable ell = log of the original one, decays too slowly for any fixed
// truncation to witness.  Integrates log_integrand over dyadic ell-blocks
// [L_j, 2 L_j) from L_0 = max(log_start, 1) and classifies the partial sums.
// A 1/ell integrand produces constant blocks (divergence); 1/ell^2 produces
// geometric blocks (convergence); 1/(ell log ell) produces blocks shrinking
// like 1/j, whose ratios sit above the divergence threshold by block 60.
SequenceProbe classify_slow_tail(const Integrand& log_integrand,
                                 double log_start, int blocks = 64,
                                 double tol = default_tolerance);

} // namespace ergodelab
