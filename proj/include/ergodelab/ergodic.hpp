#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ergodelab/models.hpp"
#include "ergodelab/stieltjes.hpp"

namespace ergodelab {

// t = 2^k for k = 0..20, the default probe grid for rate and sup statements.
std::vector<double> default_time_grid();

// Decides whether a running-sup sequence has levelled off: the final sup must
// exceed the sup five entries earlier by less than five percent.  Short
// sequences and identically zero sequences count as settled.
bool running_sup_settled(std::span<const double> values);

// ---------------------------------------------------------------------------
// Direct statement: membership buys a decay rate for the averages.
// ---------------------------------------------------------------------------

struct RateRow {
    double t = 0.0;
    double cesaro_norm = 0.0;
    double bound = 0.0;  // 4 ||g(A)u|| / g(1/t)
    double ratio = 0.0;  // cesaro_norm / bound, 0 when the bound is 0
};

struct RateReport {
    std::vector<RateRow> rows;
    double domain_norm = 0.0;  // ||g(A)u||
    double max_ratio = 0.0;
    double worst_t = 0.0;
    bool holds = false;  // every row obeys cesaro_norm <= bound + tol
};

// Checks ||C_t u|| <= 4 ||g(A)u|| / g(1/t) over the grid.  The element must
// be in dom(g(A)) (PreconditionFailed otherwise); the zero element passes
// with all-zero rows.
RateReport direct_rate_check(const L1MultiplicationModel& model,
                             const StieltjesFunction& g, const L1Element& u,
                             std::span<const double> t_grid,
                             double tol = default_tolerance);

// ---------------------------------------------------------------------------
// Inverse statements: integral conditions on the averages force membership.
// ---------------------------------------------------------------------------

struct IntegralDiagnostic {
    Verdict verdict = Verdict::inconclusive;
    std::optional<double> value;    // extrapolated limit when it converges
    std::vector<double> schedule;   // truncation points 10^(2^k)
    std::vector<double> partials;
    Membership membership = Membership::inconclusive;
    bool consistent = false;  // verdict and membership never contradict
};

// integral over t >= 1 of |g'(1/t)| ||C_t u|| / t^2.
IntegralDiagnostic inverse_integral_derivative(const L1MultiplicationModel& model,
                                               const StieltjesFunction& g,
                                               const L1Element& u,
                                               double tol = default_tolerance);

// integral over t >= 1 of g(1/t) ||C_t u|| / t.
IntegralDiagnostic inverse_integral_value(const L1MultiplicationModel& model,
                                          const StieltjesFunction& g,
                                          const L1Element& u,
                                          double tol = default_tolerance);

// Partial integrals of weight(t) * norm(t) over the same doubly exponential
// schedule, for callers that assemble the weight from closed forms.  The
// weight and norm must accept every t in [1, 10^(2^max_k)].
IntegralDiagnostic inverse_integral_from_callables(const Integrand& weight,
                                                   const Integrand& norm,
                                                   int max_k = 6,
                                                   double tol = default_tolerance);

// ---------------------------------------------------------------------------
// Sharpened sup condition: a logarithmic factor on top of the direct rate.
// ---------------------------------------------------------------------------

struct SupReport {
    double alpha = 0.875;
    std::vector<double> t;
    std::vector<double> product;  // ||C_t u|| g(1/t) log^(1+alpha)(2 + g(1/t))
    double norm_product_sup = 0.0;
    bool bounded = false;  // running sup settled over the grid
    Membership membership = Membership::inconclusive;
    bool consistent = false;  // bounded product never meets NotMember
};

// A bounded product certifies membership; the plain product without the extra
// log power does not (see counterexample_build).
SupReport logpower_rate_test(const L1MultiplicationModel& model,
                             const StieltjesFunction& g, const L1Element& u,
                             double alpha = 0.875, double tol = default_tolerance);

// ---------------------------------------------------------------------------
// Truncated-measure probe: convergence of the cut-off resolvent integrals.
// ---------------------------------------------------------------------------

struct HirschReport {
    Verdict verdict = Verdict::inconclusive;
    std::vector<double> deltas;       // cut levels 2^-k, k = 1..20
    std::vector<double> differences;  // consecutive truncation gaps
    std::vector<double> partials;     // summed gaps (total variation so far)
    Membership membership = Membership::inconclusive;
    bool consistent = false;
};

// J(delta)u integrates the resolvent against the measure above the cut; since
// all terms are positive the gap between consecutive cuts has the exact norm
//   integral |u(s)| [ integral over (d', d] of s/(1 + r s) d mu(r) ] ds,
// and J converges along the cuts exactly when the summed gaps do.
HirschReport hirsch_probe(const L1MultiplicationModel& model,
                          const StieltjesFunction& g, const L1Element& u,
                          double tol = default_tolerance);

// ---------------------------------------------------------------------------
// Upgraded domains: composing with an admissible Bernstein factor.
// ---------------------------------------------------------------------------

struct ExtraDomainReport {
    double q_tail = 0.0;     // integral over tau >= 1 of q(tau)/tau^2
    double q_at_zero = 0.0;  // limit of q along 2^-k
    std::vector<double> t;
    std::vector<double> product;  // ||C_t u|| g(1/t)
    bool decay_certified = false;
    Membership composed_membership = Membership::inconclusive;
    bool holds = false;  // certified decay never meets a NotMember composition
};

// q must vanish at 0 and satisfy the tail condition above (PreconditionFailed
// otherwise).  A certified O(1/g(1/t)) decay of the averages then places u in
// the domain of the composed function (q o g)(A).
ExtraDomainReport extra_domain_check(const L1MultiplicationModel& model,
                                     const StieltjesFunction& g,
                                     const CompleteBernsteinFunction& q,
                                     const L1Element& u,
                                     double tol = default_tolerance);

// ---------------------------------------------------------------------------
// Characterization through the Laplace density of the measure.
// ---------------------------------------------------------------------------

struct MeanCharacterizationReport {
    std::vector<double> decay_schedule;   // 10^k, k = 0..6
    std::vector<double> decay_values;     // t m(t) ||C_t u||
    bool decay_condition = false;         // values settle to (numerical) zero
    std::vector<double> block_partials;   // integral of |m'| sigma ||C_sigma u||
    Verdict block_verdict = Verdict::inconclusive;
    Membership membership = Membership::inconclusive;
    bool consistent = false;  // conjunction of the two conditions == membership
};

// Requires a pure-integral g (a = b = 0, nonzero measure).  Membership is
// equivalent to: t m(t) ||C_t u|| -> 0 together with stabilization of the
// integral of |m'(sigma)| sigma ||C_sigma u||.
MeanCharacterizationReport mean_characterization(const L1MultiplicationModel& model,
                                                 const StieltjesFunction& g,
                                                 const L1Element& u,
                                                 double tol = default_tolerance);

// ---------------------------------------------------------------------------
// Fractional-power criterion.
// ---------------------------------------------------------------------------

struct FractionalReport {
    double alpha = 0.0;
    std::vector<double> schedule;  // 10^k, k = 0..6
    std::vector<double> partials;  // integral of sigma^(alpha-1) ||C_sigma u||
    Verdict partials_verdict = Verdict::inconclusive;
    Membership membership = Membership::inconclusive;  // u in dom of z^alpha
    bool consistent = false;
};

// Stabilization of the weighted average integral is equivalent to membership
// in the domain of the alpha fractional power, alpha in (0, 1).
FractionalReport fractional_criterion(const L1MultiplicationModel& model,
                                      const L1Element& u, double alpha,
                                      double tol = default_tolerance);

// ---------------------------------------------------------------------------
// Averaging regularity of the function itself (no operator involved).
// ---------------------------------------------------------------------------

struct AveragingReport {
    std::vector<double> t;            // 2^-k, k = 0..20
    std::vector<double> mean_ratios;  // [t^-1 integral_0^t g] / g(t)
    std::vector<double> tail_ratios;  // adds integral_t^1 g(tau)/tau dtau
    double mean_constant = 0.0;
    double tail_constant = 0.0;
    bool mean_condition = false;
    bool tail_condition = false;
};

// Probes (1/t) integral_0^t g <= c g(t) near zero, and the strengthened form
// with the extra logarithmic tail term.  Throws Inconclusive when g is not
// integrable at 0 (positive b coefficient or growth exponent >= 1).
AveragingReport averaging_condition_check(const StieltjesFunction& g,
                                          double tol = default_tolerance);

// ---------------------------------------------------------------------------
// Sharpness witness: an element whose averages decay at the ideal rate
// divided by a slowly varying factor, yet which escapes the domain when the
// factor is too weak.
// ---------------------------------------------------------------------------

struct CounterexampleBundle {
    L1Element witness;  // y(s) = -g'(1/s) / (s^2 g(1/s)^2 eps(g(1/s)))
    double witness_norm = 0.0;  // ||y|| by direct quadrature
    double norm_exact = 0.0;    // same integral through the substitution route
    Membership membership = Membership::inconclusive;
    Verdict exact_series = Verdict::inconclusive;  // slow-tail certificate
    Membership diagnostic_verdict = Membership::inconclusive;
    std::vector<double> t;
    std::vector<double> product;  // N_t(y) g(1/t) eps(g(1/t))
    double product_sup = 0.0;
    bool product_bounded = false;
};

// Builds the witness for a power-type g and a slowly varying eps.  Membership
// is decided twice: the exact tail criterion (finiteness of the integral of
// 1/(tau eps(tau)) above g(1)) and the generic domain diagnostic; the routes
// must agree or the verdict stays Inconclusive.  eps must vary slowly enough
// that eps(tau^(7/8)) stays within a fixed band of eps(tau) on a sampling
// grid (PreconditionFailed otherwise).
CounterexampleBundle counterexample_build(const StieltjesFunction& g,
                                          const SlowlyVaryingFunction& eps,
                                          double tol = default_tolerance);

// ---------------------------------------------------------------------------
// Lower bound: averages of a nonzero element cannot beat every slowly
// diverging weight.
// ---------------------------------------------------------------------------

// Weight for the floor statement, with an evaluation form in log coordinates
// so admissibility can be probed far beyond double range.
struct FloorWeight {
    Integrand fn;        // phi(t)
    Integrand log_form;  // phi(e^ell)
    std::string name;
};

FloorWeight floor_weight_log();       // phi(t) = log(1 + t)
FloorWeight floor_weight_identity();  // phi(t) = t
FloorWeight floor_weight(const SlowlyVaryingFunction& eps);

struct FloorReport {
    bool applicable = false;  // integral of 1/(t phi) diverges
    Verdict phi_series = Verdict::inconclusive;
    std::vector<double> schedule;  // 10^(2^k), k = 0..7
    std::vector<double> partials;  // integral of ||C_t u|| / phi(t)
    Verdict integral_verdict = Verdict::inconclusive;
    bool holds = false;  // applicable => the weighted average integral diverges
};

// For positive nondecreasing phi with divergent integral of 1/(t phi(t)), the
// integral of ||C_t u|| / phi(t) diverges for every nonzero u.  A phi failing
// the admissibility test (phi = t, say) reports applicable = false and the
// statement holds vacuously.
FloorReport appendix_floor_check(const L1MultiplicationModel& model,
                                 const L1Element& u, const FloorWeight& phi,
                                 double tol = default_tolerance);

// Partial integral over [1, T] of ||C_t u|| / phi(t), walked in log
// coordinates; T may sit far beyond 10^16 for top-weighted elements.
double floor_partial(const L1MultiplicationModel& model, const L1Element& u,
                     const FloorWeight& phi, double T,
                     double tol = default_tolerance);

}  // namespace ergodelab
