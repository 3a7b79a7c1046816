#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ergodelab/measure.hpp"
#include "ergodelab/quad.hpp"

namespace ergodelab {

// A plain evaluatable scalar function carrying the two pieces of asymptotic
// metadata the rate machinery needs: the power of the blow-up at 0+ and
// whether a slowly varying factor rides on top of it.
struct ScalarFunction {
    Integrand fn;
    double growth_at_zero = 0.0;
    bool slow_factor = false;
    std::string label;

    double operator()(double z) const { return fn(z); }
};

// g(z) = a + b/z + integral of 1/(z+s) d mu(s), a, b >= 0, mu admissible
// against 1/(1+s).  Values are finite and positive for z > 0 whenever the
// representation is nonzero.
class StieltjesFunction {
  public:
    StieltjesFunction(double a, double b, std::optional<RadonMeasure> mu = std::nullopt,
                      std::string registry_name = {}, std::vector<double> registry_params = {});

    double a() const { return a_; }
    double b() const { return b_; }
    const std::optional<RadonMeasure>& measure() const { return mu_; }

    // Power p with g(z) ~ z^{-p} (up to a slow factor) as z -> 0+.
    double growth_at_zero() const { return growth_at_zero_; }
    bool slow_factor() const { return slow_factor_; }

    bool is_zero() const;

    // Registry tag for serialization; empty for hand-assembled functions.
    const std::string& registry_name() const { return registry_name_; }
    const std::vector<double>& registry_params() const { return registry_params_; }
    std::string label() const;

    ScalarFunction evaluator(double tol = default_tolerance) const;

  private:
    double a_;
    double b_;
    std::optional<RadonMeasure> mu_;
    double growth_at_zero_;
    bool slow_factor_;
    std::string registry_name_;
    std::vector<double> registry_params_;
};

double eval_stieltjes(const StieltjesFunction& g, double z, double tol = default_tolerance);
double eval_stieltjes_derivative(const StieltjesFunction& g, double z,
                                 double tol = default_tolerance);

// f(z) = a + b z + integral of z/(z+s) d mu(s) with the same admissibility
// requirement on mu.  Nonnegative, nondecreasing, concave on (0, inf).
class CompleteBernsteinFunction {
  public:
    CompleteBernsteinFunction(double a, double b, std::optional<RadonMeasure> mu = std::nullopt,
                              std::string registry_name = {},
                              std::vector<double> registry_params = {});

    double a() const { return a_; }
    double b() const { return b_; }
    const std::optional<RadonMeasure>& measure() const { return mu_; }

    // Power p with f(z) ~ z^{p} (up to a slow factor) as z -> +inf.
    double power_at_inf() const { return power_at_inf_; }
    bool slow_factor() const { return slow_factor_; }

    bool is_zero() const;

    const std::string& registry_name() const { return registry_name_; }
    const std::vector<double>& registry_params() const { return registry_params_; }
    std::string label() const;

    ScalarFunction evaluator(double tol = default_tolerance) const;

  private:
    double a_;
    double b_;
    std::optional<RadonMeasure> mu_;
    double power_at_inf_;
    bool slow_factor_;
    std::string registry_name_;
    std::vector<double> registry_params_;
};

double eval_cbf(const CompleteBernsteinFunction& f, double z, double tol = default_tolerance);

// z * g(z) is a complete Bernstein function with the roles of a and b
// swapped and the same measure.  This is the representation-level fact the
// evaluators must agree on; eval_cbf(dual(g), z) == z * eval_stieltjes(g, z).
CompleteBernsteinFunction dual(const StieltjesFunction& g);

// f(g(z)) for complete Bernstein f and Stieltjes g is again Stieltjes; we
// only expose the evaluation-level composite, since the composed measure has
// no closed form here.
ScalarFunction compose(const CompleteBernsteinFunction& f, const StieltjesFunction& g,
                       double tol = default_tolerance);

struct LimitsReport {
    double a_estimate = 0.0;  // g at +inf
    double b_estimate = 0.0;  // z * g(z) at 0+
    double g_at_zero = 0.0;   // +inf when g blows up at 0+
};

// Probes g along geometric schedules toward 0 and +inf and classifies the
// three limits above.  Throws Inconclusive when a schedule does not settle.
LimitsReport limits(const StieltjesFunction& g, double tol = default_tolerance);

// Violation magnitudes for the structural facts tied to the duality: h = z*g
// must be nonnegative, nondecreasing and midpoint-concave, and r = 1/g must
// be nonnegative, nondecreasing with r(z)/z nonincreasing.  All entries are
// max(0, observed violation); a clean pass is all zeros up to tolerance.
struct DualityReport {
    double cbf_negativity = 0.0;
    double cbf_decrease = 0.0;
    double cbf_concavity = 0.0;
    double reciprocal_negativity = 0.0;
    double reciprocal_decrease = 0.0;
    double reciprocal_ratio_increase = 0.0;

    double max_violation() const;
};

DualityReport duality_check(const StieltjesFunction& g, std::span<const double> grid,
                            double tol = default_tolerance);

// Density of the representing measure against the Laplace kernel:
// m(s) = integral of e^{-s tau} d mu(tau).  Requires a = b = 0 and s >= 0;
// at s = 0 this is the total mass and fails loudly when that is infinite.
double laplace_density(const StieltjesFunction& g, double s, double tol = default_tolerance);

// m'(s) = -integral of tau e^{-s tau} d mu(tau), s > 0.  Always <= 0.
double laplace_density_derivative(const StieltjesFunction& g, double s,
                                  double tol = default_tolerance);

struct BoundPair {
    double lhs = 0.0;
    double rhs = 0.0;
};

// The averaging symbol (1 - e^{-st})/(st) integrated against the measure of
// a pure-integral complete Bernstein function, paired with its proven cap
// 2 f(1/t).  lhs <= rhs for every t > 0; the gap is what the direct rate
// theorem spends.
BoundPair cesaro_symbol_bound(const CompleteBernsteinFunction& f, double t,
                              double tol = default_tolerance);

// Positive function on (domain_start, inf) with eps(lambda t)/eps(t) -> 1.
// Construction samples that ratio on a geometric grid and rejects functions
// that visibly fail it.  at_log evaluates eps(e^l) without forming e^l, so
// certificates can walk tau far beyond double range.
class SlowlyVaryingFunction {
  public:
    SlowlyVaryingFunction(Integrand fn, Integrand log_argument_form, double domain_start,
                          std::string name, std::vector<double> params = {});

    double operator()(double tau) const { return fn_(tau); }
    double at_log(double ell) const { return log_form_(ell); }

    double domain_start() const { return domain_start_; }
    const std::string& name() const { return name_; }
    const std::vector<double>& params() const { return params_; }

    // tau -> eps(tau^alpha), alpha > 0; slow variation is preserved.
    SlowlyVaryingFunction powered_argument(double alpha) const;

  private:
    Integrand fn_;
    Integrand log_form_;
    double domain_start_;
    std::string name_;
    std::vector<double> params_;
};

// Lévy triple (a, b, nu) of a Bernstein function
// f(z) = a + b z + integral of (1 - e^{-sz}) d nu(s),
// with nu admissible against s/(1+s).  Feeds the subordination route.
struct LevyTriple {
    double a = 0.0;
    double b = 0.0;
    std::optional<RadonMeasure> nu;
};

namespace builtins {

// z^{-gamma}, 0 < gamma < 1; density sin(pi gamma)/pi * s^{-gamma}.
StieltjesFunction power(double gamma);

// log(z)/(z - 1), value 1 at z = 1; density 1/(1+s).
StieltjesFunction log_ratio();

// log(1 + 1/z); Lebesgue measure on (0, 1].
StieltjesFunction log_reciprocal();

// z^{alpha}, 0 < alpha < 1; density sin(pi alpha)/pi * s^{alpha - 1}.
CompleteBernsteinFunction cbf_power(double alpha);

// z^{alpha} again, but as its Lévy triple: density
// alpha/Gamma(1-alpha) * s^{-1-alpha}.
LevyTriple levy_power(double alpha);

SlowlyVaryingFunction eps_log();                      // log(2 + tau)
SlowlyVaryingFunction eps_log_power(double beta);     // log^beta(2 + tau)
SlowlyVaryingFunction eps_log_loglog();               // log(2+tau) log(log(3+tau))

struct NamedStieltjes {
    StieltjesFunction g;
    Integrand closed_form;
    std::string name;
};

// The five reference functions with their closed forms: gamma = 1/4, 1/2,
// 3/4 powers, log_ratio, log_reciprocal.
std::vector<NamedStieltjes> stieltjes_suite();

}  // namespace builtins

}  // namespace ergodelab
