#include "ergodelab/stieltjes.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <utility>

#include "ergodelab/errors.hpp"

namespace ergodelab {

namespace {

std::string format_param(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string make_label(const std::string& name, const std::vector<double>& params,
                       const char* fallback) {
    if (name.empty()) return fallback;
    std::string out = name;
    for (double p : params) {
        out += ':';
        out += format_param(p);
    }
    return out;
}

void require_positive_argument(double z, const char* who) {
    if (!(std::isfinite(z) && z > 0.0))
        throw PreconditionFailed(std::string(who) + " requires a finite argument > 0");
}

void require_rep_coefficients(double a, double b) {
    if (!(std::isfinite(a) && a >= 0.0 && std::isfinite(b) && b >= 0.0))
        throw PreconditionFailed("representation coefficients must be finite and >= 0");
}

}  // namespace

StieltjesFunction::StieltjesFunction(double a, double b, std::optional<RadonMeasure> mu,
                                     std::string registry_name,
                                     std::vector<double> registry_params)
    : a_(a),
      b_(b),
      mu_(std::move(mu)),
      registry_name_(std::move(registry_name)),
      registry_params_(std::move(registry_params)) {
    require_rep_coefficients(a_, b_);
    if (mu_ && mu_->weight() != MeasureWeight::stieltjes)
        throw PreconditionFailed("Stieltjes representation needs a measure checked "
                                 "against the 1/(1+s) weight");

    // Asymptotics at 0+ read off the representation: b/z dominates when
    // present, otherwise a density singularity s^{-p} at the origin yields
    // z^{-p}, and an integrable density reaching 0 leaves a log factor.
    growth_at_zero_ = 0.0;
    slow_factor_ = false;
    if (b_ > 0.0) {
        growth_at_zero_ = 1.0;
    } else if (mu_ && mu_->density()) {
        const Density& d = *mu_->density();
        const double lo = d.support ? d.support->lower : 0.0;
        if (lo == 0.0) {
            if (d.singularity > 0.0)
                growth_at_zero_ = d.singularity;
            else
                slow_factor_ = true;
        }
    }
}

bool StieltjesFunction::is_zero() const {
    return a_ == 0.0 && b_ == 0.0 && (!mu_ || mu_->is_zero());
}

std::string StieltjesFunction::label() const {
    return make_label(registry_name_, registry_params_, "stieltjes");
}

ScalarFunction StieltjesFunction::evaluator(double tol) const {
    StieltjesFunction self = *this;
    return {[self, tol](double z) { return eval_stieltjes(self, z, tol); },
            growth_at_zero_, slow_factor_, label()};
}

double eval_stieltjes(const StieltjesFunction& g, double z, double tol) {
    require_positive_argument(z, "eval_stieltjes");
    double value = g.a();
    if (g.b() > 0.0) value += g.b() / z;
    if (g.measure() && !g.measure()->is_zero()) {
        Kernel k{[z](double s) { return 1.0 / (z + s); }, 0.0, 1.0};
        value += integrate_kernel(*g.measure(), k, tol).value;
    }
    return value;
}

double eval_stieltjes_derivative(const StieltjesFunction& g, double z, double tol) {
    require_positive_argument(z, "eval_stieltjes_derivative");
    double drop = 0.0;
    if (g.b() > 0.0) drop += g.b() / (z * z);
    if (g.measure() && !g.measure()->is_zero()) {
        Kernel k{[z](double s) {
                     const double w = z + s;
                     return 1.0 / (w * w);
                 },
                 0.0, 2.0};
        drop += integrate_kernel(*g.measure(), k, tol).value;
    }
    return -drop;
}

CompleteBernsteinFunction::CompleteBernsteinFunction(double a, double b,
                                                     std::optional<RadonMeasure> mu,
                                                     std::string registry_name,
                                                     std::vector<double> registry_params)
    : a_(a),
      b_(b),
      mu_(std::move(mu)),
      registry_name_(std::move(registry_name)),
      registry_params_(std::move(registry_params)) {
    require_rep_coefficients(a_, b_);
    if (mu_ && mu_->weight() != MeasureWeight::stieltjes)
        throw PreconditionFailed("complete Bernstein representation needs a measure "
                                 "checked against the 1/(1+s) weight");

    // Growth at +inf: a linear term wins; otherwise a density tail s^{-1-q}
    // with q < 1 gives z^{1-q}, and q == 1 exactly leaves a log factor.
    power_at_inf_ = 0.0;
    slow_factor_ = false;
    if (b_ > 0.0) {
        power_at_inf_ = 1.0;
    } else if (mu_ && mu_->density()) {
        const Density& d = *mu_->density();
        const bool unbounded = !d.support || !std::isfinite(d.support->upper);
        if (unbounded && d.decay) {
            if (*d.decay < 1.0)
                power_at_inf_ = 1.0 - *d.decay;
            else if (*d.decay == 1.0)
                slow_factor_ = true;
        }
    }
}

bool CompleteBernsteinFunction::is_zero() const {
    return a_ == 0.0 && b_ == 0.0 && (!mu_ || mu_->is_zero());
}

std::string CompleteBernsteinFunction::label() const {
    return make_label(registry_name_, registry_params_, "cbf");
}

ScalarFunction CompleteBernsteinFunction::evaluator(double tol) const {
    CompleteBernsteinFunction self = *this;
    return {[self, tol](double z) { return eval_cbf(self, z, tol); },
            power_at_inf_, slow_factor_, label()};
}

double eval_cbf(const CompleteBernsteinFunction& f, double z, double tol) {
    require_positive_argument(z, "eval_cbf");
    double value = f.a() + f.b() * z;
    if (f.measure() && !f.measure()->is_zero()) {
        Kernel k{[z](double s) { return z / (z + s); }, 0.0, 1.0};
        value += integrate_kernel(*f.measure(), k, tol).value;
    }
    return value;
}

CompleteBernsteinFunction dual(const StieltjesFunction& g) {
    std::string name;
    std::vector<double> params;
    if (g.registry_name() == "power" && g.registry_params().size() == 1) {
        name = "cbf-power";
        params = {1.0 - g.registry_params()[0]};
    }
    return CompleteBernsteinFunction(g.b(), g.a(), g.measure(), std::move(name),
                                     std::move(params));
}

ScalarFunction compose(const CompleteBernsteinFunction& f, const StieltjesFunction& g,
                       double tol) {
    if (g.is_zero())
        throw PreconditionFailed("compose requires a nonzero inner function");
    ScalarFunction out;
    out.fn = [f, g, tol](double z) { return eval_cbf(f, eval_stieltjes(g, z, tol), tol); };
    out.growth_at_zero = f.power_at_inf() * g.growth_at_zero();
    out.slow_factor = f.slow_factor() || g.slow_factor();
    out.label = f.label() + "(" + g.label() + ")";
    return out;
}

LimitsReport limits(const StieltjesFunction& g, double tol) {
    if (!(tol > 0.0)) throw PreconditionFailed("limits requires tol > 0");
    // The schedules extrapolate geometric tails; evaluation noise gets
    // amplified by the extrapolation, so sample tighter than we promise.
    const double inner = tol / 100.0;
    const int kmax = 40;

    std::vector<double> at_inf, at_zero, slope_at_zero;
    at_inf.reserve(kmax + 1);
    at_zero.reserve(kmax + 1);
    slope_at_zero.reserve(kmax + 1);
    bool blows_up = false;
    for (int k = 0; k <= kmax; ++k) {
        at_inf.push_back(eval_stieltjes(g, std::ldexp(1.0, k), inner));
        const double z = std::ldexp(1.0, -k);
        const double v = eval_stieltjes(g, z, inner);
        at_zero.push_back(v);
        slope_at_zero.push_back(z * v);
        if (v > 1e8) blows_up = true;
    }

    LimitsReport out;

    SequenceProbe pa = classify_values(at_inf);
    if (pa.verdict != Verdict::converges || !pa.limit)
        throw Inconclusive("value at +inf did not settle along the geometric schedule");
    out.a_estimate = std::max(0.0, *pa.limit);

    SequenceProbe pb = classify_values(slope_at_zero);
    if (pb.verdict != Verdict::converges || !pb.limit)
        throw Inconclusive("z * g(z) did not settle along the schedule toward 0");
    out.b_estimate = std::max(0.0, *pb.limit);

    if (blows_up) {
        out.g_at_zero = inf;
    } else {
        SequenceProbe p0 = classify_values(at_zero);
        if (p0.verdict == Verdict::converges && p0.limit)
            out.g_at_zero = std::max(0.0, *p0.limit);
        else if (p0.verdict == Verdict::diverges)
            out.g_at_zero = inf;
        else
            throw Inconclusive("value at 0+ did not settle along the schedule");
    }
    return out;
}

double DualityReport::max_violation() const {
    return std::max({cbf_negativity, cbf_decrease, cbf_concavity, reciprocal_negativity,
                     reciprocal_decrease, reciprocal_ratio_increase});
}

DualityReport duality_check(const StieltjesFunction& g, std::span<const double> grid,
                            double tol) {
    if (grid.size() < 3)
        throw PreconditionFailed("duality_check needs at least three grid points");
    for (size_t i = 0; i < grid.size(); ++i) {
        if (!(std::isfinite(grid[i]) && grid[i] > 0.0))
            throw PreconditionFailed("duality_check grid must be positive and finite");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw PreconditionFailed("duality_check grid must be strictly increasing");
    }
    const bool has_mass = g.measure() && !g.measure()->is_zero();
    if (g.b() == 0.0 && !has_mass)
        throw PreconditionFailed("duality_check needs b > 0 or a nonzero measure");

    std::vector<double> gv(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) gv[i] = eval_stieltjes(g, grid[i], tol);

    DualityReport rep;
    for (size_t i = 0; i < grid.size(); ++i) {
        const double h = grid[i] * gv[i];
        const double r = 1.0 / gv[i];
        rep.cbf_negativity = std::max(rep.cbf_negativity, -h);
        rep.reciprocal_negativity = std::max(rep.reciprocal_negativity, -r);
        if (i + 1 < grid.size()) {
            const double hn = grid[i + 1] * gv[i + 1];
            const double rn = 1.0 / gv[i + 1];
            rep.cbf_decrease = std::max(rep.cbf_decrease, h - hn);
            rep.reciprocal_decrease = std::max(rep.reciprocal_decrease, r - rn);
            rep.reciprocal_ratio_increase =
                std::max(rep.reciprocal_ratio_increase, rn / grid[i + 1] - r / grid[i]);

            // concavity of z*g(z), probed at the true midpoint of each pair
            const double m = 0.5 * (grid[i] + grid[i + 1]);
            const double hm = m * eval_stieltjes(g, m, tol);
            rep.cbf_concavity = std::max(rep.cbf_concavity, 0.5 * (h + hn) - hm);
        }
    }
    rep.cbf_negativity = std::max(0.0, rep.cbf_negativity);
    rep.cbf_decrease = std::max(0.0, rep.cbf_decrease);
    rep.cbf_concavity = std::max(0.0, rep.cbf_concavity);
    rep.reciprocal_negativity = std::max(0.0, rep.reciprocal_negativity);
    rep.reciprocal_decrease = std::max(0.0, rep.reciprocal_decrease);
    rep.reciprocal_ratio_increase = std::max(0.0, rep.reciprocal_ratio_increase);
    return rep;
}

namespace {

// integral of tau^k exp(-s tau) against the density part, s > 0.  Substituting
// w = s tau keeps the exponential mass at unit scale however large s gets; a
// direct kernel quadrature loses the integrand entirely once 1/s drops below
// the first panel node and every sample underflows to zero.
double scaled_exp_moment(const Density& d, double s, int k, double tol) {
    double lo = 0.0;
    double hi = inf;
    if (d.support) {
        lo = d.support->lower;
        hi = d.support->upper;
    }
    const double wlo = s * lo;
    const double whi = std::isinf(hi) ? inf : s * hi;
    auto h = [&d, s, k](double w) {
        double weight = 1.0;
        for (int i = 0; i < k; ++i)
            weight *= w;
        return weight * std::exp(-w) * d.fn(w / s);
    };
    EndpointHint hint;
    if (std::isinf(whi))
        hint.tail = exp_decay;
    const double p = d.singularity - k;
    if (wlo == 0.0 && p > 0.0)
        hint.singularity = p;
    return integrate(h, {wlo, whi}, hint, tol).value * std::pow(s, -(1.0 + k));
}

} // namespace

double laplace_density(const StieltjesFunction& g, double s, double tol) {
    if (g.a() != 0.0 || g.b() != 0.0)
        throw PreconditionFailed("laplace_density needs a pure-integral representation");
    if (!(std::isfinite(s) && s >= 0.0))
        throw PreconditionFailed("laplace_density requires s >= 0");
    if (!g.measure() || g.measure()->is_zero()) return 0.0;
    if (s == 0.0) {
        Kernel k{[](double) { return 1.0; }, 0.0, 0.0};
        return integrate_kernel(*g.measure(), k, tol).value;
    }
    const RadonMeasure& mu = *g.measure();
    double out = 0.0;
    for (const Atom& atom : mu.atoms())
        out += atom.mass * std::exp(-s * atom.location);
    if (mu.density())
        out += scaled_exp_moment(*mu.density(), s, 0, tol);
    return out;
}

double laplace_density_derivative(const StieltjesFunction& g, double s, double tol) {
    if (g.a() != 0.0 || g.b() != 0.0)
        throw PreconditionFailed("laplace_density_derivative needs a pure-integral "
                                 "representation");
    if (!(std::isfinite(s) && s > 0.0))
        throw PreconditionFailed("laplace_density_derivative requires s > 0");
    if (!g.measure() || g.measure()->is_zero()) return 0.0;
    const RadonMeasure& mu = *g.measure();
    double out = 0.0;
    for (const Atom& atom : mu.atoms())
        out += atom.mass * atom.location * std::exp(-s * atom.location);
    if (mu.density())
        out += scaled_exp_moment(*mu.density(), s, 1, tol);
    return -out;
}

BoundPair cesaro_symbol_bound(const CompleteBernsteinFunction& f, double t, double tol) {
    require_positive_argument(t, "cesaro_symbol_bound");
    if (f.a() != 0.0 || f.b() != 0.0)
        throw PreconditionFailed("cesaro_symbol_bound needs a pure-integral "
                                 "representation");
    BoundPair out;
    if (f.measure() && !f.measure()->is_zero()) {
        Kernel k{[t](double s) { return -std::expm1(-s * t) / (s * t); }, 0.0, 1.0};
        out.lhs = integrate_kernel(*f.measure(), k, tol).value;
    }
    out.rhs = 2.0 * eval_cbf(f, 1.0 / t, tol);
    return out;
}

SlowlyVaryingFunction::SlowlyVaryingFunction(Integrand fn, Integrand log_argument_form,
                                             double domain_start, std::string name,
                                             std::vector<double> params)
    : fn_(std::move(fn)),
      log_form_(std::move(log_argument_form)),
      domain_start_(domain_start),
      name_(std::move(name)),
      params_(std::move(params)) {
    if (!fn_ || !log_form_)
        throw PreconditionFailed("slowly varying function needs both evaluation forms");
    if (!(std::isfinite(domain_start_) && domain_start_ >= 0.0 && domain_start_ < 1e30))
        throw PreconditionFailed("slowly varying domain must start in [0, 1e30)");

    const double top = 1e40;
    const double start = domain_start_ > 0.0 ? 2.0 * domain_start_ : 1e-2;
    for (double t = start; t <= top; t *= 10.0) {
        const double v = fn_(t);
        if (!(std::isfinite(v) && v > 0.0))
            throw PreconditionFailed("slowly varying function must be positive on "
                                     "its domain");
        const double w = log_form_(std::log(t));
        if (!(std::abs(w - v) <= 1e-6 * std::max(1.0, std::abs(v))))
            throw PreconditionFailed("log-argument form disagrees with direct "
                                     "evaluation");
    }
    for (double lam : {2.0, 5.0, 10.0}) {
        const double r = fn_(lam * top) / fn_(top);
        if (!(std::abs(r - 1.0) <= 0.1))
            throw PreconditionFailed("sampled ratio at the grid top rules out slow "
                                     "variation");
    }
}

SlowlyVaryingFunction SlowlyVaryingFunction::powered_argument(double alpha) const {
    if (!(std::isfinite(alpha) && alpha > 0.0 && alpha <= 7.0))
        throw PreconditionFailed("powered_argument needs alpha in (0, 7] to keep the "
                                 "sampled grid in range");
    Integrand base = fn_;
    Integrand base_log = log_form_;
    return SlowlyVaryingFunction(
        [base, alpha](double tau) { return base(std::pow(tau, alpha)); },
        [base_log, alpha](double ell) { return base_log(alpha * ell); },
        domain_start_ > 0.0 ? std::pow(domain_start_, 1.0 / alpha) : 0.0,
        name_ + "(t^" + format_param(alpha) + ")", params_);
}

namespace builtins {

namespace {

// log(c + e^ell) without forming e^ell
double log_shifted_exp(double c, double ell) {
    if (ell > 1.0) return ell + std::log1p(c * std::exp(-ell));
    return std::log(c + std::exp(ell));
}

}  // namespace

StieltjesFunction power(double gamma) {
    if (!(std::isfinite(gamma) && gamma > 0.0 && gamma < 1.0))
        throw PreconditionFailed("power builtin needs gamma in (0, 1)");
    const double scale = std::sin(std::numbers::pi * gamma) / std::numbers::pi;
    auto mu = RadonMeasure::from_density(make_density("power", {gamma, scale}),
                                         MeasureWeight::stieltjes);
    return StieltjesFunction(0.0, 0.0, std::move(mu), "power", {gamma});
}

StieltjesFunction log_ratio() {
    auto mu = RadonMeasure::from_density(make_density("stieltjes-log", {}),
                                         MeasureWeight::stieltjes);
    return StieltjesFunction(0.0, 0.0, std::move(mu), "log-ratio", {});
}

StieltjesFunction log_reciprocal() {
    auto mu = RadonMeasure::from_density(make_density("lebesgue-window", {0.0, 1.0}),
                                         MeasureWeight::stieltjes);
    return StieltjesFunction(0.0, 0.0, std::move(mu), "log-reciprocal", {});
}

CompleteBernsteinFunction cbf_power(double alpha) {
    if (!(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0))
        throw PreconditionFailed("cbf_power builtin needs alpha in (0, 1)");
    const double scale = std::sin(std::numbers::pi * alpha) / std::numbers::pi;
    auto mu = RadonMeasure::from_density(make_density("power", {1.0 - alpha, scale}),
                                         MeasureWeight::stieltjes);
    return CompleteBernsteinFunction(0.0, 0.0, std::move(mu), "cbf-power", {alpha});
}

LevyTriple levy_power(double alpha) {
    if (!(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0))
        throw PreconditionFailed("levy_power builtin needs alpha in (0, 1)");
    const double scale = alpha / std::tgamma(1.0 - alpha);
    auto nu = RadonMeasure::from_density(make_density("power", {1.0 + alpha, scale}),
                                         MeasureWeight::levy);
    return LevyTriple{0.0, 0.0, std::move(nu)};
}

SlowlyVaryingFunction eps_log() {
    return SlowlyVaryingFunction([](double tau) { return std::log(2.0 + tau); },
                                 [](double ell) { return log_shifted_exp(2.0, ell); },
                                 0.0, "log", {});
}

SlowlyVaryingFunction eps_log_power(double beta) {
    if (!(std::isfinite(beta) && beta > 0.0))
        throw PreconditionFailed("eps_log_power needs beta > 0");
    return SlowlyVaryingFunction(
        [beta](double tau) { return std::pow(std::log(2.0 + tau), beta); },
        [beta](double ell) { return std::pow(log_shifted_exp(2.0, ell), beta); }, 0.0,
        "logpow", {beta});
}

SlowlyVaryingFunction eps_log_loglog() {
    return SlowlyVaryingFunction(
        [](double tau) { return std::log(2.0 + tau) * std::log(std::log(3.0 + tau)); },
        [](double ell) {
            return log_shifted_exp(2.0, ell) * std::log(log_shifted_exp(3.0, ell));
        },
        0.0, "loglog", {});
}

std::vector<NamedStieltjes> stieltjes_suite() {
    std::vector<NamedStieltjes> suite;
    for (double gamma : {0.25, 0.5, 0.75}) {
        suite.push_back({power(gamma),
                         [gamma](double z) { return std::pow(z, -gamma); },
                         "power:" + format_param(gamma)});
    }
    suite.push_back({log_ratio(),
                     [](double z) {
                         const double w = z - 1.0;
                         return w == 0.0 ? 1.0 : std::log1p(w) / w;
                     },
                     "log-ratio"});
    suite.push_back({log_reciprocal(),
                     [](double z) { return std::log1p(1.0 / z); },
                     "log-reciprocal"});
    return suite;
}

}  // namespace builtins

}  // namespace ergodelab
