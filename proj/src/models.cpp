#include "ergodelab/models.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <utility>

#include "ergodelab/errors.hpp"

namespace ergodelab {

namespace {

void require_time(double t, const char* who) {
    if (!(std::isfinite(t) && t > 0.0))
        throw PreconditionFailed(std::string(who) + " requires a finite time > 0");
}

Integrand abs_values(const L1Element& u) {
    return [u](double s) { return std::abs(u(s)); };
}

TailEnvelope lifted_envelope(TailEnvelope env, double growth, bool slow) {
    env.power -= growth;
    if (slow) env.log_power -= 1.0;
    return env;
}

}  // namespace

L1Element::L1Element()
    : values_([](double) { return 0.0; }),
      tail_{1.0, inf, 0.0, 0.0},
      zero_(true),
      registry_name_("zero") {}

L1Element::L1Element(Integrand values, TailEnvelope tail, std::string registry_name,
                     std::vector<double> registry_params)
    : values_(std::move(values)),
      tail_(tail),
      zero_(false),
      registry_name_(std::move(registry_name)),
      registry_params_(std::move(registry_params)) {
    if (!values_) throw PreconditionFailed("element needs an evaluation function");
    if (!(tail_.support_end >= 1.0))
        throw PreconditionFailed("element support must reach into [1, inf)");
    if (!(tail_.power > 0.0) || std::isnan(tail_.log_power) ||
        std::isnan(tail_.loglog_power))
        throw PreconditionFailed("tail envelope entries must be usable exponents");
}

double L1Element::operator()(double s) const {
    if (!(std::isfinite(s) && s >= 1.0))
        throw PreconditionFailed("element evaluated off its domain [1, inf)");
    return values_(s);
}

std::string L1Element::label() const {
    if (registry_name_.empty()) return "derived";
    std::string out = registry_name_;
    for (double p : registry_params_) {
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof(buf), p);
        out += ':';
        out.append(buf, res.ptr);
    }
    return out;
}

L1Element make_element(const std::string& name, const std::vector<double>& params) {
    if (name == "zero") {
        if (!params.empty()) throw PreconditionFailed("zero element takes no parameters");
        return L1Element();
    }
    if (name == "window") {
        if (params.size() != 2)
            throw PreconditionFailed("window element needs bounds {a, b}");
        const double a = params[0], b = params[1];
        if (!(std::isfinite(a) && std::isfinite(b) && a >= 1.0 && b > a))
            throw PreconditionFailed("window element needs 1 <= a < b < inf");
        return L1Element([a, b](double s) { return (s >= a && s <= b) ? 1.0 : 0.0; },
                         TailEnvelope{b, inf, 0.0, 0.0}, "window", {a, b});
    }
    if (name == "power") {
        if (params.size() != 1)
            throw PreconditionFailed("power element needs an exponent {r}");
        const double r = params[0];
        if (!(std::isfinite(r) && r > 1.0))
            throw PreconditionFailed("power element needs r > 1 to stay integrable");
        return L1Element([r](double s) { return std::pow(s, -r); },
                         TailEnvelope{inf, r, 0.0, 0.0}, "power", {r});
    }
    throw PreconditionFailed("unknown element: " + name);
}

L1Element apply_semigroup(const L1MultiplicationModel&, const L1Element& u, double t) {
    if (!(std::isfinite(t) && t >= 0.0))
        throw PreconditionFailed("apply_semigroup requires a finite time >= 0");
    if (u.is_zero() || t == 0.0) return u;
    return L1Element([u, t](double s) { return std::exp(-t / s) * u(s); }, u.tail());
}

L1Element cesaro_mean(const L1MultiplicationModel&, const L1Element& u, double t) {
    require_time(t, "cesaro_mean");
    if (u.is_zero()) return u;
    return L1Element(
        [u, t](double s) { return s * (-std::expm1(-t / s)) / t * u(s); }, u.tail());
}

L1Element resolvent(const L1MultiplicationModel&, const L1Element& u, double lambda) {
    require_time(lambda, "resolvent");
    if (u.is_zero()) return u;
    return L1Element([u, lambda](double s) { return s / (1.0 + lambda * s) * u(s); },
                     u.tail());
}

L1Element apply_function_spectral(const L1MultiplicationModel&, const ScalarFunction& fn,
                                  const L1Element& u) {
    if (!fn.fn) throw PreconditionFailed("spectral application needs an evaluator");
    if (u.is_zero()) return u;
    Integrand scalar = fn.fn;
    return L1Element([scalar, u](double s) { return scalar(1.0 / s) * u(s); },
                     lifted_envelope(u.tail(), fn.growth_at_zero, fn.slow_factor));
}

L1Element stieltjes_resolvent_apply(const L1MultiplicationModel&, const StieltjesFunction& g,
                                    const L1Element& u, double tol) {
    if (u.is_zero()) return u;
    StieltjesFunction rep = g;
    auto multiplier = [rep, tol](double s) {
        double m = rep.a() + rep.b() * s;
        if (rep.measure() && !rep.measure()->is_zero()) {
            Kernel k{[s](double r) { return s / (1.0 + r * s); }, 0.0, 1.0};
            m += integrate_kernel(*rep.measure(), k, tol).value;
        }
        return m;
    };
    return L1Element([multiplier, u](double s) { return multiplier(s) * u(s); },
                     lifted_envelope(u.tail(), g.growth_at_zero(), g.slow_factor()));
}

L1Element cbf_resolvent_apply(const L1MultiplicationModel&, const CompleteBernsteinFunction& f,
                              const L1Element& u, double tol) {
    if (u.is_zero()) return u;
    CompleteBernsteinFunction rep = f;
    auto multiplier = [rep, tol](double s) {
        double m = rep.a() + rep.b() / s;
        if (rep.measure() && !rep.measure()->is_zero()) {
            Kernel k{[s](double r) { return 1.0 / (1.0 + r * s); }, 0.0, 1.0};
            m += integrate_kernel(*rep.measure(), k, tol).value;
        }
        return m;
    };
    return L1Element([multiplier, u](double s) { return multiplier(s) * u(s); }, u.tail());
}

double l1_norm(const L1Element& u, double tol) {
    if (u.is_zero()) return 0.0;
    const TailEnvelope& env = u.tail();
    Integrand f = abs_values(u);
    if (std::isfinite(env.support_end)) {
        if (env.support_end <= 1.0) return 0.0;
        return integrate(f, Interval{1.0, env.support_end}, {}, tol).value;
    }
    if (!(env.power > 1.0))
        throw PreconditionFailed("tail envelope does not certify an integrable element");
    return integrate(f, Interval{1.0, inf}, EndpointHint::upper(env.power - 1.0), tol)
        .value;
}

double Nt_norm(const L1Element& u, double t, double tol) {
    if (!(std::isfinite(t) && t >= 1.0))
        throw PreconditionFailed("Nt_norm requires t >= 1");
    if (u.is_zero()) return 0.0;
    const TailEnvelope& env = u.tail();
    Integrand f = abs_values(u);

    double head = 0.0;
    const double head_hi = std::min(t, env.support_end);
    if (head_hi > 1.0) {
        Integrand weighted = [&f](double s) { return s * f(s); };
        head = integrate(weighted, Interval{1.0, head_hi}, {}, tol).value / t;
    }

    double tail = 0.0;
    if (env.support_end > t) {
        if (std::isfinite(env.support_end)) {
            tail = integrate(f, Interval{t, env.support_end}, {}, tol).value;
        } else {
            if (!(env.power > 1.0))
                throw PreconditionFailed("tail envelope does not certify an integrable "
                                         "element");
            tail = integrate(f, Interval{t, inf}, EndpointHint::upper(env.power - 1.0),
                             tol)
                       .value;
        }
    }
    return head + tail;
}

double cesaro_norm(const L1MultiplicationModel&, const L1Element& u, double t,
                   double tol) {
    require_time(t, "cesaro_norm");
    if (u.is_zero()) return 0.0;
    const TailEnvelope& env = u.tail();
    if (env.support_end <= 1.0) return 0.0;
    // Integrates the unnormalized average mass t ||C_t u|| and divides once
    // at the end.  The normalized integrand is the norm value spread over
    // the whole width, which for very large t sits below both the denormal
    // range and the absolute tolerance floor; the unnormalized one stays at
    // the element's own scale, so the relative stop rule applies.  Walked on
    // the log axis and cut at the turnover s ~ t for the same reason.
    auto h = [u, t](double sigma) {
        const double s = std::exp(sigma);
        if (!std::isfinite(s)) return 0.0;
        return s * (-std::expm1(-t / s)) * std::abs(u(s)) * s;
    };
    const double knee = std::log(std::max(1.0, std::min(t, env.support_end)));
    double mass = 0.0;
    if (knee > 0.0) mass += integrate(h, Interval{0.0, knee}, {}, tol).value;
    if (std::isfinite(env.support_end)) {
        const double top = std::log(env.support_end);
        if (top > knee) mass += integrate(h, Interval{knee, top}, {}, tol).value;
        return mass / t;
    }
    if (!(env.power > 1.0))
        throw PreconditionFailed("tail envelope does not certify an integrable element");
    // beyond the turnover the integrand dies exponentially in sigma
    mass += integrate(h, Interval{knee, inf}, EndpointHint::upper(exp_decay), tol).value;
    return mass / t;
}

NormSnapshot norm_snapshot(const L1MultiplicationModel& model, const L1Element& u, double t,
                           double tol) {
    return NormSnapshot{t, cesaro_norm(model, u, t, tol), Nt_norm(u, t, tol)};
}

const char* to_string(Membership verdict) {
    switch (verdict) {
        case Membership::member: return "Member";
        case Membership::not_member: return "NotMember";
        default: return "Inconclusive";
    }
}

MembershipReport membership_diagnostic(const L1MultiplicationModel& model,
                                       const StieltjesFunction& g, const L1Element& u,
                                       double tol) {
    return membership_diagnostic(model, g.evaluator(tol), u, tol);
}

MembershipReport membership_diagnostic(const L1MultiplicationModel&,
                                       const ScalarFunction& weight, const L1Element& u,
                                       double tol) {
    if (!(tol > 0.0)) throw PreconditionFailed("membership_diagnostic requires tol > 0");
    MembershipReport rep;
    if (u.is_zero()) {
        rep.verdict = Membership::member;
        rep.series_verdict = Verdict::converges;
        return rep;
    }

    auto integrand = [&weight, &u](double s) {
        return weight(1.0 / s) * std::abs(u(s));
    };

    const TailEnvelope& env = u.tail();
    if (std::isfinite(env.support_end)) {
        double domain_integral = 0.0;
        if (env.support_end > 1.0)
            domain_integral =
                integrate(integrand, Interval{1.0, env.support_end}, {}, tol).value;
        rep.verdict = Membership::member;
        rep.series_verdict = Verdict::converges;
        rep.graph_norm = l1_norm(u, tol) + domain_integral;
        return rep;
    }

    // Partial integrals up to 10^(2^k).  Walked in log coordinates so that
    // mass spread evenly over decades is actually seen by the panels.
    const double block_tol = tol / 8.0;
    double total = 0.0;
    double prev_log = 0.0;
    for (int k = 0; k <= 6; ++k) {
        const double next_log = std::pow(2.0, k) * std::numbers::ln10;
        auto block = [&integrand](double ell) {
            const double s = std::exp(ell);
            return integrand(s) * s;
        };
        total += integrate(block, Interval{prev_log, next_log}, {}, block_tol).value;
        rep.schedule.push_back(std::exp(next_log));
        rep.partials.push_back(total);
        prev_log = next_log;
    }

    ClassifyOptions opt;
    opt.floor_scale = std::max(opt.floor_scale, 2.5 * tol);
    SequenceProbe probe = classify_values(rep.partials, opt);
    rep.series_verdict = probe.verdict;

    // Exactly on the 1/(s log s) borderline an extra iterated-log factor is
    // invisible to any truncation schedule; the envelope decides there.
    const double decay = env.power - weight.growth_at_zero;
    const double log_decay = env.log_power - (weight.slow_factor ? 1.0 : 0.0);
    if (std::abs(decay - 1.0) <= 1e-9 && std::abs(log_decay - 1.0) <= 1e-9 &&
        env.loglog_power != 0.0) {
        rep.borderline_certificate = true;
        if (env.loglog_power > 1.0) {
            rep.verdict = Membership::member;
            rep.graph_norm =
                l1_norm(u, tol) + (probe.limit ? *probe.limit : rep.partials.back());
        } else {
            rep.verdict = Membership::not_member;
        }
        return rep;
    }

    switch (probe.verdict) {
        case Verdict::converges:
            rep.verdict = Membership::member;
            rep.graph_norm = l1_norm(u, tol) + *probe.limit;
            break;
        case Verdict::diverges:
            rep.verdict = Membership::not_member;
            break;
        default:
            rep.verdict = Membership::inconclusive;
            break;
    }
    return rep;
}

MatrixModel::MatrixModel(std::vector<double> eigenvalues)
    : eigenvalues_(std::move(eigenvalues)) {
    if (eigenvalues_.empty())
        throw PreconditionFailed("matrix model needs at least one eigenvalue");
    for (double lam : eigenvalues_) {
        if (!(std::isfinite(lam) && lam >= 0.0))
            throw PreconditionFailed("matrix model eigenvalues must be finite and >= 0");
    }
}

namespace {

void require_dimension(const MatrixModel& m, const Vector& x) {
    if (x.size() != m.dimension())
        throw PreconditionFailed("vector dimension does not match the model");
}

}  // namespace

double sup_norm(const Vector& x) {
    double n = 0.0;
    for (double v : x) n = std::max(n, std::abs(v));
    return n;
}

Vector apply_semigroup(const MatrixModel& m, const Vector& x, double t) {
    if (!(std::isfinite(t) && t >= 0.0))
        throw PreconditionFailed("apply_semigroup requires a finite time >= 0");
    require_dimension(m, x);
    Vector y(x.size());
    for (size_t i = 0; i < x.size(); ++i)
        y[i] = std::exp(-t * m.eigenvalues()[i]) * x[i];
    return y;
}

Vector cesaro_mean(const MatrixModel& m, const Vector& x, double t) {
    require_time(t, "cesaro_mean");
    require_dimension(m, x);
    Vector y(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        const double lam = m.eigenvalues()[i];
        const double factor = lam > 0.0 ? -std::expm1(-t * lam) / (t * lam) : 1.0;
        y[i] = factor * x[i];
    }
    return y;
}

Vector resolvent(const MatrixModel& m, const Vector& x, double lambda) {
    require_time(lambda, "resolvent");
    require_dimension(m, x);
    Vector y(x.size());
    for (size_t i = 0; i < x.size(); ++i) y[i] = x[i] / (lambda + m.eigenvalues()[i]);
    return y;
}

Vector apply_function_spectral(const MatrixModel& m, const Integrand& scalar,
                               const Vector& x) {
    if (!scalar) throw PreconditionFailed("spectral application needs an evaluator");
    require_dimension(m, x);
    Vector y(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        const double v = scalar(m.eigenvalues()[i]);
        if (!std::isfinite(v))
            throw DomainViolation("scalar function is not finite at an eigenvalue");
        y[i] = v * x[i];
    }
    return y;
}

Vector phillips_apply(const MatrixModel& m, const LevyTriple& rep, const Vector& x,
                      double tol) {
    require_dimension(m, x);
    if (!(std::isfinite(rep.a) && rep.a >= 0.0 && std::isfinite(rep.b) && rep.b >= 0.0))
        throw PreconditionFailed("Lévy triple coefficients must be finite and >= 0");
    if (rep.nu && rep.nu->weight() != MeasureWeight::levy)
        throw PreconditionFailed("phillips_apply needs a measure checked against the "
                                 "s/(1+s) weight");
    Vector y(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        const double lam = m.eigenvalues()[i];
        double scalar = rep.a + rep.b * lam;
        if (rep.nu && !rep.nu->is_zero() && lam > 0.0) {
            Kernel k{[lam](double s) { return -std::expm1(-s * lam); }, -1.0, 0.0};
            scalar += integrate_kernel(*rep.nu, k, tol).value;
        }
        y[i] = scalar * x[i];
    }
    return y;
}

Vector cbf_resolvent_apply(const MatrixModel& m, const CompleteBernsteinFunction& f,
                           const Vector& x, double tol) {
    require_dimension(m, x);
    Vector y(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        const double lam = m.eigenvalues()[i];
        double scalar = f.a() + f.b() * lam;
        if (f.measure() && !f.measure()->is_zero() && lam > 0.0) {
            Kernel k{[lam](double r) { return lam / (lam + r); }, 0.0, 1.0};
            scalar += integrate_kernel(*f.measure(), k, tol).value;
        }
        y[i] = scalar * x[i];
    }
    return y;
}

Vector stieltjes_resolvent_apply(const MatrixModel& m, const StieltjesFunction& g,
                                 const Vector& x, double tol) {
    require_dimension(m, x);
    Vector y(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        const double lam = m.eigenvalues()[i];
        if (lam == 0.0 &&
            (g.b() > 0.0 || g.growth_at_zero() > 0.0 || g.slow_factor()))
            throw DomainViolation("g(A) is undefined on the kernel eigenvalue");
        double scalar = g.a();
        if (g.b() > 0.0) scalar += g.b() / lam;
        if (g.measure() && !g.measure()->is_zero()) {
            Kernel k{[lam](double r) { return 1.0 / (lam + r); }, lam == 0.0 ? 1.0 : 0.0,
                     1.0};
            scalar += integrate_kernel(*g.measure(), k, tol).value;
        }
        y[i] = scalar * x[i];
    }
    return y;
}

}  // namespace ergodelab
