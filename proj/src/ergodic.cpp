#include "ergodelab/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ergodelab/errors.hpp"

namespace ergodelab {

namespace {

ClassifyOptions series_options(double tol) {
    ClassifyOptions opt;
    opt.floor_scale = std::max(opt.floor_scale, 2.5 * tol);
    return opt;
}

// A decisive series verdict and a decisive membership verdict may not point
// in opposite directions; anything involving Inconclusive cannot contradict.
bool non_contradictory(Verdict v, Membership m) {
    if (v == Verdict::converges && m == Membership::not_member) return false;
    if (v == Verdict::diverges && m == Membership::member) return false;
    return true;
}

// Partial integrals of fn over [1, 10^(2^k)] for k = 0..max_k, walked in log
// coordinates so mass spread across decades lands on actual panel nodes.
void double_exp_partials(const Integrand& fn, int max_k, double tol,
                         std::vector<double>& schedule,
                         std::vector<double>& partials) {
    const double block_tol = tol / 8.0;
    double total = 0.0;
    double prev_log = 0.0;
    for (int k = 0; k <= max_k; ++k) {
        const double next_log = std::pow(2.0, k) * std::numbers::ln10;
        auto block = [&fn](double ell) {
            const double t = std::exp(ell);
            return fn(t) * t;
        };
        total += integrate(block, Interval{prev_log, next_log}, {}, block_tol).value;
        schedule.push_back(std::pow(10.0, std::pow(2.0, k)));
        partials.push_back(total);
        prev_log = next_log;
    }
}

// integral over s >= 1 of |u(s)| w(s) for a bounded weight w, using the tail
// envelope exactly the way the norm does.
double weighted_element_integral(const L1Element& u, const Integrand& w, double tol) {
    if (u.is_zero()) return 0.0;
    const TailEnvelope& env = u.tail();
    auto f = [&u, &w](double s) { return std::abs(u(s)) * w(s); };
    if (std::isfinite(env.support_end)) {
        if (env.support_end <= 1.0) return 0.0;
        return integrate(f, Interval{1.0, env.support_end}, {}, tol).value;
    }
    if (!(env.power > 1.0))
        throw PreconditionFailed("tail envelope does not certify an integrable element");
    return integrate(f, Interval{1.0, inf}, EndpointHint::upper(env.power - 1.0), tol)
        .value;
}

Membership verdict_to_membership(Verdict v) {
    switch (v) {
        case Verdict::converges: return Membership::member;
        case Verdict::diverges: return Membership::not_member;
        default: return Membership::inconclusive;
    }
}

}  // namespace

std::vector<double> default_time_grid() {
    std::vector<double> grid;
    grid.reserve(21);
    for (int k = 0; k <= 20; ++k)
        grid.push_back(std::ldexp(1.0, k));
    return grid;
}

bool running_sup_settled(std::span<const double> values) {
    if (values.size() <= 5) return true;
    double early = 0.0;
    for (size_t i = 0; i + 5 < values.size(); ++i)
        early = std::max(early, values[i]);
    double final_sup = early;
    for (size_t i = values.size() - 5; i < values.size(); ++i)
        final_sup = std::max(final_sup, values[i]);
    if (final_sup == 0.0) return true;
    if (!(early > 0.0)) return false;
    return final_sup <= 1.05 * early;
}

RateReport direct_rate_check(const L1MultiplicationModel& model,
                             const StieltjesFunction& g, const L1Element& u,
                             std::span<const double> t_grid, double tol) {
    if (t_grid.empty())
        throw PreconditionFailed("rate check needs a nonempty time grid");
    for (double t : t_grid)
        if (!(std::isfinite(t) && t > 0.0))
            throw PreconditionFailed("rate grid times must be positive");
    if (g.is_zero())
        throw PreconditionFailed("rate bound needs a nonzero function");

    MembershipReport mem = membership_diagnostic(model, g, u, tol);
    if (mem.verdict != Membership::member)
        throw PreconditionFailed("direct rate statement needs an element in the domain");

    RateReport rep;
    rep.domain_norm = std::max(0.0, mem.graph_norm - l1_norm(u, tol));
    rep.rows.reserve(t_grid.size());
    bool holds = true;
    for (double t : t_grid) {
        RateRow row;
        row.t = t;
        row.cesaro_norm = cesaro_norm(model, u, t, tol);
        row.bound = 4.0 * rep.domain_norm / eval_stieltjes(g, 1.0 / t, tol);
        row.ratio = row.bound > 0.0 ? row.cesaro_norm / row.bound : 0.0;
        if (row.cesaro_norm > row.bound + tol) holds = false;
        if (row.ratio > rep.max_ratio) {
            rep.max_ratio = row.ratio;
            rep.worst_t = t;
        }
        rep.rows.push_back(row);
    }
    rep.holds = holds;
    return rep;
}

namespace {

IntegralDiagnostic classify_weighted_partials(const Integrand& fn, int max_k,
                                              double tol) {
    IntegralDiagnostic diag;
    double_exp_partials(fn, max_k, tol, diag.schedule, diag.partials);
    SequenceProbe probe = classify_values(diag.partials, series_options(tol));
    diag.verdict = probe.verdict;
    if (probe.verdict == Verdict::converges) diag.value = probe.limit;
    return diag;
}

}  // namespace

IntegralDiagnostic inverse_integral_derivative(const L1MultiplicationModel& model,
                                               const StieltjesFunction& g,
                                               const L1Element& u, double tol) {
    auto fn = [&model, &g, &u, tol](double t) {
        const double slope = eval_stieltjes_derivative(g, 1.0 / t, tol);
        return std::abs(slope) / (t * t) * cesaro_norm(model, u, t, tol);
    };
    IntegralDiagnostic diag = classify_weighted_partials(fn, 6, tol);
    diag.membership = membership_diagnostic(model, g, u, tol).verdict;
    diag.consistent = non_contradictory(diag.verdict, diag.membership);
    return diag;
}

IntegralDiagnostic inverse_integral_value(const L1MultiplicationModel& model,
                                          const StieltjesFunction& g,
                                          const L1Element& u, double tol) {
    auto fn = [&model, &g, &u, tol](double t) {
        return eval_stieltjes(g, 1.0 / t, tol) / t * cesaro_norm(model, u, t, tol);
    };
    IntegralDiagnostic diag = classify_weighted_partials(fn, 6, tol);
    diag.membership = membership_diagnostic(model, g, u, tol).verdict;
    diag.consistent = non_contradictory(diag.verdict, diag.membership);
    return diag;
}

IntegralDiagnostic inverse_integral_from_callables(const Integrand& weight,
                                                   const Integrand& norm, int max_k,
                                                   double tol) {
    if (!weight || !norm)
        throw PreconditionFailed("callable diagnostic needs both a weight and a norm");
    if (max_k < 2 || max_k > 8)
        throw PreconditionFailed("schedule exponent must lie in [2, 8]");
    auto fn = [&weight, &norm](double t) { return weight(t) * norm(t); };
    IntegralDiagnostic diag = classify_weighted_partials(fn, max_k, tol);
    diag.consistent = true;  // no membership route attached
    return diag;
}

SupReport logpower_rate_test(const L1MultiplicationModel& model,
                             const StieltjesFunction& g, const L1Element& u,
                             double alpha, double tol) {
    if (!(std::isfinite(alpha) && alpha > 0.0 && alpha <= 8.0))
        throw PreconditionFailed("log exponent must lie in (0, 8]");
    if (g.is_zero())
        throw PreconditionFailed("sup test needs a nonzero function");
    SupReport rep;
    rep.alpha = alpha;
    rep.t = default_time_grid();
    rep.product.reserve(rep.t.size());
    for (double t : rep.t) {
        const double gv = eval_stieltjes(g, 1.0 / t, tol);
        const double lf = std::pow(std::log(2.0 + gv), 1.0 + alpha);
        rep.product.push_back(cesaro_norm(model, u, t, tol) * gv * lf);
    }
    rep.norm_product_sup = *std::max_element(rep.product.begin(), rep.product.end());
    rep.bounded = running_sup_settled(rep.product);
    rep.membership = membership_diagnostic(model, g, u, tol).verdict;
    rep.consistent = !(rep.bounded && rep.membership == Membership::not_member);
    return rep;
}

HirschReport hirsch_probe(const L1MultiplicationModel& model,
                          const StieltjesFunction& g, const L1Element& u, double tol) {
    if (!g.measure() || g.measure()->is_zero())
        throw PreconditionFailed("truncation probe needs a nonzero measure part");
    HirschReport rep;
    const RadonMeasure& mu = *g.measure();
    double sum = 0.0;
    for (int k = 1; k <= 20; ++k)
        rep.deltas.push_back(std::ldexp(1.0, -k));
    for (int k = 1; k <= 19; ++k) {
        const double hi = std::ldexp(1.0, -k);
        const double lo = std::ldexp(1.0, -(k + 1));
        auto gap_weight = [&mu, lo, hi, tol](double s) {
            Kernel kernel{[s](double r) { return s / (1.0 + r * s); }, 0.0, 1.0};
            return integrate_kernel_window(mu, kernel, lo, hi, tol).value;
        };
        const double gap = weighted_element_integral(u, gap_weight, tol);
        sum += gap;
        rep.differences.push_back(gap);
        rep.partials.push_back(sum);
    }
    SequenceProbe probe = classify_values(rep.partials, series_options(tol));
    rep.verdict = probe.verdict;
    rep.membership = membership_diagnostic(model, g, u, tol).verdict;
    rep.consistent = non_contradictory(rep.verdict, rep.membership);
    return rep;
}

ExtraDomainReport extra_domain_check(const L1MultiplicationModel& model,
                                     const StieltjesFunction& g,
                                     const CompleteBernsteinFunction& q,
                                     const L1Element& u, double tol) {
    if (q.a() != 0.0)
        throw PreconditionFailed("composition factor must vanish at zero");
    if (q.b() != 0.0)
        throw PreconditionFailed("composition factor must have no linear part");
    if (!q.measure() || q.measure()->is_zero())
        throw PreconditionFailed("composition factor must not be identically zero");

    ExtraDomainReport rep;
    rep.q_at_zero = eval_cbf(q, std::ldexp(1.0, -30), tol);
    const double p = q.power_at_inf();
    if (!(p < 1.0))
        throw PreconditionFailed("composition factor grows too fast for the tail "
                                 "condition");
    auto tail_integrand = [&q, tol](double tau) {
        return eval_cbf(q, tau, tol) / (tau * tau);
    };
    rep.q_tail =
        integrate(tail_integrand, Interval{1.0, inf}, EndpointHint::upper(1.0 - p), tol)
            .value;

    rep.t = default_time_grid();
    rep.product.reserve(rep.t.size());
    for (double t : rep.t)
        rep.product.push_back(cesaro_norm(model, u, t, tol) *
                              eval_stieltjes(g, 1.0 / t, tol));
    rep.decay_certified = running_sup_settled(rep.product);

    rep.composed_membership = membership_diagnostic(model, compose(q, g, tol), u, tol)
                                  .verdict;
    rep.holds = !(rep.decay_certified &&
                  rep.composed_membership == Membership::not_member);
    return rep;
}

MeanCharacterizationReport mean_characterization(const L1MultiplicationModel& model,
                                                 const StieltjesFunction& g,
                                                 const L1Element& u, double tol) {
    if (g.a() != 0.0 || g.b() != 0.0 || g.is_zero())
        throw PreconditionFailed("characterization needs a pure-integral function");

    MeanCharacterizationReport rep;
    for (int k = 0; k <= 6; ++k) {
        const double t = std::pow(10.0, k);
        rep.decay_schedule.push_back(t);
        rep.decay_values.push_back(t * laplace_density(g, t, tol) *
                                   cesaro_norm(model, u, t, tol));
    }
    SequenceProbe decay = classify_values(rep.decay_values, series_options(tol));
    double peak = 0.0;
    for (double v : rep.decay_values) peak = std::max(peak, std::abs(v));
    rep.decay_condition = decay.verdict == Verdict::converges && decay.limit &&
                          std::abs(*decay.limit) <= std::max(100.0 * tol, 0.02 * peak);

    const double gamma = g.growth_at_zero();
    double sum = 0.0;
    const double block_tol = tol / 8.0;
    for (int k = 0; k <= 6; ++k) {
        const double lo = k == 0 ? 0.0 : std::pow(10.0, k - 1);
        const double hi = std::pow(10.0, k);
        auto block = [&model, &g, &u, tol](double sigma) {
            const double slope = laplace_density_derivative(g, sigma, tol);
            return std::abs(slope) * sigma * cesaro_norm(model, u, sigma, tol);
        };
        EndpointHint hint;
        if (k == 0 && gamma > 0.0) hint.singularity = 1.0 - gamma;
        sum += integrate(block, Interval{lo, hi}, hint, block_tol).value;
        rep.block_partials.push_back(sum);
    }
    SequenceProbe blocks = classify_values(rep.block_partials, series_options(tol));
    rep.block_verdict = blocks.verdict;

    rep.membership = membership_diagnostic(model, g, u, tol).verdict;
    const bool surely_true =
        rep.decay_condition && rep.block_verdict == Verdict::converges;
    const bool surely_false =
        !rep.decay_condition || rep.block_verdict == Verdict::diverges;
    rep.consistent = !(surely_true && rep.membership == Membership::not_member) &&
                     !(surely_false && rep.membership == Membership::member);
    return rep;
}

FractionalReport fractional_criterion(const L1MultiplicationModel& model,
                                      const L1Element& u, double alpha, double tol) {
    if (!(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0))
        throw PreconditionFailed("fractional exponent must lie in (0, 1)");
    FractionalReport rep;
    rep.alpha = alpha;
    double sum = 0.0;
    const double block_tol = tol / 8.0;
    for (int k = 0; k <= 6; ++k) {
        const double lo = k == 0 ? 0.0 : std::pow(10.0, k - 1);
        const double hi = std::pow(10.0, k);
        auto block = [&model, &u, alpha, tol](double sigma) {
            return std::pow(sigma, alpha - 1.0) * cesaro_norm(model, u, sigma, tol);
        };
        EndpointHint hint;
        if (k == 0) hint.singularity = 1.0 - alpha;
        sum += integrate(block, Interval{lo, hi}, hint, block_tol).value;
        rep.schedule.push_back(hi);
        rep.partials.push_back(sum);
    }
    SequenceProbe probe = classify_values(rep.partials, series_options(tol));
    rep.partials_verdict = probe.verdict;
    rep.membership =
        membership_diagnostic(model, builtins::power(alpha), u, tol).verdict;
    rep.consistent = non_contradictory(rep.partials_verdict, rep.membership);
    return rep;
}

AveragingReport averaging_condition_check(const StieltjesFunction& g, double tol) {
    if (g.is_zero())
        throw PreconditionFailed("averaging check needs a nonzero function");
    const double gamma = g.growth_at_zero();
    if (g.b() > 0.0 || gamma >= 1.0)
        throw Inconclusive("function is not integrable near zero");

    AveragingReport rep;
    auto gval = [&g, tol](double tau) { return eval_stieltjes(g, tau, tol); };
    EndpointHint head_hint;
    if (gamma > 0.0) head_hint.singularity = gamma;
    for (int k = 0; k <= 20; ++k) {
        const double t = std::ldexp(1.0, -k);
        const double head = integrate(gval, Interval{0.0, t}, head_hint, tol).value;
        const double at_t = gval(t);
        double tail = 0.0;
        if (t < 1.0) {
            auto weighted = [&gval](double tau) { return gval(tau) / tau; };
            tail = integrate(weighted, Interval{t, 1.0}, {}, tol).value;
        }
        rep.t.push_back(t);
        rep.mean_ratios.push_back(head / t / at_t);
        rep.tail_ratios.push_back((head / t + tail) / at_t);
    }
    rep.mean_constant = *std::max_element(rep.mean_ratios.begin(),
                                          rep.mean_ratios.end());
    rep.tail_constant = *std::max_element(rep.tail_ratios.begin(),
                                          rep.tail_ratios.end());
    rep.mean_condition = running_sup_settled(rep.mean_ratios);
    rep.tail_condition = running_sup_settled(rep.tail_ratios);
    return rep;
}

CounterexampleBundle counterexample_build(const StieltjesFunction& g,
                                          const SlowlyVaryingFunction& eps,
                                          double tol) {
    const double gamma = g.growth_at_zero();
    if (!(gamma > 0.0))
        throw PreconditionFailed("witness construction needs a power-type blow-up at "
                                 "zero");
    if (eps.domain_start() > 10.0)
        throw PreconditionFailed("slow factor must be defined from moderate arguments "
                                 "on");

    // The construction only tolerates factors that barely move under a power
    // of the argument; sample the band before committing to any quadrature.
    const double band_power = 0.875;
    for (double tau = 16.0; tau <= 1e24; tau *= 100.0) {
        const double ratio = eps(std::pow(tau, band_power)) / eps(tau);
        if (!(ratio >= 0.25 && ratio <= 4.0))
            throw PreconditionFailed("slow factor varies too fast for the witness "
                                     "construction");
    }

    const double g1 = eval_stieltjes(g, 1.0, tol);
    if (!(eps(g1) > 0.0))
        throw PreconditionFailed("slow factor must be positive from g(1) on");

    CounterexampleBundle bundle;
    auto yfn = [g, eps, tol](double s) {
        const double z = 1.0 / s;
        const double gv = eval_stieltjes(g, z, tol);
        const double slope = -eval_stieltjes_derivative(g, z, tol);
        return slope / (s * s * gv * gv * eps(gv));
    };
    TailEnvelope env;
    env.power = 1.0 + gamma;
    if (eps.name() == "log") {
        env.log_power = 1.0;
    } else if (eps.name() == "logpow") {
        env.log_power = eps.params().at(0);
    } else if (eps.name() == "loglog") {
        env.log_power = 1.0;
        env.loglog_power = 1.0;
    }
    bundle.witness = L1Element(yfn, env);

    bundle.witness_norm = l1_norm(bundle.witness, tol);
    auto exact_integrand = [&eps](double tau) {
        return 1.0 / (tau * tau * eps(tau));
    };
    bundle.norm_exact =
        integrate(exact_integrand, Interval{g1, inf}, EndpointHint::upper(1.0), tol)
            .value;

    auto log_criterion = [&eps](double ell) { return 1.0 / eps.at_log(ell); };
    SequenceProbe exact =
        classify_slow_tail(log_criterion, std::log(g1), 64, tol);
    bundle.exact_series = exact.verdict;
    const Membership by_criterion = verdict_to_membership(exact.verdict);

    const L1MultiplicationModel model{};
    bundle.diagnostic_verdict =
        membership_diagnostic(model, g, bundle.witness, tol).verdict;

    if (by_criterion == bundle.diagnostic_verdict) {
        bundle.membership = by_criterion;
    } else if (by_criterion == Membership::inconclusive) {
        bundle.membership = bundle.diagnostic_verdict;
    } else if (bundle.diagnostic_verdict == Membership::inconclusive) {
        bundle.membership = by_criterion;
    } else {
        bundle.membership = Membership::inconclusive;
    }

    bundle.t = default_time_grid();
    bundle.product.reserve(bundle.t.size());
    for (double t : bundle.t) {
        const double gv = eval_stieltjes(g, 1.0 / t, tol);
        bundle.product.push_back(Nt_norm(bundle.witness, t, tol) * gv * eps(gv));
    }
    bundle.product_sup =
        *std::max_element(bundle.product.begin(), bundle.product.end());
    bundle.product_bounded = running_sup_settled(bundle.product);
    return bundle;
}

FloorWeight floor_weight_log() {
    return FloorWeight{
        [](double t) { return std::log1p(t); },
        [](double ell) {
            return ell > 1.0 ? ell + std::log1p(std::exp(-ell))
                             : std::log1p(std::exp(ell));
        },
        "log"};
}

FloorWeight floor_weight_identity() {
    return FloorWeight{[](double t) { return t; },
                       [](double ell) { return std::exp(ell); }, "identity"};
}

FloorWeight floor_weight(const SlowlyVaryingFunction& eps) {
    return FloorWeight{[eps](double t) { return eps(t); },
                       [eps](double ell) { return eps.at_log(ell); }, eps.name()};
}

double floor_partial(const L1MultiplicationModel& model, const L1Element& u,
                     const FloorWeight& phi, double T, double tol) {
    if (!(std::isfinite(T) && T >= 1.0))
        throw PreconditionFailed("floor partial needs T >= 1");
    if (!phi.fn || !phi.log_form)
        throw PreconditionFailed("floor weight needs both evaluation forms");
    if (T == 1.0 || u.is_zero()) return 0.0;
    auto block = [&model, &u, &phi, tol](double ell) {
        const double t = std::exp(ell);
        return cesaro_norm(model, u, t, tol) / phi.log_form(ell) * t;
    };
    return integrate(block, Interval{0.0, std::log(T)}, {}, tol).value;
}

FloorReport appendix_floor_check(const L1MultiplicationModel& model,
                                 const L1Element& u, const FloorWeight& phi,
                                 double tol) {
    if (u.is_zero())
        throw PreconditionFailed("floor statement needs a nonzero element");
    if (!phi.fn || !phi.log_form)
        throw PreconditionFailed("floor weight needs both evaluation forms");
    double prev = 0.0;
    for (double t : default_time_grid()) {
        const double v = phi.fn(t);
        if (!(std::isfinite(v) && v > 0.0))
            throw PreconditionFailed("floor weight must be positive");
        if (v < prev * (1.0 - 1e-12))
            throw PreconditionFailed("floor weight must be nondecreasing");
        prev = v;
    }

    FloorReport rep;
    auto reciprocal = [&phi](double ell) { return 1.0 / phi.log_form(ell); };
    rep.phi_series = classify_slow_tail(reciprocal, 0.0, 64, tol).verdict;
    rep.applicable = rep.phi_series == Verdict::diverges;
    if (!rep.applicable) {
        rep.holds = true;  // the statement asks nothing of this weight
        return rep;
    }

    // Truncations stop at 1e128: a decaying element evaluated pointwise
    // runs out of exponent range a few decades further, and the averaged
    // norm needs samples near s ~ t.
    const double block_tol = tol / 8.0;
    double total = 0.0;
    double prev_log = 0.0;
    for (int k = 0; k <= 7; ++k) {
        const double next_log = std::pow(2.0, k) * std::numbers::ln10;
        auto block = [&model, &u, &phi, tol](double ell) {
            const double t = std::exp(ell);
            return cesaro_norm(model, u, t, tol) / phi.log_form(ell) * t;
        };
        total += integrate(block, Interval{prev_log, next_log}, {}, block_tol).value;
        rep.schedule.push_back(std::pow(10.0, std::pow(2.0, k)));
        rep.partials.push_back(total);
        prev_log = next_log;
    }
    rep.integral_verdict = classify_values(rep.partials, series_options(tol)).verdict;
    rep.holds = rep.integral_verdict == Verdict::diverges;
    return rep;
}

}  // namespace ergodelab
