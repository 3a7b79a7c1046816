#include "ergodelab/selftest.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ergodelab/ergodic.hpp"
#include "ergodelab/errors.hpp"
#include "ergodelab/measure.hpp"
#include "ergodelab/models.hpp"
#include "ergodelab/serialize.hpp"
#include "ergodelab/stieltjes.hpp"

namespace ergodelab {

namespace {

// A check returns nullopt to pass or a short detail string to fail.
using Check = std::function<std::optional<std::string>()>;

std::optional<std::string> pass() { return std::nullopt; }

std::optional<std::string> fail(const std::string& detail) { return detail; }

double rel_gap(double got, double want) {
    const double scale = std::max(std::abs(want), 1e-300);
    return std::abs(got - want) / scale;
}

std::string gap_detail(const char* what, double got, double want) {
    return std::string(what) + " = " + format_double(got) + ", expected " +
           format_double(want);
}

std::optional<std::string> expect_close(const char* what, double got, double want,
                                        double rel) {
    if (rel_gap(got, want) <= rel) return pass();
    return fail(gap_detail(what, got, want));
}

std::optional<std::string> quad_known_integrals(double tol) {
    auto decay = [](double x) { return std::exp(-x); };
    if (auto r = expect_close("integral of e^-x", integrate(decay, {0.0, inf},
                                                             EndpointHint::upper(exp_decay), tol)
                                                      .value,
                              1.0, 1e-6))
        return r;
    auto root = [](double x) { return 1.0 / std::sqrt(x); };
    if (auto r = expect_close("integral of x^-1/2 on (0,1)",
                              integrate(root, {0.0, 1.0}, EndpointHint::lower(0.5), tol).value,
                              2.0, 1e-6))
        return r;
    auto cauchy = [](double x) { return 1.0 / ((1.0 + x) * (1.0 + x)); };
    return expect_close("integral of (1+x)^-2",
                        integrate(cauchy, {0.0, inf}, EndpointHint::upper(1.0), tol).value,
                        1.0, 1e-6);
}

std::optional<std::string> quad_classification(double) {
    std::vector<double> geometric, arithmetic;
    double g = 0.0, a = 0.0;
    for (int k = 0; k < 16; ++k) {
        g += std::pow(0.5, k);
        a += 1.0;
        geometric.push_back(g);
        arithmetic.push_back(a);
    }
    SequenceProbe converging = classify_values(geometric);
    if (converging.verdict != Verdict::converges || !converging.limit)
        return fail("geometric partial sums did not classify as convergent");
    if (auto r = expect_close("geometric limit", *converging.limit, 2.0, 1e-9)) return r;
    if (classify_values(arithmetic).verdict != Verdict::diverges)
        return fail("arithmetic partial sums did not classify as divergent");
    return pass();
}

std::optional<std::string> measure_admissibility(double tol) {
    auto atom = check_admissible({Atom{1.0, 1.0}}, std::nullopt,
                                 MeasureWeight::stieltjes, tol);
    if (!atom.finite) return fail("single atom read as non-admissible");
    if (auto r = expect_close("atom admissibility", atom.value, 0.5, 1e-9)) return r;

    auto beta = check_admissible({}, make_density("power", {0.5}),
                                 MeasureWeight::stieltjes, tol);
    if (!beta.finite) return fail("s^-1/2 density read as non-admissible");
    if (auto r = expect_close("Beta integral", beta.value, std::acos(-1.0), 1e-6)) return r;

    Density lebesgue;
    lebesgue.fn = [](double) { return 1.0; };
    auto flat = check_admissible({}, lebesgue, MeasureWeight::stieltjes, tol);
    if (flat.finite) return fail("Lebesgue density read as admissible");
    return pass();
}

std::optional<std::string> measure_kernel_rules(double tol) {
    const std::vector<Atom> atoms{Atom{1.0, 2.0}};
    RadonMeasure mixed(atoms, make_density("stieltjes-log", {}));
    RadonMeasure atoms_only(atoms, std::nullopt);
    RadonMeasure density_only({}, make_density("stieltjes-log", {}));

    Kernel narrow{[](double s) { return 1.0 / ((1.0 + s) * (1.0 + s)); }, 0.0, 2.0};
    Kernel wide{[](double s) { return 1.0 / (1.0 + s); }, 0.0, 1.0};

    const double lo = integrate_kernel(mixed, narrow, tol).value;
    const double hi = integrate_kernel(mixed, wide, tol).value;
    if (lo < -tol) return fail("nonnegative kernel integrated to " + format_double(lo));
    if (lo > hi + 2.0 * tol)
        return fail("kernel monotonicity inverted: " + format_double(lo) + " > " +
                    format_double(hi));

    const double split = integrate_kernel(atoms_only, narrow, tol).value +
                         integrate_kernel(density_only, narrow, tol).value;
    return expect_close("atom plus density split", split, lo, 1e-8);
}

std::optional<std::string> stieltjes_closed_forms(double tol) {
    for (const auto& entry : builtins::stieltjes_suite()) {
        for (double z : {0.01, 1.0, 100.0}) {
            const double got = eval_stieltjes(entry.g, z, tol);
            const double want = entry.closed_form(z);
            if (rel_gap(got, want) > 1e-6)
                return fail(entry.name + "(" + format_double(z) + ") = " +
                            format_double(got) + ", closed form " + format_double(want));
        }
    }
    return pass();
}

std::optional<std::string> stieltjes_duality(double tol) {
    const std::vector<double> grid{0.25, 0.5, 1.0, 2.0, 4.0};
    for (const StieltjesFunction& g : {builtins::power(0.5), builtins::log_ratio()}) {
        CompleteBernsteinFunction h = dual(g);
        for (double z : {0.1, 1.0, 10.0}) {
            const double lhs = eval_cbf(h, z, tol);
            const double rhs = z * eval_stieltjes(g, z, tol);
            if (rel_gap(lhs, rhs) > 1e-7)
                return fail("dual mismatch at z = " + format_double(z) + ": " +
                            format_double(lhs) + " vs " + format_double(rhs));
        }
        const double violation = duality_check(g, grid, tol).max_violation();
        if (violation > 1e-7)
            return fail("structural duality violation " + format_double(violation));
    }
    return pass();
}

std::optional<std::string> stieltjes_inequalities(double tol) {
    CompleteBernsteinFunction f = dual(builtins::power(0.5));
    for (int k = 0; k < 20; ++k) {
        const double t = 1e-3 * std::pow(2.0, k);
        BoundPair pair = cesaro_symbol_bound(f, t, tol);
        if (pair.lhs > pair.rhs + 1e-9)
            return fail("averaging symbol exceeded its cap at t = " + format_double(t));

        const double tau = 1e-3 * std::pow(2.0, k);
        if (tau * std::exp(-tau) > 4.0 / ((1.0 + tau) * (1.0 + tau)) + 1e-9)
            return fail("tau e^-tau cap failed at tau = " + format_double(tau));
    }
    for (const StieltjesFunction& g : {builtins::power(0.5), builtins::log_ratio()}) {
        for (int k = 0; k < 20; ++k) {
            const double tau = 1e-3 * std::pow(2.0, k);
            const double slope = std::abs(eval_stieltjes_derivative(g, tau, tol));
            const double cap = eval_stieltjes(g, tau, tol) / tau;
            if (slope > cap + 1e-9)
                return fail("derivative cap failed at tau = " + format_double(tau));
        }
    }
    StieltjesFunction half = builtins::power(0.5);
    for (int k = 0; k < 20; ++k) {
        const double s = 1e-2 * std::pow(2.0, k);
        const double lhs = s * laplace_density(half, s, tol);
        const double rhs = eval_stieltjes(half, 1.0 / s, tol);
        if (lhs > rhs + 1e-9)
            return fail("Laplace density cap failed at s = " + format_double(s));
    }
    return pass();
}

std::optional<std::string> stieltjes_laplace(double tol) {
    StieltjesFunction half = builtins::power(0.5);
    const double root_pi = std::sqrt(std::acos(-1.0));
    if (auto r = expect_close("m(1)", laplace_density(half, 1.0, tol), 1.0 / root_pi, 1e-6))
        return r;
    if (auto r = expect_close("m(4)", laplace_density(half, 4.0, tol),
                              1.0 / (2.0 * root_pi), 1e-6))
        return r;
    return expect_close("m'(1)", laplace_density_derivative(half, 1.0, tol),
                        -1.0 / (2.0 * root_pi), 1e-6);
}

std::optional<std::string> stieltjes_limits(double tol) {
    LimitsReport power_limits = limits(builtins::power(0.5), tol);
    if (std::abs(power_limits.a_estimate) > 1e-6 ||
        std::abs(power_limits.b_estimate) > 1e-6 || !std::isinf(power_limits.g_at_zero))
        return fail("z^-1/2 limits misread");
    StieltjesFunction resolvent_like(0.0, 0.0, RadonMeasure::point_mass(1.0, 1.0));
    LimitsReport atom_limits = limits(resolvent_like, tol);
    if (std::abs(atom_limits.a_estimate) > 1e-8 || std::abs(atom_limits.b_estimate) > 1e-8)
        return fail("atom function limits misread");
    return expect_close("1/(z+1) at 0", atom_limits.g_at_zero, 1.0, 1e-6);
}

std::optional<std::string> models_semigroup(double) {
    const L1MultiplicationModel model{};
    L1Element u = make_element("power", {2.0});
    L1Element same = apply_semigroup(model, u, 0.0);
    L1Element split = apply_semigroup(model, apply_semigroup(model, u, 2.0), 3.0);
    L1Element direct = apply_semigroup(model, u, 5.0);
    for (double s : {1.5, 4.0, 40.0}) {
        if (rel_gap(same(s), u(s)) > 1e-12)
            return fail("T(0) moved the element at s = " + format_double(s));
        if (rel_gap(split(s), direct(s)) > 1e-12)
            return fail("T(2)T(3) differs from T(5) at s = " + format_double(s));
    }
    MatrixModel matrix({0.1, 1.0, 4.0, 10.0});
    Vector averaged = cesaro_mean(matrix, Vector{1.0, 1.0, 1.0, 1.0}, 2.0);
    for (size_t i = 0; i < averaged.size(); ++i) {
        const double lambda = matrix.eigenvalues()[i];
        const double want = -std::expm1(-lambda * 2.0) / (lambda * 2.0);
        if (rel_gap(averaged[i], want) > 1e-12)
            return fail("matrix average off at eigenvalue " + format_double(lambda));
    }
    return pass();
}

std::optional<std::string> models_three_routes(double tol) {
    MatrixModel matrix({0.1, 1.0, 4.0, 10.0});
    const Vector x{1.0, 1.0, 1.0, 1.0};

    Vector spectral_root = apply_function_spectral(
        matrix, [](double z) { return std::sqrt(z); }, x);
    Vector phillips_root = phillips_apply(matrix, builtins::levy_power(0.5), x, tol);
    Vector resolvent_root = cbf_resolvent_apply(matrix, builtins::cbf_power(0.5), x, tol);
    for (size_t i = 0; i < x.size(); ++i) {
        if (rel_gap(phillips_root[i], spectral_root[i]) > 1e-6)
            return fail("Phillips route off at entry " + std::to_string(i));
        if (rel_gap(resolvent_root[i], spectral_root[i]) > 1e-6)
            return fail("resolvent route off at entry " + std::to_string(i));
    }

    Vector spectral_inv = apply_function_spectral(
        matrix, [](double z) { return 1.0 / std::sqrt(z); }, x);
    Vector stieltjes_inv = stieltjes_resolvent_apply(matrix, builtins::power(0.5), x, tol);
    for (size_t i = 0; i < x.size(); ++i)
        if (rel_gap(stieltjes_inv[i], spectral_inv[i]) > 1e-6)
            return fail("Stieltjes route off at entry " + std::to_string(i));
    return pass();
}

std::optional<std::string> models_norm_sandwich(double tol) {
    const L1MultiplicationModel model{};
    const double slack = 2.0 * tol;
    const std::vector<L1Element> elements{make_element("window", {1.0, 2.0}),
                                          make_element("power", {2.0}),
                                          make_element("power", {1.2})};
    for (const L1Element& u : elements) {
        const double full = l1_norm(u, tol);
        for (double t : {1.0, 8.0, 64.0}) {
            NormSnapshot snap = norm_snapshot(model, u, t, tol);
            const double lower_factor = 1.0 - std::exp(-1.0);
            if (snap.cesaro_norm < lower_factor * snap.nt_norm - slack ||
                snap.cesaro_norm > snap.nt_norm + slack)
                return fail("average/N_t sandwich failed at t = " + format_double(t));
            if (snap.nt_norm < full / t - slack || snap.nt_norm > full + slack)
                return fail("N_t/norm sandwich failed at t = " + format_double(t));
        }
    }
    return pass();
}

std::optional<std::string> models_membership(double tol) {
    const L1MultiplicationModel model{};
    StieltjesFunction half = builtins::power(0.5);
    if (membership_diagnostic(model, half, make_element("power", {2.0}), tol).verdict !=
        Membership::member)
        return fail("s^-2 misread outside the domain");
    if (membership_diagnostic(model, half, make_element("power", {1.2}), tol).verdict !=
        Membership::not_member)
        return fail("s^-1.2 misread inside the domain");
    if (membership_diagnostic(model, half, make_element("window", {1.0, 3.0}), tol).verdict !=
        Membership::member)
        return fail("compactly supported element misread outside the domain");
    return pass();
}

std::optional<std::string> ergodic_direct_rate(double tol) {
    const L1MultiplicationModel model{};
    RateReport report = direct_rate_check(model, builtins::power(0.5),
                                          make_element("window", {1.0, 2.0}),
                                          default_time_grid(), tol);
    if (!report.holds)
        return fail("rate bound violated at t = " + format_double(report.worst_t) +
                    " with ratio " + format_double(report.max_ratio));
    if (report.max_ratio > 1.0)
        return fail("ratio above one: " + format_double(report.max_ratio));
    return pass();
}

std::optional<std::string> ergodic_inverse(double tol) {
    const L1MultiplicationModel model{};
    StieltjesFunction half = builtins::power(0.5);
    L1Element inside = make_element("power", {2.0});
    L1Element outside = make_element("power", {1.2});

    IntegralDiagnostic d_in = inverse_integral_derivative(model, half, inside, tol);
    IntegralDiagnostic v_in = inverse_integral_value(model, half, inside, tol);
    if (d_in.verdict != Verdict::converges || !d_in.consistent)
        return fail("derivative-weight integral misread for a domain element");
    if (v_in.verdict != Verdict::converges || !v_in.consistent)
        return fail("value-weight integral misread for a domain element");

    IntegralDiagnostic d_out = inverse_integral_derivative(model, half, outside, tol);
    IntegralDiagnostic v_out = inverse_integral_value(model, half, outside, tol);
    if (d_out.verdict != Verdict::diverges || d_out.membership != Membership::not_member)
        return fail("derivative-weight integral misread for an outside element");
    if (v_out.verdict != Verdict::diverges || v_out.membership != Membership::not_member)
        return fail("value-weight integral misread for an outside element");
    return pass();
}

std::optional<std::string> ergodic_hirsch(double tol) {
    const L1MultiplicationModel model{};
    StieltjesFunction half = builtins::power(0.5);
    HirschReport in = hirsch_probe(model, half, make_element("power", {2.0}), tol);
    if (in.verdict != Verdict::converges || !in.consistent)
        return fail("truncated-measure probe misread a domain element");
    HirschReport out = hirsch_probe(model, half, make_element("power", {1.2}), tol);
    if (out.verdict != Verdict::diverges || out.membership != Membership::not_member)
        return fail("truncated-measure probe misread an outside element");
    return pass();
}

std::optional<std::string> ergodic_mean_characterization(double tol) {
    const L1MultiplicationModel model{};
    StieltjesFunction half = builtins::power(0.5);
    MeanCharacterizationReport in =
        mean_characterization(model, half, make_element("window", {1.0, 2.0}), tol);
    if (!in.decay_condition || in.block_verdict != Verdict::converges || !in.consistent)
        return fail("Laplace characterization misread a domain element");
    MeanCharacterizationReport out =
        mean_characterization(model, half, make_element("power", {1.2}), tol);
    if (out.decay_condition && out.block_verdict == Verdict::converges)
        return fail("Laplace characterization misread an outside element");
    return pass();
}

std::optional<std::string> ergodic_fractional(double tol) {
    const L1MultiplicationModel model{};
    FractionalReport in = fractional_criterion(model, make_element("power", {2.0}), 0.5, tol);
    if (in.partials_verdict != Verdict::converges || in.membership != Membership::member)
        return fail("fractional criterion misread a domain element");
    FractionalReport out = fractional_criterion(model, make_element("power", {1.2}), 0.5, tol);
    if (out.partials_verdict != Verdict::diverges || out.membership != Membership::not_member)
        return fail("fractional criterion misread an outside element");
    return pass();
}

std::optional<std::string> ergodic_averaging(double tol) {
    AveragingReport power_report = averaging_condition_check(builtins::power(0.5), tol);
    if (!power_report.mean_condition || !power_report.tail_condition)
        return fail("z^-1/2 averaging conditions misread");
    for (double ratio : power_report.mean_ratios)
        if (rel_gap(ratio, 2.0) > 1e-6)
            return fail("z^-1/2 mean ratio drifted to " + format_double(ratio));
    AveragingReport log_report = averaging_condition_check(builtins::log_ratio(), tol);
    if (!log_report.mean_condition)
        return fail("log z/(z-1) mean condition misread");
    if (log_report.tail_condition)
        return fail("log z/(z-1) tail condition misread as holding");
    return pass();
}

std::optional<std::string> ergodic_counterexample(double tol) {
    CounterexampleBundle bundle =
        counterexample_build(builtins::power(0.5), builtins::eps_log(), tol);
    if (bundle.membership != Membership::not_member)
        return fail("log witness misread as a domain member");
    if (!bundle.product_bounded)
        return fail("log witness product failed to stay bounded");
    if (auto r = expect_close("witness norm routes", bundle.witness_norm,
                              bundle.norm_exact, 1e-4))
        return r;
    CounterexampleBundle squared =
        counterexample_build(builtins::power(0.5), builtins::eps_log_power(2.0), tol);
    if (squared.membership != Membership::member)
        return fail("squared-log witness misread outside the domain");
    return pass();
}

std::optional<std::string> ergodic_floor(double tol) {
    const L1MultiplicationModel model{};
    L1Element u = make_element("power", {1.3});
    FloorReport log_report = appendix_floor_check(model, u, floor_weight_log(), tol);
    if (!log_report.applicable)
        return fail("log weight misread as inadmissible for the floor statement");
    if (log_report.integral_verdict != Verdict::diverges || !log_report.holds)
        return fail("floor integral misread as finite");
    for (size_t i = 1; i < log_report.partials.size(); ++i)
        if (log_report.partials[i] < log_report.partials[i - 1] - 1e-9)
            return fail("floor partials decreased");
    FloorReport identity_report =
        appendix_floor_check(model, u, floor_weight_identity(), tol);
    if (identity_report.applicable || !identity_report.holds)
        return fail("identity weight misread as admissible");
    return pass();
}

std::optional<std::string> serialize_round_trip(double tol) {
    StieltjesFunction half = builtins::power(0.5);
    const std::string doc = to_json(half);
    StieltjesFunction revived = stieltjes_from_json(doc);
    if (auto r = expect_close("revived builtin at 0.7", eval_stieltjes(revived, 0.7, tol),
                              eval_stieltjes(half, 0.7, tol), 1e-12))
        return r;
    if (to_json(revived) != doc) return fail("builtin round trip changed the document");

    StieltjesFunction assembled(
        0.25, 0.0,
        RadonMeasure({Atom{1.0, 2.0}}, make_density("stieltjes-log", {})));
    const std::string triple = to_json(assembled);
    StieltjesFunction revived_triple = stieltjes_from_json(triple);
    if (to_json(revived_triple) != triple)
        return fail("triple round trip changed the document");
    if (auto r = expect_close("revived triple at 2", eval_stieltjes(revived_triple, 2.0, tol),
                              eval_stieltjes(assembled, 2.0, tol), 1e-12))
        return r;

    for (double x : {1.0 / 3.0, 0.1, 1e256, -2.5e-30, 0.0}) {
        const std::string text = format_double(x);
        if (std::strtod(text.c_str(), nullptr) != x)
            return fail("format_double did not round trip " + text);
    }

    CsvTable table({"name", "value"});
    table.row({"plain", "1"}).row({"with,comma", "quote\"inside"});
    const std::string want = "name,value\nplain,1\n\"with,comma\",\"quote\"\"inside\"\n";
    if (table.str() != want) return fail("csv text diverged from the expected form");
    return pass();
}

}  // namespace

SelftestResult run_selftest(double tol) {
    const std::vector<std::pair<const char*, Check>> checks{
        {"quad.known-integrals", [tol] { return quad_known_integrals(tol); }},
        {"quad.classification", [tol] { return quad_classification(tol); }},
        {"measure.admissibility", [tol] { return measure_admissibility(tol); }},
        {"measure.kernel-rules", [tol] { return measure_kernel_rules(tol); }},
        {"stieltjes.closed-forms", [tol] { return stieltjes_closed_forms(tol); }},
        {"stieltjes.duality", [tol] { return stieltjes_duality(tol); }},
        {"stieltjes.inequalities", [tol] { return stieltjes_inequalities(tol); }},
        {"stieltjes.laplace", [tol] { return stieltjes_laplace(tol); }},
        {"stieltjes.limits", [tol] { return stieltjes_limits(tol); }},
        {"models.semigroup", [tol] { return models_semigroup(tol); }},
        {"models.three-routes", [tol] { return models_three_routes(tol); }},
        {"models.norm-sandwich", [tol] { return models_norm_sandwich(tol); }},
        {"models.membership", [tol] { return models_membership(tol); }},
        {"ergodic.direct-rate", [tol] { return ergodic_direct_rate(tol); }},
        {"ergodic.inverse", [tol] { return ergodic_inverse(tol); }},
        {"ergodic.hirsch", [tol] { return ergodic_hirsch(tol); }},
        {"ergodic.mean-characterization",
         [tol] { return ergodic_mean_characterization(tol); }},
        {"ergodic.fractional", [tol] { return ergodic_fractional(tol); }},
        {"ergodic.averaging", [tol] { return ergodic_averaging(tol); }},
        {"ergodic.counterexample", [tol] { return ergodic_counterexample(tol); }},
        {"ergodic.floor", [tol] { return ergodic_floor(tol); }},
        {"serialize.round-trip", [tol] { return serialize_round_trip(tol); }},
    };

    SelftestResult result;
    int passed = 0;
    for (const auto& [name, check] : checks) {
        std::optional<std::string> trouble;
        try {
            trouble = check();
        } catch (const Inconclusive& e) {
            result.report += std::string("INCONCLUSIVE ") + name + ": " + e.what() + "\n";
            result.report += std::string("selftest: stopped at ") + name + "\n";
            result.status = SelftestStatus::inconclusive;
            return result;
        } catch (const Error& e) {
            trouble = std::string(e.what());
        }
        if (trouble) {
            result.report += std::string("FAIL ") + name + ": " + *trouble + "\n";
            result.report += std::string("selftest: stopped at ") + name + "\n";
            result.status = SelftestStatus::violated;
            return result;
        }
        result.report += std::string("ok ") + name + "\n";
        ++passed;
    }
    result.report += "selftest: " + std::to_string(passed) + "/" +
                     std::to_string(checks.size()) + " checks passed\n";
    return result;
}

}  // namespace ergodelab
