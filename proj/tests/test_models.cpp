#include <cmath>
#include <vector>

#include "doctest.h"
#include "ergodelab/errors.hpp"
#include "ergodelab/models.hpp"

using namespace ergodelab;

namespace {

const L1MultiplicationModel l1_model;

std::vector<double> dyadic_times(int count) {
    std::vector<double> t(count);
    double v = 1.0;
    for (int i = 0; i < count; ++i) {
        t[i] = v;
        v *= 2.0;
    }
    return t;
}

}  // namespace

TEST_CASE("element registry produces the advertised masses") {
    CHECK(l1_norm(make_element("window", {1.0, 2.0})) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(l1_norm(make_element("window", {2.0, 5.0})) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(l1_norm(make_element("power", {2.0})) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(l1_norm(make_element("power", {3.0})) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(l1_norm(make_element("zero")) == 0.0);
}

TEST_CASE("element registry rejects malformed requests") {
    CHECK_THROWS_AS((void)make_element("window", {0.5, 2.0}), PreconditionFailed);
    CHECK_THROWS_AS((void)make_element("window", {2.0, 2.0}), PreconditionFailed);
    CHECK_THROWS_AS((void)make_element("window", {1.0}), PreconditionFailed);
    CHECK_THROWS_AS((void)make_element("power", {1.0}), PreconditionFailed);
    CHECK_THROWS_AS((void)make_element("comb", {}), PreconditionFailed);
    CHECK_THROWS_AS((void)make_element("zero", {1.0}), PreconditionFailed);
    CHECK_THROWS_AS(make_element("power", {2.0})(0.5), PreconditionFailed);
}

TEST_CASE("time-average norm hits closed forms") {
    auto u = make_element("power", {2.0});
    const double e = std::exp(1.0);
    // (1/t) integral_1^t ds/s + integral_t^inf ds/s^2 at t = e
    CHECK(Nt_norm(u, e) == doctest::Approx(2.0 / e).epsilon(1e-8));
    CHECK(Nt_norm(u, 1.0) == doctest::Approx(l1_norm(u)).epsilon(1e-9));

    auto w = make_element("window", {1.0, 2.0});
    CHECK(Nt_norm(w, 4.0) == doctest::Approx(0.375).epsilon(1e-9));
    CHECK(Nt_norm(w, 1.5) == doctest::Approx(0.9166666666666666).epsilon(1e-9));
    CHECK_THROWS_AS((void)Nt_norm(w, 0.5), PreconditionFailed);
}

TEST_CASE("time-average norm is pinched between the norm and its t-th part") {
    for (const char* name : {"window", "power"}) {
        auto u = name[0] == 'w' ? make_element("window", {1.0, 2.0})
                                : make_element("power", {2.0});
        const double full = l1_norm(u);
        for (double t : dyadic_times(12)) {
            const double nt = Nt_norm(u, t);
            CHECK(nt <= full + 1e-8);
            CHECK(nt >= full / t - 1e-8);
        }
    }
}

TEST_CASE("mean norm is equivalent to the time-average norm") {
    const double lower = 1.0 - std::exp(-1.0);
    for (const char* name : {"window", "power"}) {
        auto u = name[0] == 'w' ? make_element("window", {2.0, 5.0})
                                : make_element("power", {2.0});
        for (double t : dyadic_times(11)) {
            auto snap = norm_snapshot(l1_model, u, t);
            CHECK(snap.cesaro_norm <= snap.nt_norm + 2e-8);
            CHECK(snap.cesaro_norm >= lower * snap.nt_norm - 2e-8);
        }
    }
}

TEST_CASE("the scaled mean norm never shrinks in t") {
    auto u = make_element("power", {1.5});
    double prev = 0.0;
    for (double t : dyadic_times(14)) {
        const double scaled = t * cesaro_norm(l1_model, u, t);
        CHECK(scaled >= prev - 1e-9);
        prev = scaled;
    }
}

TEST_CASE("semigroup action composes and contracts") {
    auto u = make_element("power", {2.0});
    auto two_step = apply_semigroup(l1_model, apply_semigroup(l1_model, u, 1.5), 2.5);
    auto one_step = apply_semigroup(l1_model, u, 4.0);
    for (double s : {1.0, 2.0, 7.0, 31.0, 200.0}) {
        CHECK(two_step(s) == doctest::Approx(one_step(s)).epsilon(1e-15));
    }
    CHECK(l1_norm(apply_semigroup(l1_model, u, 3.0)) <= l1_norm(u) + 1e-9);
    CHECK(apply_semigroup(l1_model, u, 0.0)(2.0) == u(2.0));
}

TEST_CASE("resolvent inverts its defining operator pointwise") {
    auto u = make_element("window", {1.0, 4.0});
    const double lambda = 0.7;
    auto r = resolvent(l1_model, u, lambda);
    for (double s : {1.5, 2.0, 3.0, 3.9}) {
        // (lambda + A) applied to r: lambda r(s) + r(s)/s
        CHECK(lambda * r(s) + r(s) / s == doctest::Approx(u(s)).epsilon(1e-15));
    }
    CHECK_THROWS_AS((void)resolvent(l1_model, u, 0.0), PreconditionFailed);
}

TEST_CASE("spectral multipliers commute with the mean") {
    auto u = make_element("power", {2.0});
    ScalarFunction root{[](double z) { return std::sqrt(z); }, 0.5, false, "root"};
    auto a = cesaro_mean(l1_model, apply_function_spectral(l1_model, root, u), 3.0);
    auto b = apply_function_spectral(l1_model, root, cesaro_mean(l1_model, u, 3.0));
    for (double s : {1.0, 2.5, 10.0, 64.0}) {
        CHECK(a(s) == doctest::Approx(b(s)).epsilon(1e-15));
    }
}

TEST_CASE("resolvent-route application agrees with the spectral route") {
    auto u = make_element("window", {1.0, 3.0});
    auto g = builtins::power(0.5);
    auto via_rep = stieltjes_resolvent_apply(l1_model, g, u);
    for (double s : {1.2, 2.0, 2.9}) {
        const double expected = std::sqrt(s) * u(s);  // g(1/s) = s^{1/2}
        CHECK(via_rep(s) == doctest::Approx(expected).epsilon(1e-7));
    }

    auto f = builtins::cbf_power(0.5);
    auto via_cbf = cbf_resolvent_apply(l1_model, f, u);
    for (double s : {1.2, 2.0, 2.9}) {
        const double expected = u(s) / std::sqrt(s);  // f(1/s) = s^{-1/2}
        CHECK(via_cbf(s) == doctest::Approx(expected).epsilon(1e-7));
    }
}

TEST_CASE("membership for compactly supported elements is immediate") {
    auto rep = membership_diagnostic(l1_model, builtins::power(0.5),
                                     make_element("window", {1.0, 2.0}));
    CHECK(rep.verdict == Membership::member);
    CHECK_FALSE(rep.borderline_certificate);
    // 1 + integral_1^2 sqrt(s) ds
    CHECK(rep.graph_norm == doctest::Approx(2.2189514164974602).epsilon(1e-8));
}

TEST_CASE("membership series settles clean power tails") {
    SUBCASE("integrable against the square root") {
        auto rep = membership_diagnostic(l1_model, builtins::power(0.5),
                                         make_element("power", {2.0}));
        CHECK(rep.verdict == Membership::member);
        CHECK(rep.series_verdict == Verdict::converges);
        CHECK(rep.graph_norm == doctest::Approx(3.0).epsilon(1e-5));
        CHECK(rep.schedule.size() == 7);
        CHECK(rep.partials.size() == 7);
    }
    SUBCASE("too heavy against the square root") {
        auto rep = membership_diagnostic(l1_model, builtins::power(0.5),
                                         make_element("power", {1.2}));
        CHECK(rep.verdict == Membership::not_member);
        CHECK(rep.series_verdict == Verdict::diverges);
    }
    SUBCASE("zero element belongs to every domain") {
        auto rep = membership_diagnostic(l1_model, builtins::power(0.5), L1Element());
        CHECK(rep.verdict == Membership::member);
        CHECK(rep.graph_norm == 0.0);
    }
}

TEST_CASE("membership sees single-log borderlines through the series") {
    // g(1/s)|u(s)| = 1/(2 s log(2 + sqrt(s))): divergent, but only just
    L1Element u([](double s) { return 1.0 / (2.0 * std::pow(s, 1.5) *
                                              std::log(2.0 + std::sqrt(s))); },
                TailEnvelope{inf, 1.5, 1.0, 0.0});
    auto rep = membership_diagnostic(l1_model, builtins::power(0.5), u);
    CHECK(rep.verdict == Membership::not_member);
    CHECK(rep.series_verdict == Verdict::diverges);
    CHECK_FALSE(rep.borderline_certificate);
}

TEST_CASE("membership defers to the envelope exactly on the iterated-log line") {
    auto base = [](double s) {
        const double root = std::sqrt(s);
        return 1.0 / (2.0 * s * root * std::log(2.0 + root));
    };
    SUBCASE("an extra log log factor still diverges") {
        L1Element u([base](double s) {
                        return base(s) / std::log(std::log(3.0 + std::sqrt(s)));
                    },
                    TailEnvelope{inf, 1.5, 1.0, 1.0});
        auto rep = membership_diagnostic(l1_model, builtins::power(0.5), u);
        CHECK(rep.verdict == Membership::not_member);
        CHECK(rep.borderline_certificate);
    }
    SUBCASE("a squared log log factor tips it into the domain") {
        L1Element u([base](double s) {
                        const double ll = std::log(std::log(3.0 + std::sqrt(s)));
                        return base(s) / (ll * ll);
                    },
                    TailEnvelope{inf, 1.5, 1.0, 2.0});
        auto rep = membership_diagnostic(l1_model, builtins::power(0.5), u);
        CHECK(rep.verdict == Membership::member);
        CHECK(rep.borderline_certificate);
        CHECK(rep.graph_norm > 0.0);
    }
}

TEST_CASE("matrix model evaluates its semigroup and mean in closed form") {
    MatrixModel m({0.0, 1.0, 4.0});
    Vector x{1.0, 1.0, 1.0};

    auto moved = apply_semigroup(m, x, 0.5);
    CHECK(moved[0] == 1.0);
    CHECK(moved[1] == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
    CHECK(moved[2] == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));

    auto averaged = cesaro_mean(m, x, 1.0);
    CHECK(averaged[0] == 1.0);
    CHECK(averaged[1] == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));

    auto shifted = resolvent(m, x, 2.0);
    CHECK(shifted[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));

    CHECK(sup_norm(apply_semigroup(m, x, 3.0)) <= sup_norm(x));
    CHECK_THROWS_AS((void)apply_semigroup(m, Vector{1.0}, 1.0), PreconditionFailed);
    CHECK_THROWS_AS(MatrixModel({-1.0}), PreconditionFailed);
}

TEST_CASE("three routes to the square root of a matrix agree") {
    MatrixModel m({0.1, 1.0, 4.0, 10.0});
    Vector x{1.0, 1.0, 1.0, 1.0};

    auto spectral = apply_function_spectral(
        m, [](double lam) { return std::sqrt(lam); }, x);
    auto via_levy = phillips_apply(m, builtins::levy_power(0.5), x);
    auto via_rep = cbf_resolvent_apply(m, builtins::cbf_power(0.5), x);

    for (size_t i = 0; i < x.size(); ++i) {
        CHECK(std::abs(via_levy[i] - spectral[i]) <= 1e-6 * std::abs(spectral[i]));
        CHECK(std::abs(via_rep[i] - spectral[i]) <= 1e-6 * std::abs(spectral[i]));
    }

    auto g_routes = stieltjes_resolvent_apply(m, builtins::power(0.5), x);
    for (size_t i = 0; i < x.size(); ++i) {
        const double expected = 1.0 / std::sqrt(m.eigenvalues()[i]);
        CHECK(std::abs(g_routes[i] - expected) <= 1e-6 * expected);
    }
}

TEST_CASE("matrix domain violations surface loudly") {
    MatrixModel m({0.0, 1.0});
    Vector x{1.0, 1.0};
    CHECK_THROWS_AS((void)stieltjes_resolvent_apply(m, builtins::power(0.5), x),
                    DomainViolation);
    CHECK_THROWS_AS(
        (void)apply_function_spectral(
            m, [](double lam) { return 1.0 / std::sqrt(lam); }, x),
        DomainViolation);

    // bounded g is fine on the kernel eigenvalue
    StieltjesFunction bounded(
        0.5, 0.0, RadonMeasure::point_mass(2.0, 1.0, MeasureWeight::stieltjes));
    auto val = stieltjes_resolvent_apply(m, bounded, x);
    CHECK(val[0] == doctest::Approx(1.0).epsilon(1e-12));

    // Lévy triple at the kernel eigenvalue contributes only its constant
    auto via_levy = phillips_apply(m, builtins::levy_power(0.5), x);
    CHECK(via_levy[0] == 0.0);
}
