#include <cmath>
#include <vector>

#include "doctest.h"
#include "ergodelab/errors.hpp"
#include "ergodelab/stieltjes.hpp"

using namespace ergodelab;

namespace {

std::vector<double> geometric_grid(double lo, double hi, int count) {
    std::vector<double> g(count);
    const double ratio = std::pow(hi / lo, 1.0 / (count - 1));
    double z = lo;
    for (int i = 0; i < count; ++i) {
        g[i] = z;
        z *= ratio;
    }
    return g;
}

}  // namespace

TEST_CASE("power builtins match closed forms at frozen points") {
    CHECK(eval_stieltjes(builtins::power(0.25), 16.0) == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(eval_stieltjes(builtins::power(0.5), 4.0) == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(eval_stieltjes(builtins::power(0.75), 16.0) == doctest::Approx(0.125).epsilon(1e-7));
}

TEST_CASE("log builtins match closed forms at frozen points") {
    const double e = std::exp(1.0);
    CHECK(eval_stieltjes(builtins::log_ratio(), e) ==
          doctest::Approx(0.5819767068693265).epsilon(1e-7));
    CHECK(eval_stieltjes(builtins::log_ratio(), 1.0) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(eval_stieltjes(builtins::log_reciprocal(), 1.0) ==
          doctest::Approx(0.6931471805599453).epsilon(1e-7));
}

TEST_CASE("reference suite stays within 1e-6 of closed forms on a wide grid") {
    auto grid = geometric_grid(1e-2, 1e2, 40);
    for (const auto& entry : builtins::stieltjes_suite()) {
        for (double z : grid) {
            const double got = eval_stieltjes(entry.g, z);
            const double want = entry.closed_form(z);
            CHECK(std::abs(got - want) <= 1e-6 * std::abs(want));
        }
    }
}

TEST_CASE("pure-coefficient functions evaluate exactly") {
    StieltjesFunction g(1.5, 2.0);
    CHECK(eval_stieltjes(g, 4.0) == 2.0);
    CHECK(eval_stieltjes_derivative(g, 4.0) == -0.125);
    CHECK(eval_stieltjes_derivative(StieltjesFunction(0.0, 1.0), 2.0) == -0.25);
}

TEST_CASE("derivative matches the closed form and a central difference") {
    auto g = builtins::power(0.5);
    CHECK(eval_stieltjes_derivative(g, 4.0) == doctest::Approx(-0.0625).epsilon(1e-7));

    for (const auto& entry : builtins::stieltjes_suite()) {
        for (double z : geometric_grid(1e-2, 1e2, 9)) {
            const double h = 1e-4 * z;
            const double fd = (eval_stieltjes(entry.g, z + h) -
                               eval_stieltjes(entry.g, z - h)) /
                              (2.0 * h);
            const double d = eval_stieltjes_derivative(entry.g, z);
            CHECK(std::abs(d - fd) <= std::max(1e-5 * std::abs(d), 1e-8));
        }
    }
}

TEST_CASE("slope of a Stieltjes function never beats the value-over-argument cap") {
    for (const auto& entry : builtins::stieltjes_suite()) {
        for (double tau : geometric_grid(1e-2, 1e2, 21)) {
            const double slope = std::abs(eval_stieltjes_derivative(entry.g, tau));
            const double cap = eval_stieltjes(entry.g, tau) / tau;
            CHECK(slope <= cap + 1e-8);
        }
    }
}

TEST_CASE("complete Bernstein evaluation hits closed forms") {
    CHECK(eval_cbf(builtins::cbf_power(0.5), 9.0) == doctest::Approx(3.0).epsilon(1e-7));
    CHECK(eval_cbf(builtins::cbf_power(0.25), 16.0) == doctest::Approx(2.0).epsilon(1e-7));
    CompleteBernsteinFunction linear(3.0, 2.0);
    CHECK(eval_cbf(linear, 5.0) == 13.0);
}

TEST_CASE("dual representation evaluates to z times the original") {
    auto g = builtins::power(0.5);
    auto f = dual(g);
    CHECK(f.registry_name() == "cbf-power");
    for (double z : geometric_grid(1e-2, 1e2, 11)) {
        const double lhs = eval_cbf(f, z);
        const double rhs = z * eval_stieltjes(g, z);
        CHECK(std::abs(lhs - rhs) <= 2e-8 * std::max(1.0, std::abs(rhs)));
    }

    StieltjesFunction coeffs(1.0, 2.0);
    auto fc = dual(coeffs);
    CHECK(fc.a() == 2.0);
    CHECK(fc.b() == 1.0);
    CHECK(eval_cbf(fc, 3.0) == 3.0 * eval_stieltjes(coeffs, 3.0));
}

TEST_CASE("composition evaluates through both layers") {
    auto inner = builtins::power(0.5);

    auto composite = compose(builtins::cbf_power(0.5), inner);
    CHECK(composite(16.0) == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(composite.growth_at_zero == doctest::Approx(0.25));
    CHECK_FALSE(composite.slow_factor);

    CompleteBernsteinFunction identity(0.0, 1.0);
    auto same = compose(identity, inner);
    CHECK(same(4.0) == doctest::Approx(0.5).epsilon(1e-7));

    CompleteBernsteinFunction saturating(
        0.0, 0.0, RadonMeasure::point_mass(1.0, 1.0, MeasureWeight::stieltjes));
    auto bounded = compose(saturating, inner);
    CHECK(bounded(1.0) == doctest::Approx(0.5).epsilon(1e-7));

    CHECK_THROWS_AS((void)compose(identity, StieltjesFunction(0.0, 0.0)),
                    PreconditionFailed);
}

TEST_CASE("composites of power functions stay decreasing and midpoint-convex") {
    auto composite = compose(builtins::cbf_power(0.75), builtins::power(0.5));
    auto grid = geometric_grid(1e-2, 1e2, 15);
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
        const double fi = composite(grid[i]);
        const double fn = composite(grid[i + 1]);
        CHECK(fi >= fn - 1e-8);
        const double fm = composite(0.5 * (grid[i] + grid[i + 1]));
        CHECK(0.5 * (fi + fn) - fm >= -1e-8);
    }
}

TEST_CASE("limit probes recover representation coefficients") {
    SUBCASE("coefficients only") {
        auto rep = limits(StieltjesFunction(1.0, 2.0));
        CHECK(rep.a_estimate == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(rep.b_estimate == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(std::isinf(rep.g_at_zero));
    }
    SUBCASE("square-root decay") {
        auto rep = limits(builtins::power(0.5));
        CHECK(std::abs(rep.a_estimate) <= 1e-6);
        CHECK(std::abs(rep.b_estimate) <= 1e-6);
        CHECK(std::isinf(rep.g_at_zero));
    }
    SUBCASE("logarithmic blow-up is still flagged as infinite") {
        auto rep = limits(builtins::log_ratio());
        CHECK(std::abs(rep.a_estimate) <= 1e-6);
        CHECK(std::abs(rep.b_estimate) <= 1e-6);
        CHECK(std::isinf(rep.g_at_zero));
    }
    SUBCASE("bounded function has a finite value at zero") {
        StieltjesFunction g(0.0, 0.0,
                            RadonMeasure::point_mass(1.0, 1.0, MeasureWeight::stieltjes));
        auto rep = limits(g);
        CHECK(std::abs(rep.a_estimate) <= 1e-8);
        CHECK(std::abs(rep.b_estimate) <= 1e-8);
        CHECK(rep.g_at_zero == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("duality checks return clean reports for genuine Stieltjes functions") {
    auto grid = geometric_grid(1e-2, 1e2, 40);

    auto rep_power = duality_check(builtins::power(0.5), grid);
    CHECK(rep_power.max_violation() <= 1e-9);

    auto rep_log = duality_check(builtins::log_ratio(), grid);
    CHECK(rep_log.max_violation() <= 1e-7);

    StieltjesFunction reciprocal(0.0, 1.0);
    auto rep_b = duality_check(reciprocal, grid);
    CHECK(rep_b.max_violation() <= 1e-15);
}

TEST_CASE("duality check rejects degenerate input") {
    auto grid = geometric_grid(1e-2, 1e2, 10);
    CHECK_THROWS_AS((void)duality_check(StieltjesFunction(1.0, 0.0), grid),
                    PreconditionFailed);
    std::vector<double> short_grid{1.0, 2.0};
    CHECK_THROWS_AS((void)duality_check(builtins::power(0.5), short_grid),
                    PreconditionFailed);
    std::vector<double> unsorted{1.0, 3.0, 2.0};
    CHECK_THROWS_AS((void)duality_check(builtins::power(0.5), unsorted),
                    PreconditionFailed);
}

TEST_CASE("Laplace density of the square-root function") {
    auto g = builtins::power(0.5);
    CHECK(laplace_density(g, 1.0) == doctest::Approx(0.5641895835477563).epsilon(1e-7));
    CHECK(laplace_density_derivative(g, 1.0) ==
          doctest::Approx(-0.28209479177387814).epsilon(1e-7));

    // s * m(s) stays below g(1/s)
    for (double s : geometric_grid(1e-2, 1e2, 11)) {
        CHECK(s * laplace_density(g, s) <= eval_stieltjes(g, 1.0 / s) + 1e-8);
    }

    // far out on the s axis the exponential mass sits at scale 1/s; the
    // closed forms 1/sqrt(pi s) and -1/(2 sqrt(pi) s^1.5) must survive there
    CHECK(laplace_density(g, 1e6) ==
          doctest::Approx(5.641895835477563e-4).epsilon(1e-7));
    CHECK(laplace_density_derivative(g, 1e6) ==
          doctest::Approx(-2.8209479177387814e-10).epsilon(1e-7));
}

TEST_CASE("Laplace density of an atomic measure is the matching exponential") {
    StieltjesFunction g(0.0, 0.0,
                        RadonMeasure::point_mass(1.0, 1.0, MeasureWeight::stieltjes));
    CHECK(laplace_density(g, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(laplace_density(g, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(laplace_density_derivative(g, 2.0) ==
          doctest::Approx(-std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("transforming the Laplace density recovers the function") {
    auto g = builtins::power(0.5);
    for (double t : {0.5, 1.0, 2.0}) {
        const double direct = eval_stieltjes(g, t, 1e-9);
        Integrand f = [&g, t](double s) {
            return std::exp(-t * s) * laplace_density(g, s, 1e-9);
        };
        const double via_density =
            integrate(f, Interval{0.0, inf}, EndpointHint::both(0.5, exp_decay), 1e-6)
                .value;
        CHECK(via_density == doctest::Approx(direct).epsilon(1e-5));
    }
}

TEST_CASE("Laplace density rejects representations it cannot serve") {
    CHECK_THROWS_AS((void)laplace_density(StieltjesFunction(1.0, 0.0), 1.0),
                    PreconditionFailed);
    CHECK_THROWS_AS((void)laplace_density(builtins::power(0.5), -1.0),
                    PreconditionFailed);
    // total mass of the square-root measure is infinite
    CHECK_THROWS_AS((void)laplace_density(builtins::power(0.5), 0.0), InvalidHint);
    CHECK_THROWS_AS((void)laplace_density_derivative(builtins::power(0.5), 0.0),
                    PreconditionFailed);
}

TEST_CASE("averaging symbol bound at frozen points") {
    auto f = builtins::cbf_power(0.5);
    auto pair = cesaro_symbol_bound(f, 1.0);
    CHECK(pair.lhs == doctest::Approx(1.1283791670955126).epsilon(1e-7));
    CHECK(pair.rhs == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(pair.lhs <= pair.rhs);

    CompleteBernsteinFunction atom(
        0.0, 0.0, RadonMeasure::point_mass(1.0, 1.0, MeasureWeight::stieltjes));
    auto small_t = cesaro_symbol_bound(atom, 1e-4);
    CHECK(small_t.lhs == doctest::Approx(0.999950001666625).epsilon(1e-9));
    CHECK(small_t.rhs == doctest::Approx(1.9998000199980002).epsilon(1e-9));
    CHECK(small_t.lhs <= small_t.rhs);

    // the bound holds along a wide t sweep
    for (double t : geometric_grid(1e-3, 1e3, 13)) {
        auto p = cesaro_symbol_bound(f, t);
        CHECK(p.lhs <= p.rhs + 1e-8);
    }

    CHECK_THROWS_AS((void)cesaro_symbol_bound(CompleteBernsteinFunction(0.0, 1.0), 1.0),
                    PreconditionFailed);
}

TEST_CASE("representation constructors validate their input") {
    CHECK_THROWS_AS(StieltjesFunction(-1.0, 0.0), PreconditionFailed);
    CHECK_THROWS_AS(StieltjesFunction(0.0, -2.0), PreconditionFailed);
    CHECK_THROWS_AS((void)eval_stieltjes(builtins::power(0.5), 0.0), PreconditionFailed);
    CHECK_THROWS_AS((void)eval_stieltjes(builtins::power(0.5), -3.0), PreconditionFailed);
    CHECK_THROWS_AS((void)builtins::power(1.0), PreconditionFailed);
    CHECK_THROWS_AS((void)builtins::cbf_power(0.0), PreconditionFailed);

    auto levy = builtins::levy_power(0.5);
    REQUIRE(levy.nu.has_value());
    CHECK(levy.nu->admissibility_value() ==
          doctest::Approx(0.8862269254527579).epsilon(1e-7));
    CHECK_THROWS_AS(StieltjesFunction(0.0, 0.0, levy.nu), PreconditionFailed);
}

TEST_CASE("growth metadata reads off the representation") {
    CHECK(builtins::power(0.25).growth_at_zero() == doctest::Approx(0.25));
    CHECK_FALSE(builtins::power(0.25).slow_factor());
    CHECK(builtins::log_ratio().growth_at_zero() == 0.0);
    CHECK(builtins::log_ratio().slow_factor());
    CHECK(builtins::log_reciprocal().slow_factor());
    CHECK(StieltjesFunction(0.0, 1.0).growth_at_zero() == 1.0);

    CHECK(builtins::cbf_power(0.75).power_at_inf() == doctest::Approx(0.75));
    CHECK(dual(builtins::log_ratio()).slow_factor());
    CHECK(dual(builtins::power(0.5)).power_at_inf() == doctest::Approx(0.5));

    CHECK(builtins::power(0.5).label() == "power:0.5");
    CHECK(builtins::log_ratio().label() == "log-ratio");
}

TEST_CASE("slowly varying builtins evaluate consistently in both forms") {
    auto eps = builtins::eps_log();
    CHECK(eps(8.0) == doctest::Approx(std::log(10.0)).epsilon(1e-15));
    CHECK(eps.at_log(700.0) == doctest::Approx(700.0).epsilon(1e-12));
    CHECK(eps.at_log(std::log(8.0)) == doctest::Approx(eps(8.0)).epsilon(1e-12));

    auto sq = builtins::eps_log_power(2.0);
    CHECK(sq(8.0) == doctest::Approx(std::log(10.0) * std::log(10.0)).epsilon(1e-14));

    auto qqq = builtins::eps_log_loglog();
    CHECK(qqq(8.0) ==
          doctest::Approx(std::log(10.0) * std::log(std::log(11.0))).epsilon(1e-14));

    auto rooted = builtins::eps_log().powered_argument(0.5);
    CHECK(rooted(16.0) == doctest::Approx(std::log(6.0)).epsilon(1e-14));
}

TEST_CASE("slow variation screening rejects genuine growth") {
    CHECK_THROWS_AS(SlowlyVaryingFunction([](double t) { return t; },
                                          [](double l) { return std::exp(l); }, 0.0,
                                          "linear"),
                    PreconditionFailed);
    CHECK_THROWS_AS(SlowlyVaryingFunction([](double t) { return std::cos(t); },
                                          [](double l) { return std::cos(std::exp(l)); },
                                          0.0, "wobble"),
                    PreconditionFailed);
}
