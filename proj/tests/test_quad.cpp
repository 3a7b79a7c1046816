#include "doctest.h"

#include <cmath>
#include <vector>

#include "ergodelab/errors.hpp"
#include "ergodelab/quad.hpp"

using namespace ergodelab;

namespace {
const double pi = 3.14159265358979323846;
}

TEST_CASE("inverse square root integrates exactly with a lower hint") {
    auto r = integrate([](double s) { return 1.0 / std::sqrt(s); },
                       {0.0, 1.0}, EndpointHint::lower(0.5));
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(r.abs_error <= 1e-8 * 2.0 + 1e-8);
}

TEST_CASE("inverse square root still converges without the hint") {
    auto r = integrate([](double s) { return 1.0 / std::sqrt(s); },
                       {0.0, 1.0}, EndpointHint::none());
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-7));
    CHECK(r.subdivisions > 10);
}

TEST_CASE("rational tail over the half line") {
    auto r = integrate([](double s) { return 1.0 / ((1.0 + s) * (1.0 + s)); },
                       {0.0, inf}, EndpointHint::upper(1.0));
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("exponential tail over the half line") {
    auto r = integrate([](double s) { return std::exp(-s); }, {0.0, inf},
                       EndpointHint::upper(8.0));
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("combined endpoint singularity and tail") {
    // arctan derivative scaled: 1/(sqrt(s)(1+s)) over (0, inf) equals pi
    auto f = [](double s) { return 1.0 / (std::sqrt(s) * (1.0 + s)); };
    auto r = integrate(f, {0.0, inf}, EndpointHint::both(0.5, 1.5));
    CHECK(r.value == doctest::Approx(pi).epsilon(1e-8));
    auto tight = integrate(f, {0.0, inf}, EndpointHint::both(0.5, 1.5), 1e-12);
    CHECK(tight.value == doctest::Approx(pi).epsilon(1e-13));
    CHECK(tight.subdivisions >= r.subdivisions);
}

TEST_CASE("integration is linear and additive over subintervals") {
    auto f = [](double s) { return std::cos(s); };
    auto g = [](double s) { return s * s; };
    auto combo = [&](double s) { return 2.0 * f(s) + 3.0 * g(s); };
    const double a = integrate(f, {0.0, 2.0}).value;
    const double b = integrate(g, {0.0, 2.0}).value;
    const double c = integrate(combo, {0.0, 2.0}).value;
    CHECK(c == doctest::Approx(2.0 * a + 3.0 * b).epsilon(1e-12));

    const double left = integrate(f, {0.0, 1.0}).value;
    const double right = integrate(f, {1.0, 2.0}).value;
    CHECK(left + right == doctest::Approx(a).epsilon(1e-12));
}

TEST_CASE("zero integrand yields an exact zero") {
    auto r = integrate([](double) { return 0.0; }, {0.0, inf},
                       EndpointHint::upper(1.0));
    CHECK(r.value == 0.0);
    CHECK(r.abs_error == 0.0);
}

TEST_CASE("empty interval yields an exact zero without evaluations") {
    auto r = integrate([](double) { return 42.0; }, {3.0, 3.0});
    CHECK(r.value == 0.0);
    CHECK(r.subdivisions == 0);
}

TEST_CASE("repeated runs are bit identical") {
    auto f = [](double s) { return std::exp(-s) / std::sqrt(s); };
    auto r1 = integrate(f, {0.0, inf}, EndpointHint::both(0.5, 4.0));
    auto r2 = integrate(f, {0.0, inf}, EndpointHint::both(0.5, 4.0));
    CHECK(r1.value == r2.value);
    CHECK(r1.abs_error == r2.abs_error);
    CHECK(r1.subdivisions == r2.subdivisions);
}

TEST_CASE("hint validation") {
    auto f = [](double s) { return 1.0 / (1.0 + s * s); };
    CHECK_THROWS_AS(integrate(f, {0.0, 1.0}, EndpointHint::lower(1.0)),
                    InvalidHint);
    CHECK_THROWS_AS(integrate(f, {0.0, inf}, EndpointHint::upper(0.0)),
                    InvalidHint);
    CHECK_THROWS_AS(integrate(f, {0.0, inf}, EndpointHint::none()),
                    InvalidHint);
}

TEST_CASE("interval and tolerance validation") {
    auto f = [](double) { return 1.0; };
    CHECK_THROWS_AS(integrate(f, {2.0, 1.0}), PreconditionFailed);
    CHECK_THROWS_AS(integrate(f, {-inf, 1.0}), PreconditionFailed);
    CHECK_THROWS_AS(integrate(f, {0.0, 1.0}, EndpointHint::none(), 0.0),
                    PreconditionFailed);
}

TEST_CASE("non-integrable singularity exhausts the budget") {
    CHECK_THROWS_AS(integrate([](double s) { return 1.0 / s; }, {0.0, 1.0}),
                    NonConvergent);
}

TEST_CASE("geometric partial sums classify as convergent with exact limit") {
    std::vector<double> v;
    double s = 0.0;
    for (int k = 0; k < 12; ++k) {
        s += std::pow(0.5, k);
        v.push_back(s);
    }
    auto probe = classify_values(v);
    CHECK(probe.verdict == Verdict::converges);
    REQUIRE(probe.limit.has_value());
    CHECK(*probe.limit == doctest::Approx(2.0).epsilon(1e-13));
}

TEST_CASE("constant sequences settle on the exact value") {
    std::vector<double> v(8, 0.125);
    auto probe = classify_values(v);
    CHECK(probe.verdict == Verdict::converges);
    CHECK(*probe.limit == 0.125);
}

TEST_CASE("linearly growing partial sums classify as divergent") {
    std::vector<double> v;
    for (int k = 0; k < 10; ++k)
        v.push_back(2.5 * k);
    auto probe = classify_values(v);
    CHECK(probe.verdict == Verdict::diverges);
    CHECK_FALSE(probe.limit.has_value());
}

TEST_CASE("harmonic partial sums stay inconclusive") {
    // increment ratios (k-1)/k land between the two thresholds
    std::vector<double> v;
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) {
        s += 1.0 / k;
        v.push_back(s);
    }
    auto probe = classify_values(v);
    CHECK(probe.verdict == Verdict::inconclusive);
}

TEST_CASE("classifying increments matches classifying their partial sums") {
    std::vector<double> inc;
    for (int k = 0; k < 10; ++k)
        inc.push_back(std::pow(0.25, k));
    auto probe = classify_increments(inc);
    CHECK(probe.verdict == Verdict::converges);
    CHECK(*probe.limit == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("alternating geometric increments extrapolate correctly") {
    std::vector<double> inc;
    for (int k = 0; k < 14; ++k)
        inc.push_back(std::pow(-0.5, k));
    auto probe = classify_increments(inc);
    CHECK(probe.verdict == Verdict::converges);
    CHECK(*probe.limit == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("limit probe follows a decreasing schedule") {
    auto sched = geometric_schedule(0.5, 0.5, 10);
    auto probe = probe_limit([](double d) { return 1.0 + d; }, sched);
    CHECK(probe.verdict == Verdict::converges);
    CHECK(*probe.limit == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("limit probe rejects malformed schedules") {
    auto fn = [](double d) { return d; };
    std::vector<double> tiny{0.5, 0.25, 0.125};
    CHECK_THROWS_AS(probe_limit(fn, tiny), PreconditionFailed);
    std::vector<double> rising{1, 2, 3, 4, 5, 6};
    CHECK_THROWS_AS(probe_limit(fn, rising), PreconditionFailed);
    std::vector<double> negative{32, 16, 8, 4, 2, -1};
    CHECK_THROWS_AS(probe_limit(fn, negative), PreconditionFailed);
}

TEST_CASE("verdicts print their names") {
    CHECK(to_string(Verdict::converges) == "Converges");
    CHECK(to_string(Verdict::diverges) == "Diverges");
    CHECK(to_string(Verdict::inconclusive) == "Inconclusive");
}
