#include <cmath>
#include <cstdlib>

#include "doctest.h"

#include "ergodelab/errors.hpp"
#include "ergodelab/serialize.hpp"

using namespace ergodelab;

TEST_CASE("format_double emits shortest round-trip text") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(-2.5) == "-2.5");
    CHECK(format_double(inf) == "inf");
    CHECK(format_double(-inf) == "-inf");
    CHECK(format_double(std::nan("")) == "nan");
    for (double x : {1.0 / 3.0, 1e256, 1e-300, -7.25e-12, 123456789.123}) {
        const std::string text = format_double(x);
        CHECK(std::strtod(text.c_str(), nullptr) == x);
    }
}

TEST_CASE("csv tables quote only what needs quoting") {
    CsvTable table({"t", "norm", "note"});
    table.row({"1", "0.5", "plain"});
    table.row({"2", "0.25", "has,comma"});
    table.row({"4", "0.125", "has\"quote"});
    CHECK(table.rows() == 3);
    CHECK(table.str() ==
          "t,norm,note\n"
          "1,0.5,plain\n"
          "2,0.25,\"has,comma\"\n"
          "4,0.125,\"has\"\"quote\"\n");
}

TEST_CASE("csv tables reject ragged rows and empty headers") {
    CHECK_THROWS_AS(CsvTable({}), PreconditionFailed);
    CsvTable table({"a", "b"});
    CHECK_THROWS_AS(table.row({"only-one"}), PreconditionFailed);
}

TEST_CASE("builtin functions serialize as registry shorthand") {
    StieltjesFunction half = builtins::power(0.5);
    const std::string doc = to_json(half);
    CHECK(doc ==
          R"({"schema":1,"kind":"stieltjes","builtin":"power","params":[0.5]})");

    StieltjesFunction revived = stieltjes_from_json(doc);
    CHECK(revived.registry_name() == "power");
    CHECK(eval_stieltjes(revived, 2.0) ==
          doctest::Approx(eval_stieltjes(half, 2.0)).epsilon(1e-12));
    CHECK(to_json(revived) == doc);

    CHECK(to_json(builtins::log_ratio()) ==
          R"({"schema":1,"kind":"stieltjes","builtin":"log-ratio","params":[]})");
    CHECK(to_json(builtins::cbf_power(0.25)) ==
          R"({"schema":1,"kind":"cbf","builtin":"cbf-power","params":[0.25]})");
}

TEST_CASE("hand-assembled functions serialize their representation triple") {
    StieltjesFunction assembled(
        0.25, 1.5, RadonMeasure({Atom{1.0, 2.0}}, make_density("stieltjes-log", {})));
    const std::string doc = to_json(assembled);
    CHECK(doc ==
          R"({"schema":1,"kind":"stieltjes","a":0.25,"b":1.5,"measure":)"
          R"({"weight":"stieltjes","atoms":[[1.0,2.0]],)"
          R"("density":{"name":"stieltjes-log","params":[]}}})");

    StieltjesFunction revived = stieltjes_from_json(doc);
    CHECK(revived.a() == 0.25);
    CHECK(revived.b() == 1.5);
    CHECK(to_json(revived) == doc);
    for (double z : {0.5, 1.0, 8.0})
        CHECK(eval_stieltjes(revived, z) ==
              doctest::Approx(eval_stieltjes(assembled, z)).epsilon(1e-12));
}

TEST_CASE("the zero function round-trips as a bare triple") {
    StieltjesFunction zero(0.0, 0.0);
    const std::string doc = to_json(zero);
    CHECK(doc == R"({"schema":1,"kind":"stieltjes","a":0.0,"b":0.0})");
    CHECK(stieltjes_from_json(doc).is_zero());
}

TEST_CASE("measures serialize atoms as pairs and densities by name") {
    RadonMeasure mu({Atom{0.5, 1.0}, Atom{2.0, 3.0}}, make_density("power", {0.5}));
    const std::string doc = to_json(mu);
    CHECK(doc ==
          R"({"schema":1,"kind":"measure","weight":"stieltjes",)"
          R"("atoms":[[0.5,1.0],[2.0,3.0]],)"
          R"("density":{"name":"power","params":[0.5,1.0]}})");

    RadonMeasure revived = measure_from_json(doc);
    REQUIRE(revived.atoms().size() == 2);
    CHECK(revived.atoms()[1].location == 2.0);
    CHECK(revived.atoms()[1].mass == 3.0);
    REQUIRE(revived.density().has_value());
    CHECK(revived.density()->registry_name == "power");
    CHECK(revived.admissibility_value() ==
          doctest::Approx(mu.admissibility_value()).epsilon(1e-9));
    CHECK(to_json(revived) == doc);
}

TEST_CASE("levy-weighted measures keep their weight tag") {
    RadonMeasure nu = RadonMeasure::from_density(make_density("power", {1.5}),
                                                 MeasureWeight::levy);
    const std::string doc = to_json(nu);
    RadonMeasure revived = measure_from_json(doc);
    CHECK(revived.weight() == MeasureWeight::levy);
    CHECK(to_json(revived) == doc);
}

TEST_CASE("infinite parameters travel as strings") {
    Density window = make_density("lebesgue-window", {1.0, inf});
    CHECK(window.registry_params[1] == inf);
    // a half-line window of Lebesgue measure fails the finiteness check,
    // but only after the parameters parsed; that is the order the format
    // promises
    const std::string doc =
        R"({"schema":1,"kind":"measure","atoms":[],)"
        R"("density":{"name":"lebesgue-window","params":[1.0,"inf"]}})";
    CHECK_THROWS_AS(measure_from_json(doc), AdmissibilityViolation);

    const std::string bounded =
        R"({"schema":1,"kind":"measure","atoms":[],)"
        R"("density":{"name":"lebesgue-window","params":[0.0,1.0]}})";
    RadonMeasure revived = measure_from_json(bounded);
    CHECK(revived.admissibility_value() == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("documents without a portable density are rejected on write") {
    Density anonymous;
    anonymous.fn = [](double s) { return std::exp(-s); };
    anonymous.decay = exp_decay;
    RadonMeasure mu({}, anonymous);
    CHECK_THROWS_AS(to_json(mu), PreconditionFailed);
}

TEST_CASE("malformed documents are rejected with precise complaints") {
    CHECK_THROWS_AS(stieltjes_from_json("not json at all"), PreconditionFailed);
    CHECK_THROWS_AS(stieltjes_from_json(R"({"kind":"stieltjes"})"), PreconditionFailed);
    CHECK_THROWS_AS(stieltjes_from_json(R"({"schema":2,"kind":"stieltjes"})"),
                    PreconditionFailed);
    CHECK_THROWS_AS(stieltjes_from_json(R"({"schema":1,"kind":"cbf"})"),
                    PreconditionFailed);
    CHECK_THROWS_AS(
        stieltjes_from_json(R"({"schema":1,"kind":"stieltjes","builtin":"mystery"})"),
        PreconditionFailed);
    CHECK_THROWS_AS(
        stieltjes_from_json(
            R"({"schema":1,"kind":"stieltjes","builtin":"power","params":[]})"),
        PreconditionFailed);
    CHECK_THROWS_AS(
        cbf_from_json(R"({"schema":1,"kind":"cbf","builtin":"log-ratio"})"),
        PreconditionFailed);
    CHECK_THROWS_AS(
        measure_from_json(R"({"schema":1,"kind":"measure","atoms":[[1.0]]})"),
        PreconditionFailed);
    CHECK_THROWS_AS(
        measure_from_json(R"({"schema":1,"kind":"measure","weight":"signed"})"),
        PreconditionFailed);
    CHECK_THROWS_AS(
        measure_from_json(
            R"({"schema":1,"kind":"measure","density":{"name":"power","params":["wide"]}})"),
        PreconditionFailed);
}

TEST_CASE("cbf documents round-trip through both routes") {
    CompleteBernsteinFunction quarter = builtins::cbf_power(0.25);
    CompleteBernsteinFunction revived = cbf_from_json(to_json(quarter));
    for (double z : {0.5, 4.0})
        CHECK(eval_cbf(revived, z) == doctest::Approx(eval_cbf(quarter, z)).epsilon(1e-12));

    CompleteBernsteinFunction assembled(1.0, 0.5,
                                        RadonMeasure::point_mass(2.0, 1.0));
    const std::string doc = to_json(assembled);
    CompleteBernsteinFunction back = cbf_from_json(doc);
    CHECK(back.a() == 1.0);
    CHECK(back.b() == 0.5);
    CHECK(to_json(back) == doc);
    // z/(z+2) at z = 2 contributes 1/2 on top of a + b z
    CHECK(eval_cbf(back, 2.0) == doctest::Approx(1.0 + 1.0 + 0.5).epsilon(1e-9));
}
