#include <algorithm>

#include "doctest.h"

#include "ergodelab/selftest.hpp"

using namespace ergodelab;

TEST_CASE("the selftest passes and its report is byte-stable") {
    SelftestResult first = run_selftest();
    CHECK(first.ok());
    CHECK(first.status == SelftestStatus::passed);
    INFO(first.report);
    CHECK(first.report.find("FAIL") == std::string::npos);
    CHECK(first.report.find("INCONCLUSIVE") == std::string::npos);
    CHECK(first.report.find("selftest: 22/22 checks passed") != std::string::npos);

    const size_t lines = std::count(first.report.begin(), first.report.end(), '\n');
    CHECK(lines == 23);  // one per check plus the summary

    SelftestResult second = run_selftest();
    CHECK(second.report == first.report);
}
