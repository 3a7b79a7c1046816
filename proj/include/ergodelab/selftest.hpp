#pragma once

#include <string>

#include "ergodelab/quad.hpp"

namespace ergodelab {

enum class SelftestStatus { passed, violated, inconclusive };

struct SelftestResult {
    SelftestStatus status = SelftestStatus::passed;
    std::string report;  // one line per check, then a summary line

    bool ok() const { return status == SelftestStatus::passed; }
};

// Re-asserts the library's documented invariants end to end: quadrature
// oracles, measure arithmetic, closed forms and duality, the scalar
// inequality suite, semigroup laws, route agreement, norm sandwiches,
// membership verdicts, every rate statement, and the serialization round
// trip.  Stops at the first check that does not pass.  The report text is
// deterministic: two runs on one platform produce identical bytes.
SelftestResult run_selftest(double tol = default_tolerance);

}  // namespace ergodelab
