// Acceptance gate: one pass/fail line per criterion, asserted individually.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "gdtk/acceptance.hpp"

TEST_CASE("acceptance criteria") {
    std::vector<gdtk::CriterionResult> results = gdtk::run_acceptance({});
    REQUIRE(results.size() == 9);
    for (const gdtk::CriterionResult& r : results) {
        std::printf("%s criterion %d: %s (%.1fs) %s\n", r.pass ? "PASS" : "FAIL", r.id,
                    r.name.c_str(), r.seconds, r.detail.c_str());
        std::fflush(stdout);
        CAPTURE(r.id);
        CAPTURE(r.detail);
        CHECK(r.pass);
        if (r.id == 1) CHECK(r.seconds < 10.0);
        if (r.id == 4) CHECK(r.seconds < 60.0);
        if (r.id == 9) CHECK(r.seconds <= 600.0);
    }
}
