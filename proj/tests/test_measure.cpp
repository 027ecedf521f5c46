#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gdtk/measure.hpp"
#include "gdtk/problems.hpp"

using namespace gdtk;

TEST_CASE("measure validation") {
    CHECK_THROWS(FiniteMeasure(3, {{0, 0.5, 0.0}}));          // weights don't sum to 1
    CHECK_THROWS(FiniteMeasure(3, {{0, -0.1, 0.0}, {1, 1.1, 0.0}}));
    CHECK_THROWS(FiniteMeasure(3, {{0, 1.0, 1.5}}));          // p_plus outside [0,1]
    CHECK_THROWS(FiniteMeasure(25, {{0, 1.0, 0.5}}));         // over the enumeration cap
}

TEST_CASE("duplicate atoms merge with mixed labels") {
    FiniteMeasure mu(2, {{3, 0.25, 1.0}, {3, 0.25, 0.0}, {0, 0.5, 1.0}});
    CHECK(mu.atoms().size() == 2);
    const Atom& merged = mu.atoms().back();
    CHECK(merged.bits == 3);
    CHECK(merged.weight == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(merged.p_plus == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("expectation of constant and null loss") {
    SupportSet I = SupportSet::from_indices({0, 1}, 4);
    for (double alpha : {0.1, 0.5}) {
        FiniteMeasure mu = enumerate_bsp(4, 2, I, alpha);
        CHECK(mu.expectation([](const HypercubePoint&, int) { return 1.0; }) ==
              doctest::Approx(1.0).epsilon(1e-14));
        double null_loss =
            mu.expectation([](const HypercubePoint&, int y) { return 0.5 * y * y; });
        CHECK(std::abs(null_loss - 0.5) <= 1e-12);
    }
    FiniteMeasure lp = enumerate_lp(4, I, 0.3);
    double null_loss = lp.expectation([](const HypercubePoint&, int y) { return 0.5 * y * y; });
    CHECK(std::abs(null_loss - 0.5) <= 1e-12);
}

TEST_CASE("expectation equals direct two-loop summation") {
    SupportSet I = SupportSet::from_indices({0, 2}, 4);
    FiniteMeasure mu = enumerate_bsp(4, 2, I, 0.5);
    auto g = [&](const HypercubePoint& x, int y) {
        return static_cast<double>(y) * parity_label(x, I) + 0.25 * x.coord(1);
    };
    double direct = 0.0;
    for (const Atom& a : mu.atoms()) {
        HypercubePoint x(a.bits, 4);
        for (int y : {+1, -1})
            direct += a.weight * (y > 0 ? a.p_plus : 1.0 - a.p_plus) * g(x, y);
    }
    CHECK(std::abs(mu.expectation(g) - direct) <= 1e-14);
}

TEST_CASE("sampling is deterministic and rejects m=0") {
    SupportSet I = SupportSet::from_indices({0, 1}, 3);
    FiniteMeasure mu = enumerate_bsp(3, 2, I, 0.2);
    CHECK_THROWS(mu.sample(1, 0));
    auto a = mu.sample(42, 1000);
    auto b = mu.sample(42, 1000);
    CHECK(a == b);
    auto c = mu.sample(43, 1000);
    CHECK(a != c);
}

TEST_CASE("coordinate mean matches expectation") {
    SupportSet I = SupportSet::from_indices({0, 1}, 4);
    FiniteMeasure mu = enumerate_bsp(4, 2, I, 0.4);
    for (int i = 0; i < 4; ++i) {
        double via_exp =
            mu.expectation([i](const HypercubePoint& x, int) { return x.coord(i); });
        CHECK(mu.coordinate_mean(i) == doctest::Approx(via_exp).epsilon(1e-14));
    }
}

TEST_CASE("csv debug dump has a header and one row per atom") {
    SupportSet I = SupportSet::from_indices({0, 1}, 3);
    FiniteMeasure mu = enumerate_bsp(3, 2, I, 0.2);
    std::ostringstream os;
    mu.write_csv(os);
    std::string s = os.str();
    CHECK(s.rfind("bits,weight,p_plus\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 1 + 8);
}
