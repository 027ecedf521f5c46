#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gdtk/problems.hpp"

using namespace gdtk;

TEST_CASE("bsp with alpha=0 equals the uniform parity measure atom-by-atom") {
    SupportSet I = SupportSet::from_indices({1, 3}, 5);
    FiniteMeasure bsp = enumerate_bsp(5, 2, I, 0.0);
    FiniteMeasure uni = enumerate_uniform_parity(5, I);
    REQUIRE(bsp.atoms().size() == uni.atoms().size());
    for (std::size_t i = 0; i < bsp.atoms().size(); ++i) {
        CHECK(bsp.atoms()[i].bits == uni.atoms()[i].bits);
        CHECK(std::abs(bsp.atoms()[i].weight - uni.atoms()[i].weight) <= 1e-15);
        CHECK(bsp.atoms()[i].p_plus == uni.atoms()[i].p_plus);
    }
}

TEST_CASE("bsp moments") {
    const int n = 6, k = 3;
    SupportSet I = SupportSet::from_indices({0, 2, 4}, n);
    for (double alpha : {0.1, 0.5}) {
        FiniteMeasure mu = enumerate_bsp(n, k, I, alpha);
        for (int i = 0; i < n; ++i)
            CHECK(mu.coordinate_mean(i) == doctest::Approx(alpha / 2.0).epsilon(1e-12));
        for (int j = 0; j < n; ++j) {
            double eyx = mu.expectation(
                [j](const HypercubePoint& x, int y) { return y * x.coord(j); });
            double expected = I.contains(j) ? alpha / std::ldexp(1.0, k - 1)
                                            : alpha / std::ldexp(1.0, k + 1);
            CHECK(std::abs(eyx - expected) <= 1e-12);
        }
    }
}

TEST_CASE("bsp label correlation cross-checked by direct double loop") {
    const int n = 4, k = 2;
    SupportSet I = SupportSet::from_indices({0, 1}, n);
    FiniteMeasure mu = enumerate_bsp(n, k, I, 0.5);
    auto g = [&](const HypercubePoint& x, int y) {
        return static_cast<double>(y) * parity_label(x, I);
    };
    double direct = 0.0;
    for (const Atom& a : mu.atoms()) {
        HypercubePoint x(a.bits, n);
        for (int y : {+1, -1}) direct += a.weight * (y > 0 ? a.p_plus : 1.0 - a.p_plus) * g(x, y);
    }
    CHECK(std::abs(mu.expectation(g) - direct) <= 1e-14);
    CHECK(mu.expectation(g) == doctest::Approx(1.0).epsilon(1e-12));  // labels deterministic
}

TEST_CASE("bsp preconditions") {
    SupportSet I = SupportSet::from_indices({0, 1}, 4);
    CHECK_THROWS(enumerate_bsp(4, 1, SupportSet::from_indices({0}, 4), 0.1));
    CHECK_THROWS(enumerate_bsp(4, 3, I, 0.1));   // |I| != k
    CHECK_THROWS(enumerate_bsp(4, 2, I, 1.0));   // alpha out of range
    CHECK_THROWS(enumerate_bsp(30, 2, SupportSet::from_indices({0, 1}, 30), 0.1));
}

TEST_CASE("lp marginal means and label decorrelation") {
    const int n = 6;
    SupportSet I = SupportSet::from_indices({1, 2, 5}, n);
    for (double alpha : {0.05, 0.3}) {
        FiniteMeasure mu = enumerate_lp(n, I, alpha);
        for (int i = 0; i < n; ++i) {
            double expected = I.contains(i) ? alpha : -alpha;
            CHECK(std::abs(mu.coordinate_mean(i) - expected) <= 1e-12);
        }
        for (int j = 0; j < n; ++j) {
            double eyx = mu.expectation(
                [j](const HypercubePoint& x, int y) { return y * x.coord(j); });
            CHECK(std::abs(eyx) <= 1e-12);
        }
        double ey = mu.expectation([](const HypercubePoint&, int y) { return double(y); });
        CHECK(std::abs(ey) <= 1e-12);
    }
}

TEST_CASE("lp leak atom weight and label mix") {
    const int n = 5;
    const double alpha = 0.2;
    SupportSet I = SupportSet::from_indices({0, 3}, n);
    FiniteMeasure mu = enumerate_lp(n, I, alpha);
    CHECK(mu.atoms().size() == (1u << n));
    HypercubePoint leak = leak_atom(I);
    CHECK(leak.bits == I.mask);
    const double uw = (1.0 - alpha) / std::ldexp(1.0, n);
    for (const Atom& a : mu.atoms()) {
        if (a.bits == I.mask) {
            CHECK(a.weight == doctest::Approx(uw + alpha).epsilon(1e-15));
            // uniform part labels the leak point chi_I = +1; the leak is a fair coin
            double expected = (uw * 1.0 + alpha * 0.5) / (uw + alpha);
            CHECK(a.p_plus == doctest::Approx(expected).epsilon(1e-14));
        } else {
            CHECK(a.weight == doctest::Approx(uw).epsilon(1e-15));
        }
    }
}

TEST_CASE("empirical marginals concentrate") {
    const int n = 5;
    const double alpha = 0.3;
    SupportSet I = SupportSet::from_indices({0, 1}, n);
    FiniteMeasure mu = enumerate_lp(n, I, alpha);
    auto sample = mu.sample(7, 100000);
    for (int i = 0; i < n; ++i) {
        double mean = 0.0;
        for (const auto& [x, y] : sample) mean += x.coord(i);
        mean /= static_cast<double>(sample.size());
        double expected = I.contains(i) ? alpha : -alpha;
        CHECK(std::abs(mean - expected) <= 4e-2);
    }
}

TEST_CASE("streaming sampler matches the enumerated distribution") {
    const int n = 6, k = 2;
    SupportSet I = SupportSet::from_indices({0, 1}, n);
    const double alpha = 0.4;
    BspSampler sampler(n, I, alpha, 11);
    const std::size_t m = 200000;
    double mean0 = 0.0, corr = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        auto [x, y] = sampler.draw();
        CHECK(y == parity_label(x, I));
        mean0 += x.coord(0);
        corr += y * parity_label(x, I);
    }
    CHECK(std::abs(mean0 / m - alpha / 2.0) <= 1e-2);
    CHECK(corr / m == 1.0);
}
