#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "gdtk/tangent.hpp"

using namespace gdtk;

TEST_CASE("bsp NTK at the origin is the scaled linear kernel") {
    const int n = 6;
    BspModel model(n);
    ParamVector theta0(n, 0.0);
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        HypercubePoint x(rng() & 63u, n), xp(rng() & 63u, n);
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += x.coord(i) * xp.coord(i);
        CHECK(ntk_eval(model, theta0, x, xp, true) == doctest::Approx(4.0 * dot).epsilon(1e-12));
        CHECK(ntk_eval(model, theta0, x, xp, true) ==
              doctest::Approx(ntk_eval(model, theta0, xp, x, true)).epsilon(1e-14));
        CHECK(ntk_eval(model, theta0, x, x, true) >= 0.0);
    }
}

TEST_CASE("gram matrices are positive semidefinite") {
    const int n = 6;
    LpModel model(n, 0.2);
    std::mt19937_64 rng(2);
    ParamVector theta(n);
    for (double& t : theta) t = 0.3 * (static_cast<double>(rng() % 1000) / 1000.0 - 0.5);
    Eigen::MatrixXd gram(64, 64);
    for (int a = 0; a < 64; ++a)
        for (int b = 0; b < 64; ++b)
            gram(a, b) = ntk_eval(model, theta, HypercubePoint(a, n), HypercubePoint(b, n));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
    CHECK(eig.eigenvalues().minCoeff() >= -1e-8);
}

TEST_CASE("best_in_ball basics and optimality") {
    const int n = 6, k = 2;
    const double alpha = 0.3;
    SupportSet I = SupportSet::from_indices({0, 1}, n);
    FiniteMeasure mu = enumerate_bsp(n, k, I, alpha);
    BspModel model(n);
    ParamVector theta0(n, 0.0);
    FeatureMapSpec phi = tangent_feature_map(model, theta0, true);

    CHECK(best_in_ball(phi, mu, 0.0).loss == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS(best_in_ball(phi, mu, -1.0));

    NormBallPredictor best = best_in_ball(phi, mu, 2.0);
    CHECK(l2_norm(best.w) * best.radius <= 2.0 + 1e-9);

    // no random feasible predictor beats the solver
    std::mt19937_64 rng(4);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double target = 2.0 / best.radius;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> w(n);
        for (double& v : w) v = gauss(rng);
        double norm = l2_norm(w);
        double scale = target * std::pow(static_cast<double>(rng() % 1000 + 1) / 1000.0, 0.5) / norm;
        for (double& v : w) v *= scale;
        double loss = mu.expectation([&](const HypercubePoint& x, int y) {
            std::vector<double> f = phi.eval(x);
            double h = 0.0;
            for (int i = 0; i < n; ++i) h += w[i] * f[i];
            return 0.5 * (h - y) * (h - y);
        });
        CHECK(loss >= best.loss - 1e-9);
    }

    // monotone non-increasing loss in B
    double prev = 0.5;
    for (double B : {0.01, 0.1, 0.5, 1.0, 5.0, 50.0}) {
        double loss = best_in_ball(phi, mu, B).loss;
        CHECK(loss <= prev + 1e-12);
        prev = loss;
    }
    CHECK(best_in_ball(phi, mu, kUnbounded).loss <= prev + 1e-12);
}

TEST_CASE("closed-form linear edge") {
    CHECK(linear_parity_edge_closed_form(4, 2, 0.5) == doctest::Approx(1.0 / 18.0).epsilon(1e-12));
    for (int k : {2, 3, 4})
        for (double alpha : {0.1, 0.4}) {
            double gamma = linear_parity_edge_closed_form(10, k, alpha);
            CHECK(gamma >= (8.0 / 3.0) * alpha * alpha / std::ldexp(1.0, 2 * k) - 1e-15);
        }
    CHECK(linear_parity_edge_closed_form(6, 2, 1e-9) <= 1e-15);
    CHECK_THROWS(linear_parity_edge_closed_form(4, 1, 0.1));
}

TEST_CASE("theorem-1 witness on the unbiased parity model") {
    const int n = 6, k = 2;
    const double alpha = 0.3;
    SupportSet I = SupportSet::from_indices({2, 4}, n);
    FiniteMeasure mu = enumerate_bsp(n, k, I, alpha);
    BspModel model(n);
    LossFunction loss = square_loss();
    ParamVector theta0(n, 0.0);
    double gnorm = l2_norm(population_gradient(model, theta0, mu, loss));
    double tau = 0.8 * gnorm;  // precondition: gradient norm >= tau
    Thm1Witness w = thm1_witness(model, theta0, mu, loss, tau, 0.01);
    double cf = model.scale_bound();
    CHECK(w.loss_at_init == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(w.witness_loss <= 0.5 - tau * tau / (2.0 * cf * cf) + 1e-10);
    CHECK(w.bound_B == doctest::Approx(cf + tau / cf).epsilon(1e-12));
    // tau = 0: the witness degenerates to the initialization
    Thm1Witness w0 = thm1_witness(model, theta0, mu, loss, 0.0, 0.01);
    CHECK(w0.witness_loss <= w0.loss_at_init + 1e-12);
}

TEST_CASE("zero-label iterates") {
    const int n = 6;
    const double alpha = 0.2;
    SupportSet I = SupportSet::from_indices({0, 1, 2}, n);
    FiniteMeasure mu = enumerate_lp(n, I, alpha);

    // unbiased model: f == 0 at theta0, so nothing moves
    BspModel bsp(n);
    auto frozen = zero_label_iterates(bsp, ParamVector(n, 0.0), 0.5, 3, mu);
    for (const ParamVector& theta : frozen) CHECK(theta == ParamVector(n, 0.0));

    // lp model: theta1 has the closed form eta * 2 (E[x] + (5/3) alpha 1)
    LpModel lp(n, alpha);
    const double eta = 3.0 / (4.0 * alpha * n);
    auto iters = zero_label_iterates(lp, ParamVector(n, 0.0), eta, 1, mu);
    REQUIRE(iters.size() == 2);
    for (int i = 0; i < n; ++i) {
        double exi = I.contains(i) ? alpha : -alpha;
        double expected = eta * 2.0 * (exi + 5.0 / 3.0 * alpha);
        CHECK(iters[1][i] == doctest::Approx(expected).epsilon(1e-12));
        CHECK(iters[1][i] == doctest::Approx(I.contains(i) ? 4.0 / n : 1.0 / n).epsilon(1e-12));
    }

    // iterates depend only on the marginal: flip every label, same iterates
    std::vector<Atom> flipped;
    for (const Atom& a : mu.atoms()) flipped.push_back({a.bits, a.weight, 1.0 - a.p_plus});
    FiniteMeasure mu_flipped(n, std::move(flipped));
    auto iters2 = zero_label_iterates(lp, ParamVector(n, 0.0), eta, 1, mu_flipped);
    CHECK(iters2[1] == iters[1]);
}

TEST_CASE("theorem-2 audit on a leaky-parity instance") {
    const int n = 6;
    const double alpha = 0.1;
    SupportSet I = SupportSet::from_indices({0, 1, 3}, n);
    FiniteMeasure mu = enumerate_lp(n, I, alpha);
    LpModel model(n, alpha);
    const double eta = 3.0 / (4.0 * alpha * n), tau = 4.0 / 3.0 * alpha;
    TheoremTwoReport rep = thm2_audit(model, ParamVector(n, 0.0), eta, 1, tau, mu, 0.5 - alpha);
    CHECK(rep.conclusive);
    CHECK(rep.holds);
    REQUIRE(rep.per_iterate_edge.size() == 2);
    double mean = 0.5 * (rep.per_iterate_edge[0] + rep.per_iterate_edge[1]);
    CHECK(rep.average_edge == doctest::Approx(mean).epsilon(1e-12));
    CHECK(rep.gamma_prime <= tau * tau / (2.0 * model.scale_bound() * model.scale_bound()) + 1e-15);
    // an unmet precondition is reported as inconclusive (gamma too ambitious)
    TheoremTwoReport bad = thm2_audit(model, ParamVector(n, 0.0), eta, 1, tau, mu, 0.6);
    CHECK(!bad.conclusive);
}
