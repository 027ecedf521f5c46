#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "gdtk/bounds.hpp"
#include "gdtk/separations.hpp"

using namespace gdtk;

TEST_CASE("dimension bound arithmetic") {
    CHECK(dimension_edge_bound(0, 10) == 0.0);
    CHECK(dimension_edge_bound(16, 56) == doctest::Approx(16.0 / 112.0).epsilon(1e-15));
    // lp family size is 2^n - n - 1
    CHECK(dimension_edge_bound(8, (1u << 10) - 10 - 1) ==
          doctest::Approx(8.0 / (2.0 * 1013.0)).epsilon(1e-15));
    CHECK_THROWS(dimension_edge_bound(-1, 10));
}

TEST_CASE("norm bound scaling") {
    CHECK(norm_edge_bound(0.0, 100) == 0.0);
    double b1 = norm_edge_bound(4.0, 100), b2 = norm_edge_bound(4.0, 200);
    CHECK(b2 == doctest::Approx(b1 * std::pow(2.0, -1.0 / 3.0)).epsilon(1e-12));
    CHECK(norm_edge_bound(8.0, 100) ==
          doctest::Approx(b1 * std::pow(2.0, 2.0 / 3.0)).epsilon(1e-12));
}

TEST_CASE("parity feature map: full edge on its own instance") {
    const int n = 6, k = 2;
    SupportSet J = SupportSet::from_indices({1, 2}, n);
    std::vector<FiniteMeasure> family = uniform_parity_family(n, k);
    FamilyAuditReport rep = family_edge_audit({parity_feature_map(J)}, family, kUnbounded);
    CHECK(rep.family_size == 15);
    CHECK(rep.dim == 1);
    double max_edge = 0.0;
    for (double e : rep.per_instance_edge) max_edge = std::max(max_edge, e);
    CHECK(max_edge == doctest::Approx(0.5).epsilon(1e-10));   // instance J itself
    CHECK(rep.min_edge <= 1e-10);                             // orthogonal parities
    CHECK(rep.average_within_dimension_bound);
    CHECK(rep.average_edge >= rep.min_edge);
}

TEST_CASE("random kernels respect the dimension bound") {
    const int n = 6, k = 2, p = 8;
    std::vector<FiniteMeasure> family = uniform_parity_family(n, k);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        FamilyAuditReport rep =
            family_edge_audit({gaussian_feature_map(n, p, seed)}, family, kUnbounded);
        CHECK(rep.average_within_dimension_bound);
        for (double e : rep.per_instance_edge) {
            CHECK(e >= -1e-9);
            CHECK(e <= 0.5 + 1e-9);
        }
    }
}

TEST_CASE("edges are invariant under feature-map rotation") {
    const int n = 5, k = 2, p = 6;
    std::vector<FiniteMeasure> family = uniform_parity_family(n, k);
    FeatureMapSpec base = gaussian_feature_map(n, p, 77);

    // random orthogonal matrix via QR of a Gaussian matrix
    std::mt19937_64 rng(78);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd m(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) m(i, j) = gauss(rng);
    Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ();

    FeatureMapSpec rotated;
    rotated.dim = p;
    rotated.prob = 1.0;
    rotated.eval = [base, q](const HypercubePoint& x) {
        std::vector<double> v = base.eval(x);
        Eigen::Map<const Eigen::VectorXd> f(v.data(), v.size());
        Eigen::VectorXd r = q * f;
        return std::vector<double>(r.data(), r.data() + r.size());
    };
    for (double B : {0.5, 2.0}) {
        FamilyAuditReport a = family_edge_audit({base}, family, B);
        FamilyAuditReport b = family_edge_audit({rotated}, family, B);
        for (std::size_t i = 0; i < a.per_instance_edge.size(); ++i)
            CHECK(std::abs(a.per_instance_edge[i] - b.per_instance_edge[i]) <= 1e-9);
    }
}

TEST_CASE("randomized kernel audit is the weighted mean of its components") {
    const int n = 5, k = 2;
    std::vector<FiniteMeasure> family = uniform_parity_family(n, k);
    FeatureMapSpec a = gaussian_feature_map(n, 4, 1, 0.25);
    FeatureMapSpec b = gaussian_feature_map(n, 4, 2, 0.75);
    FamilyAuditReport mixed = family_edge_audit({a, b}, family, 1.0);
    a.prob = b.prob = 1.0;
    FamilyAuditReport ra = family_edge_audit({a}, family, 1.0);
    FamilyAuditReport rb = family_edge_audit({b}, family, 1.0);
    for (std::size_t i = 0; i < family.size(); ++i)
        CHECK(std::abs(mixed.per_instance_edge[i] -
                       (0.25 * ra.per_instance_edge[i] + 0.75 * rb.per_instance_edge[i])) <=
              1e-12);
    CHECK_THROWS(family_edge_audit({gaussian_feature_map(n, 4, 3, 0.5)}, family, 1.0));
}

TEST_CASE("separation reports compose both halves") {
    SeparationReport s1 = separation_report("sep1", {.gamma = 0.05});
    CHECK(s1.get("gd_loss") <= 1e-12);
    CHECK(s1.get("ntk_loss") >= s1.get("ntk_loss_lower_bound") - 1e-10);

    SeparationReport s3 = separation_report("sep3", {.eps = 0.05});
    CHECK(s3.get("gd_loss") == doctest::Approx(0.1).epsilon(1e-12));  // alpha = 2 eps
    CHECK(std::abs(s3.get("ntk_edge")) <= 1e-10);

    SeparationReport s2 = separation_report("sep2", {.gamma = 0.1, .n = 8});
    CHECK(s2.get("gd_loss") <= 1e-12);
    CHECK(s2.get("dimension_bound_p8") == doctest::Approx(8.0 / 112.0).epsilon(1e-12));

    SeparationReport s4 = separation_report("sep4", {.eps = 0.1, .n = 6});
    CHECK(s4.get("gd_loss") == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(s4.get("family_size") == 57.0);
    CHECK_THROWS(separation_report("sep9", {}));
    CHECK(s4.to_markdown().find("| gd_loss |") != std::string::npos);
}
