#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gdtk/gd.hpp"
#include "gdtk/problems.hpp"
#include "gdtk/tangent.hpp"

namespace gdtk {

// Ceiling on the average edge of any p-dimensional kernel over an orthonormal
// fixed-marginal family: p / (2 |P|).
inline double dimension_edge_bound(int p, std::size_t family_size) {
    if (p < 0 || family_size < 1) throw std::invalid_argument("dimension_edge_bound: bad args");
    return static_cast<double>(p) / (2.0 * static_cast<double>(family_size));
}

// Calibration constant for the norm-based edge ceiling c * B^(2/3) / |P|^(1/3).
// The asymptotic statement carries no constant; this one is calibrated so the
// bound dominates audited edges of random 64-dim maps at n = 8 (see tests) and
// is not authoritative.
inline constexpr double kNormBoundCalibration = 1.0;

inline double norm_edge_bound(double bound_B, std::size_t family_size,
                              double c = kNormBoundCalibration) {
    if (bound_B < 0.0 || !(c > 0.0)) throw std::invalid_argument("norm_edge_bound: bad args");
    return c * std::pow(bound_B, 2.0 / 3.0) / std::pow(static_cast<double>(family_size), 1.0 / 3.0);
}

struct FamilyAuditReport {
    std::vector<double> per_instance_edge;  // expectation over the kernel distribution
    double average_edge = 0.0;
    double min_edge = 0.0;
    double dimension_bound = 0.0;
    double norm_bound = 0.0;
    std::size_t family_size = 0;
    int dim = 0;
    bool average_within_dimension_bound = false;
};

// Expected best edge of a (randomized) kernel on every instance of a family,
// with the family average checked against the dimension bound. The bound is a
// theorem on orthonormal fixed-marginal families (e.g. uniform parities); on
// other families the flag is still reported but carries no guarantee.
inline FamilyAuditReport family_edge_audit(const std::vector<FeatureMapSpec>& maps,
                                           const std::vector<FiniteMeasure>& family,
                                           double bound_B) {
    if (maps.empty() || family.empty())
        throw std::invalid_argument("family_edge_audit: empty maps or family");
    double total_prob = 0.0;
    for (const FeatureMapSpec& m : maps) {
        if (m.dim != maps[0].dim)
            throw std::invalid_argument("family_edge_audit: inconsistent dimensions");
        total_prob += m.prob;
    }
    if (std::abs(total_prob - 1.0) > 1e-9)
        throw std::invalid_argument("family_edge_audit: kernel probabilities must sum to 1");

    FamilyAuditReport report;
    report.family_size = family.size();
    report.dim = maps[0].dim;
    report.dimension_bound = dimension_edge_bound(report.dim, report.family_size);
    report.norm_bound = std::isinf(bound_B) ? kUnbounded : norm_edge_bound(bound_B, report.family_size);

    KahanSum avg;
    double min_edge = std::numeric_limits<double>::infinity();
    for (const FiniteMeasure& mu : family) {
        KahanSum expected_edge;
        for (const FeatureMapSpec& m : maps)
            expected_edge.add(m.prob * best_in_ball(m, mu, bound_B).edge);
        report.per_instance_edge.push_back(expected_edge.value());
        avg.add(expected_edge.value());
        min_edge = std::min(min_edge, expected_edge.value());
    }
    report.average_edge = avg.value() / static_cast<double>(report.family_size);
    report.min_edge = min_edge;
    report.average_within_dimension_bound = report.average_edge <= report.dimension_bound + 1e-8;
    return report;
}

// The uniform-input parity instances D_I^(0): the orthonormal fixed-marginal
// sub-family the dimension bound applies to.
inline std::vector<FiniteMeasure> uniform_parity_family(int n, int k) {
    std::vector<FiniteMeasure> family;
    for (const SupportSet& I : all_supports(n, k)) family.push_back(enumerate_uniform_parity(n, I));
    return family;
}

inline std::vector<FiniteMeasure> uniform_parity_family_at_least(int n, int min_size) {
    std::vector<FiniteMeasure> family;
    for (const SupportSet& I : all_supports_at_least(n, min_size))
        family.push_back(enumerate_uniform_parity(n, I));
    return family;
}

// Gaussian random feature map: a fixed table of p features per cube point.
inline FeatureMapSpec gaussian_feature_map(int n, int p, std::uint64_t seed, double prob = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<std::vector<double>> table(std::size_t{1} << n, std::vector<double>(static_cast<std::size_t>(p)));
    for (auto& row : table)
        for (double& v : row) v = gauss(rng);
    FeatureMapSpec spec;
    spec.dim = p;
    spec.prob = prob;
    spec.eval = [table = std::move(table)](const HypercubePoint& x) { return table[x.bits]; };
    return spec;
}

// Indicator features on p chosen cube points (memorization features).
inline FeatureMapSpec indicator_feature_map(const std::vector<std::uint64_t>& points, int n,
                                            double prob = 1.0) {
    FeatureMapSpec spec;
    spec.dim = static_cast<int>(points.size());
    spec.prob = prob;
    spec.eval = [points, n](const HypercubePoint& x) {
        std::vector<double> phi(points.size(), 0.0);
        for (std::size_t j = 0; j < points.size(); ++j)
            if (points[j] == x.bits) phi[j] = 1.0;
        return phi;
    };
    return spec;
}

// Single-feature map that is the parity chi_J itself.
inline FeatureMapSpec parity_feature_map(const SupportSet& J, double prob = 1.0) {
    FeatureMapSpec spec;
    spec.dim = 1;
    spec.prob = prob;
    spec.eval = [J](const HypercubePoint& x) {
        return std::vector<double>{static_cast<double>(parity_label(x, J))};
    };
    return spec;
}

}  // namespace gdtk
