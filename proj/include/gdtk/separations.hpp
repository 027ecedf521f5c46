#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gdtk/bounds.hpp"
#include "gdtk/gd.hpp"
#include "gdtk/tangent.hpp"

namespace gdtk {

// Side-by-side outcome of one separation experiment: the GD half (one-step
// learning) against the kernel half (tangent-kernel edge and family bounds).
struct SeparationReport {
    std::string kind;
    struct Entry {
        std::string label;
        double value;
    };
    std::vector<Entry> entries;

    double get(const std::string& label) const {
        for (const Entry& e : entries)
            if (e.label == label) return e.value;
        throw std::out_of_range("SeparationReport: no entry " + label);
    }

    std::string to_markdown() const {
        std::ostringstream os;
        os << "### " << kind << "\n\n| metric | value |\n|---|---|\n";
        char buf[64];
        for (const Entry& e : entries) {
            std::snprintf(buf, sizeof buf, "%.12g", e.value);
            os << "| " << e.label << " | " << buf << " |\n";
        }
        return os.str();
    }
};

namespace detail {

inline double worst_loss(const std::vector<ClaimRunReport>& runs) {
    double worst = 0.0;
    for (const ClaimRunReport& r : runs) worst = std::max(worst, r.final_loss);
    return worst;
}

template <class Model>
double best_ntk_edge_over(const Model& model, const ParamVector& theta0, bool unbiased,
                          const FiniteMeasure& mu, const std::vector<double>& bounds) {
    double best = -0.5;
    FeatureMapSpec phi = tangent_feature_map(model, theta0, unbiased);
    for (double b : bounds) best = std::max(best, best_in_ball(phi, mu, b).edge);
    return best;
}

}  // namespace detail

struct SeparationParams {
    double gamma = 0.05;  // sep1 target edge / sep2 rate
    double eps = 0.05;    // sep3/sep4 target loss
    int n = 8;            // sep2/sep4 dimension
};

// XOR of two bits over mixed uniform/biased inputs: GD reaches zero loss while
// the tangent kernel at the (unbiased) initialization keeps loss >= 1/2 - alpha/2.
inline SeparationReport separation1(double gamma) {
    const int n = 2, k = 2;
    const double alpha = 2.0 * gamma;
    SupportSet I = SupportSet::from_indices({0, 1}, n);
    FiniteMeasure mu = enumerate_bsp(n, k, I, alpha);
    BspModel model(n);
    ParamVector theta0(n, 0.0);

    SeparationReport rep;
    rep.kind = "sep1";
    rep.entries.push_back({"gamma", gamma});
    rep.entries.push_back({"alpha", alpha});
    rep.entries.push_back({"gd_loss", detail::worst_loss(claim31_experiment(n, k, alpha, I))});
    double edge = detail::best_ntk_edge_over(model, theta0, true, mu,
                                             {0.1, 1.0, static_cast<double>(n), 10.0 * n, kUnbounded});
    rep.entries.push_back({"ntk_edge", edge});
    rep.entries.push_back({"ntk_loss", 0.5 - edge});
    rep.entries.push_back({"ntk_loss_lower_bound", 0.5 - alpha / 2.0});
    return rep;
}

// log2(n)-sparse parities: GD still reaches zero loss; any p-dimensional kernel
// is capped at an average edge of p / (2 C(n,k)) on the uniform sub-family.
inline SeparationReport separation2(int n, double gamma) {
    const int k = std::max(2, static_cast<int>(std::ceil(std::log2(static_cast<double>(n)))));
    const double alpha = gamma;
    auto supports = all_supports(n, k);
    SupportSet I = supports.front();
    FiniteMeasure mu = enumerate_bsp(n, k, I, alpha);
    BspModel model(n);

    SeparationReport rep;
    rep.kind = "sep2";
    rep.entries.push_back({"n", static_cast<double>(n)});
    rep.entries.push_back({"k", static_cast<double>(k)});
    rep.entries.push_back({"alpha", alpha});
    rep.entries.push_back({"family_size", static_cast<double>(supports.size())});
    rep.entries.push_back({"gd_loss", detail::worst_loss(claim31_experiment(n, k, alpha, I))});
    rep.entries.push_back({"ntk_edge",
                           detail::best_ntk_edge_over(model, ParamVector(n, 0.0), true, mu,
                                                      {1.0, static_cast<double>(n), kUnbounded})});
    for (int p : {n, n * n, n * n * n})
        rep.entries.push_back({"dimension_bound_p" + std::to_string(p),
                               dimension_edge_bound(p, supports.size())});
    return rep;
}

// Leaky parity at n = 2: GD reaches loss alpha while the tangent kernel at the
// (biased) initialization has zero edge.
inline SeparationReport separation3(double eps) {
    const int n = 2;
    const double alpha = 2.0 * eps;
    SupportSet I = SupportSet::from_indices({0, 1}, n);
    FiniteMeasure mu = enumerate_lp(n, I, alpha);
    LpModel model(n, alpha);

    SeparationReport rep;
    rep.kind = "sep3";
    rep.entries.push_back({"eps", eps});
    rep.entries.push_back({"alpha", alpha});
    rep.entries.push_back({"gd_loss", detail::worst_loss(claim51_experiment(n, alpha, I))});
    rep.entries.push_back({"ntk_edge",
                           detail::best_ntk_edge_over(model, ParamVector(n, 0.0), false, mu,
                                                      {0.1, 1.0, 10.0, kUnbounded})});
    return rep;
}

// Leaky parity family: GD reaches loss alpha while any p-dimensional kernel is
// capped at an edge of p / (2 (2^n - n - 1)).
inline SeparationReport separation4(int n, double eps) {
    const double alpha = eps;
    auto supports = all_supports_at_least(n, 2);
    SupportSet I = supports.back();
    FiniteMeasure mu = enumerate_lp(n, I, alpha);
    LpModel model(n, alpha);

    SeparationReport rep;
    rep.kind = "sep4";
    rep.entries.push_back({"n", static_cast<double>(n)});
    rep.entries.push_back({"alpha", alpha});
    rep.entries.push_back({"family_size", static_cast<double>(supports.size())});
    rep.entries.push_back({"gd_loss", detail::worst_loss(claim51_experiment(n, alpha, I))});
    rep.entries.push_back({"ntk_edge",
                           detail::best_ntk_edge_over(model, ParamVector(n, 0.0), false, mu,
                                                      {1.0, 10.0, kUnbounded})});
    for (int p : {n, n * n, n * n * n})
        rep.entries.push_back({"dimension_bound_p" + std::to_string(p),
                               dimension_edge_bound(p, supports.size())});
    rep.entries.push_back({"norm_bound_B_n2",
                           norm_edge_bound(static_cast<double>(n) * n, supports.size())});
    return rep;
}

inline SeparationReport separation_report(const std::string& kind, const SeparationParams& params) {
    if (kind == "sep1") return separation1(params.gamma);
    if (kind == "sep2") return separation2(params.n, params.gamma);
    if (kind == "sep3") return separation3(params.eps);
    if (kind == "sep4") return separation4(params.n, params.eps);
    throw std::invalid_argument("separation_report: unknown kind " + kind);
}

}  // namespace gdtk
