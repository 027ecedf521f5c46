#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "gdtk/gd.hpp"
#include "gdtk/measure.hpp"
#include "gdtk/models.hpp"

namespace gdtk {

// A p-dimensional feature map on the cube, with an optional probability weight
// when it is one component of a randomized kernel.
struct FeatureMapSpec {
    int dim = 0;
    std::function<std::vector<double>(const HypercubePoint&)> eval;
    double prob = 1.0;
};

// phi_theta(x) = [f_theta(x), grad f_theta(x)]; the value coordinate is dropped
// for unbiased initializations (f_theta == 0 everywhere).
template <class Model>
FeatureMapSpec tangent_feature_map(const Model& model, ParamVector theta, bool unbiased = false) {
    FeatureMapSpec spec;
    spec.dim = model.param_count() + (unbiased ? 0 : 1);
    spec.eval = [&model, theta = std::move(theta), unbiased](const HypercubePoint& x) {
        std::vector<double> phi;
        if (!unbiased) phi.push_back(model.value(theta, x));
        std::vector<double> g = model.gradient(theta, x);
        phi.insert(phi.end(), g.begin(), g.end());
        return phi;
    };
    return spec;
}

template <class Model>
double ntk_eval(const Model& model, const ParamVector& theta, const HypercubePoint& x,
                const HypercubePoint& xp, bool unbiased = false) {
    FeatureMapSpec phi = tangent_feature_map(model, theta, unbiased);
    std::vector<double> a = phi.eval(x), b = phi.eval(xp);
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    return dot;
}

// R = sup_x ||phi(x)||_2 over the measure's support.
inline double feature_radius(const FeatureMapSpec& phi, const FiniteMeasure& mu) {
    double r2 = 0.0;
    for (const Atom& a : mu.atoms()) {
        std::vector<double> v = phi.eval(mu.point(a));
        double sq = 0.0;
        for (double x : v) sq += x * x;
        r2 = std::max(r2, sq);
    }
    return std::sqrt(r2);
}

struct NormBallPredictor {
    std::vector<double> w;
    double bound = 0.0;   // B
    double radius = 0.0;  // R
    double loss = 0.5;
    double edge = 0.0;
};

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

// Best square-loss predictor in F(K,B) = {<w,phi(.)> : ||w|| R <= B} over the
// finite measure: unconstrained minimum-norm normal-equations solution via
// eigendecomposition of the population second-moment matrix; when its norm
// exceeds B/R, bisect the ridge parameter until ||w_lambda|| = B/R (monotone).
inline NormBallPredictor best_in_ball(const FeatureMapSpec& phi, const FiniteMeasure& mu,
                                      double bound) {
    if (bound < 0.0) throw std::invalid_argument("best_in_ball: B < 0");
    const int d = phi.dim;
    Eigen::MatrixXd moment = Eigen::MatrixXd::Zero(d, d);
    Eigen::VectorXd corr = Eigen::VectorXd::Zero(d);
    for (const Atom& a : mu.atoms()) {
        std::vector<double> v = phi.eval(mu.point(a));
        Eigen::Map<const Eigen::VectorXd> f(v.data(), d);
        moment.noalias() += a.weight * f * f.transpose();
        corr.noalias() += a.weight * (2.0 * a.p_plus - 1.0) * f;
    }

    NormBallPredictor out;
    out.bound = bound;
    out.radius = feature_radius(phi, mu);
    auto finish = [&](const Eigen::VectorXd& w) {
        out.w.assign(w.data(), w.data() + d);
        out.loss = 0.5 - corr.dot(w) + 0.5 * w.dot(moment * w);
        out.edge = 0.5 - out.loss;
        return out;
    };

    if (bound == 0.0 || out.radius == 0.0) return finish(Eigen::VectorXd::Zero(d));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(moment);
    const Eigen::VectorXd& evals = eig.eigenvalues();
    Eigen::VectorXd proj = eig.eigenvectors().transpose() * corr;
    double cutoff = std::max(evals.maxCoeff(), 0.0) * 1e-13;

    auto w_for = [&](double lambda) {
        Eigen::VectorXd c(d);
        for (int i = 0; i < d; ++i) {
            double denom = evals[i] + lambda;
            c[i] = (evals[i] > cutoff || lambda > 0.0) ? proj[i] / denom : 0.0;
        }
        return Eigen::VectorXd(eig.eigenvectors() * c);
    };

    Eigen::VectorXd w = w_for(0.0);
    double target = bound / out.radius;
    if (std::isinf(bound) || w.norm() <= target) return finish(w);

    double lo = 0.0, hi = 1.0;
    while (w_for(hi).norm() > target) hi *= 2.0;
    for (int iter = 0; iter < 500; ++iter) {
        double mid = 0.5 * (lo + hi);
        double norm = w_for(mid).norm();
        if (norm > target)
            lo = mid;
        else
            hi = mid;
        if (std::abs(norm - target) <= 1e-10 * std::max(1.0, target)) break;
    }
    return finish(w_for(hi));
}

// Closed-form edge of the best multiple of Z = sum_{i in I} x_i on the
// biased-sparse-parity source: gamma = E[Zy]^2 / (2 E[Z^2]).
inline double linear_parity_edge_closed_form(int n, int k, double alpha) {
    if (k < 2 || k > n) throw std::invalid_argument("linear_parity_edge: bad k");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("linear_parity_edge: alpha");
    double ezy = alpha * k / std::ldexp(1.0, k - 1);
    double ez2 = k + alpha * (static_cast<double>(k) * k - k) / 4.0;
    return ezy * ezy / (2.0 * ez2);
}

// Constructive tangent-kernel witness: either the initialization itself, or a
// single step along the negative feature-space gradient of length
// tau / (|l''| C_f^2), guaranteeing loss <= max(eps, L(f_0) - tau^2/(2|l''| C_f^2)).
struct Thm1Witness {
    double loss_at_init = 0.0;
    double witness_loss = 0.0;
    double guarantee = 0.0;  // the bound the witness loss must not exceed
    double bound_B = 0.0;
    bool used_init = false;
    std::vector<double> w;  // coefficients over [value, gradient] features
};

template <class Model>
Thm1Witness thm1_witness(const Model& model, const ParamVector& theta0, const FiniteMeasure& mu,
                         const LossFunction& loss, double tau, double eps) {
    Thm1Witness out;
    double cf = model.scale_bound();
    double lpp = loss.second_derivative_bound;
    out.bound_B = cf + tau / (lpp * cf);
    out.loss_at_init = population_loss(model, theta0, mu, loss);
    out.guarantee = std::max(eps, out.loss_at_init - tau * tau / (2.0 * lpp * cf * cf));

    const int p = model.param_count();
    out.w.assign(static_cast<std::size_t>(p) + 1, 0.0);
    out.w[0] = 1.0;
    if (out.loss_at_init <= eps) {
        out.used_init = true;
        out.witness_loss = out.loss_at_init;
        return out;
    }
    std::vector<double> grad_w = population_gradient(model, theta0, mu, loss);
    double norm = l2_norm(grad_w);
    double step = tau / (lpp * cf * cf);
    if (norm > 0.0)
        for (int j = 0; j < p; ++j)
            out.w[static_cast<std::size_t>(j) + 1] = -step * grad_w[static_cast<std::size_t>(j)] / norm;
    out.witness_loss = mu.expectation([&](const HypercubePoint& x, int y) {
        double h = model.value(theta0, x);
        std::vector<double> g = model.gradient(theta0, x);
        for (int j = 0; j < p; ++j) h += out.w[static_cast<std::size_t>(j) + 1] * g[static_cast<std::size_t>(j)];
        return loss.value(h, static_cast<double>(y));
    });
    return out;
}

// GD on the same marginal with all labels forced to zero:
// theta_{t+1} = theta_t - eta E_x[f(x) grad f(x)]. Depends only on D_X.
template <class Model>
std::vector<ParamVector> zero_label_iterates(const Model& model, const ParamVector& theta0,
                                             double eta, int steps, const FiniteMeasure& mu) {
    if (!(eta > 0.0)) throw std::invalid_argument("zero_label_iterates: eta <= 0");
    std::vector<ParamVector> iterates{theta0};
    ParamVector theta = theta0;
    const int p = model.param_count();
    for (int t = 0; t < steps; ++t) {
        std::vector<KahanSum> acc(static_cast<std::size_t>(p));
        for (const Atom& a : mu.atoms()) {
            HypercubePoint x = mu.point(a);
            double f = model.value(theta, x);
            std::vector<double> g = model.gradient(theta, x);
            for (int j = 0; j < p; ++j)
                acc[static_cast<std::size_t>(j)].add(a.weight * f * g[static_cast<std::size_t>(j)]);
        }
        for (int j = 0; j < p; ++j) theta[static_cast<std::size_t>(j)] -= eta * acc[static_cast<std::size_t>(j)].value();
        for (double v : theta)
            if (!std::isfinite(v)) throw std::runtime_error("zero_label_iterates: divergence");
        iterates.push_back(theta);
    }
    return iterates;
}

// Audit of the alternate-random-initialization guarantee: the average best
// tangent-kernel edge over the zero-label iterates must exceed
// gamma' = min(gamma/(T+1), tau^2/(2 C_f^2)) at bound B = sqrt(2 gamma') C_f.
struct TheoremTwoReport {
    std::vector<ParamVector> iterates;
    std::vector<std::vector<double>> label_correlations;  // v^(t) = E[y grad f]
    std::vector<double> per_iterate_edge;
    double average_edge = 0.0;
    double gamma_prime = 0.0;
    double bound_B = 0.0;
    bool conclusive = false;  // precondition (GD reaches edge gamma) verified
    bool holds = false;
};

template <class Model>
TheoremTwoReport thm2_audit(const Model& model, const ParamVector& theta0, double eta, int steps,
                            double tau, const FiniteMeasure& mu, double gamma) {
    TheoremTwoReport report;
    LossFunction loss = square_loss();
    double cf = model.scale_bound();
    report.gamma_prime = std::min(gamma / (steps + 1), tau * tau / (2.0 * cf * cf));
    report.bound_B = std::sqrt(2.0 * report.gamma_prime) * cf;

    // Precondition probe: GD with every implemented adversary must certify the
    // claimed edge before the audit is meaningful.
    report.conclusive = true;
    for (PerturbStrategy s : all_strategies()) {
        GDConfig cfg{eta, steps, tau, AdversarialOracle{s, 1}};
        try {
            GDTrajectory traj = run_gd(model, theta0, cfg, mu, loss);
            double final_loss = population_loss(model, traj.iterates.back(), mu, loss);
            if (0.5 - final_loss < gamma - 1e-12) report.conclusive = false;
        } catch (const std::runtime_error&) {
            report.conclusive = false;
        }
    }

    report.iterates = zero_label_iterates(model, theta0, eta, steps, mu);
    KahanSum edge_sum;
    for (const ParamVector& theta : report.iterates) {
        std::vector<KahanSum> v(theta.size());
        for (const Atom& a : mu.atoms()) {
            HypercubePoint x = mu.point(a);
            std::vector<double> g = model.gradient(theta, x);
            double ybar = 2.0 * a.p_plus - 1.0;
            for (std::size_t j = 0; j < theta.size(); ++j) v[j].add(a.weight * ybar * g[j]);
        }
        std::vector<double> corr(theta.size());
        for (std::size_t j = 0; j < theta.size(); ++j) corr[j] = v[j].value();
        report.label_correlations.push_back(std::move(corr));

        NormBallPredictor best = best_in_ball(tangent_feature_map(model, theta), mu, report.bound_B);
        report.per_iterate_edge.push_back(best.edge);
        edge_sum.add(best.edge);
    }
    report.average_edge = edge_sum.value() / static_cast<double>(report.iterates.size());
    report.holds = report.average_edge > report.gamma_prime;
    return report;
}

}  // namespace gdtk
