#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gdtk/activations.hpp"
#include "gdtk/hypercube.hpp"

namespace gdtk {

using ParamVector = std::vector<double>;

namespace detail {

// Exclusive products prod_{j != i} v_j via prefix/suffix scans.
inline void exclusive_products(const std::vector<double>& v, std::vector<double>& out) {
    const std::size_t n = v.size();
    out.assign(n, 1.0);
    double pre = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = pre;
        pre *= v[i];
    }
    double suf = 1.0;
    for (std::size_t i = n; i-- > 0;) {
        out[i] *= suf;
        suf *= v[i];
    }
}

}  // namespace detail

// Model for the biased-sparse-parity problem: a linear predictor and a
// selected-parity sharing the weight vector theta (p = n).
//
//   f_theta(x) = W(<theta,x> + G(theta o x)),  W = sigma window [-1,1] -> [-1,1]
//   G(z) = S(xi(z)) * (H(xi(z)) - sum_i z_i)
//
// At theta = 0: f = 0, grad = 2x. For theta in ([-2/n,2/n] u [3/n,5/n])^n with
// some theta_i >= 3/n: f = prod_{i: theta_i >= 3/n} x_i.
class BspModel {
public:
    explicit BspModel(int n) : n_(n), outer_(-1.0, 1.0, -1.0, 1.0) {
        if (n < 2) throw std::invalid_argument("BspModel: need n >= 2");
        // sup over the documented regime of ||grad||^2 + f^2 is attained at
        // theta = 0 where grad = 2x.
        scale_bound_ = std::sqrt(4.0 * n + 1.0);
    }

    int n() const { return n_; }
    int param_count() const { return n_; }
    double scale_bound() const { return scale_bound_; }

    double value(const ParamVector& theta, const HypercubePoint& x) const {
        check(theta, x);
        double sumz = 0.0, p_gate = 1.0, h = 1.0;
        for (int i = 0; i < n_; ++i) {
            double z = theta[static_cast<std::size_t>(i)] * x.coord(i);
            double s = xi(z, n_);
            sumz += z;
            p_gate *= 1.0 - s * s;
            h *= 1.0 + s - s * s;
        }
        double gate = 1.0 - p_gate;
        return outer_.value(sumz + gate * (h - sumz));
    }

    std::vector<double> gradient(const ParamVector& theta, const HypercubePoint& x) const {
        check(theta, x);
        std::vector<double> s(static_cast<std::size_t>(n_)), sp(static_cast<std::size_t>(n_));
        std::vector<double> g_fac(static_cast<std::size_t>(n_)), h_fac(static_cast<std::size_t>(n_));
        double sumz = 0.0;
        for (int i = 0; i < n_; ++i) {
            double z = theta[static_cast<std::size_t>(i)] * x.coord(i);
            sumz += z;
            s[static_cast<std::size_t>(i)] = xi(z, n_);
            sp[static_cast<std::size_t>(i)] = xi_prime(z, n_);
            double si = s[static_cast<std::size_t>(i)];
            g_fac[static_cast<std::size_t>(i)] = 1.0 - si * si;
            h_fac[static_cast<std::size_t>(i)] = 1.0 + si - si * si;
        }
        std::vector<double> eg, eh;
        detail::exclusive_products(g_fac, eg);
        detail::exclusive_products(h_fac, eh);
        double p_gate = g_fac.empty() ? 1.0 : eg[0] * g_fac[0];
        double h = h_fac.empty() ? 1.0 : eh[0] * h_fac[0];
        double gate = 1.0 - p_gate;
        double u = sumz + gate * (h - sumz);
        double w_prime = outer_.derivative(u);

        std::vector<double> grad(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) {
            std::size_t ii = static_cast<std::size_t>(i);
            double dgate_dz = 2.0 * s[ii] * sp[ii] * eg[ii];
            double dh_dz = (1.0 - 2.0 * s[ii]) * sp[ii] * eh[ii];
            double du_dz = 1.0 + dgate_dz * (h - sumz) + gate * (dh_dz - 1.0);
            grad[ii] = w_prime * du_dz * x.coord(i);
        }
        return grad;
    }

private:
    void check(const ParamVector& theta, const HypercubePoint& x) const {
        if (static_cast<int>(theta.size()) != n_ || x.n != n_)
            throw std::invalid_argument("BspModel: dimension mismatch");
    }

    int n_;
    SigmaWindow outer_;
    double scale_bound_;
};

// Model for the leaky-parity problem: same selected-parity mechanism, but the
// linear path carries a (5/3) alpha offset and a separate bias window pinned
// at -1 with zero gradient at theta = 0 (p = n).
//
//   f_theta(x) = W_bias(<theta,1>) + W(L + S*(H - L)),  L = <theta, x + (5/3) alpha 1>
class LpModel {
public:
    LpModel(int n, double alpha)
        : n_(n),
          offset_(5.0 / 3.0 * alpha),
          bias_(0.0, 2.0 / n, -1.0, 0.0),
          outer_(-1.0, 1.0, -1.0, 1.0) {
        if (n < 2) throw std::invalid_argument("LpModel: need n >= 2");
        if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("LpModel: alpha");
        // Bias window slope reaches n per coordinate in its transition sliver,
        // so the norm bound carries an n*sqrt(n) term; see tests for the probe.
        double gnorm = std::pow(n, 1.5) + (16.0 / 3.0) * std::sqrt(static_cast<double>(n));
        scale_bound_ = std::sqrt(gnorm * gnorm + 4.0);
    }

    int n() const { return n_; }
    int param_count() const { return n_; }
    double alpha() const { return offset_ * 3.0 / 5.0; }
    double scale_bound() const { return scale_bound_; }

    double value(const ParamVector& theta, const HypercubePoint& x) const {
        check(theta, x);
        double t = 0.0, lin = 0.0, p_gate = 1.0, h = 1.0;
        for (int i = 0; i < n_; ++i) {
            double th = theta[static_cast<std::size_t>(i)];
            t += th;
            lin += th * (x.coord(i) + offset_);
            double s = xi(th * x.coord(i), n_);
            p_gate *= 1.0 - s * s;
            h *= 1.0 + s - s * s;
        }
        double gate = 1.0 - p_gate;
        return bias_.value(t) + outer_.value(lin + gate * (h - lin));
    }

    std::vector<double> gradient(const ParamVector& theta, const HypercubePoint& x) const {
        check(theta, x);
        std::vector<double> s(static_cast<std::size_t>(n_)), sp(static_cast<std::size_t>(n_));
        std::vector<double> g_fac(static_cast<std::size_t>(n_)), h_fac(static_cast<std::size_t>(n_));
        double t = 0.0, lin = 0.0;
        for (int i = 0; i < n_; ++i) {
            std::size_t ii = static_cast<std::size_t>(i);
            double th = theta[ii];
            t += th;
            lin += th * (x.coord(i) + offset_);
            s[ii] = xi(th * x.coord(i), n_);
            sp[ii] = xi_prime(th * x.coord(i), n_);
            g_fac[ii] = 1.0 - s[ii] * s[ii];
            h_fac[ii] = 1.0 + s[ii] - s[ii] * s[ii];
        }
        std::vector<double> eg, eh;
        detail::exclusive_products(g_fac, eg);
        detail::exclusive_products(h_fac, eh);
        double p_gate = eg[0] * g_fac[0];
        double h = eh[0] * h_fac[0];
        double gate = 1.0 - p_gate;
        double u = lin + gate * (h - lin);
        double w_prime = outer_.derivative(u);
        double b_prime = bias_.derivative(t);

        std::vector<double> grad(static_cast<std::size_t>(n_));
        for (int i = 0; i < n_; ++i) {
            std::size_t ii = static_cast<std::size_t>(i);
            double xc = x.coord(i) + offset_;
            double dgate = 2.0 * s[ii] * sp[ii] * x.coord(i) * eg[ii];
            double dh = (1.0 - 2.0 * s[ii]) * sp[ii] * x.coord(i) * eh[ii];
            double du = xc + dgate * (h - lin) + gate * (dh - xc);
            grad[ii] = b_prime + w_prime * du;
        }
        return grad;
    }

private:
    void check(const ParamVector& theta, const HypercubePoint& x) const {
        if (static_cast<int>(theta.size()) != n_ || x.n != n_)
            throw std::invalid_argument("LpModel: dimension mismatch");
    }

    int n_;
    double offset_;
    SigmaWindow bias_;
    SigmaWindow outer_;
    double scale_bound_;
};

// Small saturated-linear model over an arbitrary per-point feature table:
//   f_theta(x) = W(<theta, phi(x)> + b0),  W = sigma window [-1,1] -> [-1,1].
// Bounded values and gradients for every theta, so the scale bound is global.
// Unbiased at theta = 0 iff b0 = 0. Used by randomized stress suites.
class WindowFeatureModel {
public:
    WindowFeatureModel(int n, std::vector<std::vector<double>> feature_table, double b0)
        : n_(n), b0_(b0), table_(std::move(feature_table)), outer_(-1.0, 1.0, -1.0, 1.0) {
        if (table_.size() != (std::size_t{1} << n))
            throw std::invalid_argument("WindowFeatureModel: table must cover the cube");
        p_ = static_cast<int>(table_[0].size());
        double max_sq = 0.0;
        for (const auto& row : table_) {
            if (static_cast<int>(row.size()) != p_)
                throw std::invalid_argument("WindowFeatureModel: ragged table");
            double sq = 0.0;
            for (double v : row) sq += v * v;
            max_sq = std::max(max_sq, sq);
        }
        scale_bound_ = std::sqrt(1.0 + 4.0 * max_sq);
    }

    int n() const { return n_; }
    int param_count() const { return p_; }
    double scale_bound() const { return scale_bound_; }

    double value(const ParamVector& theta, const HypercubePoint& x) const {
        return outer_.value(pre(theta, x));
    }

    std::vector<double> gradient(const ParamVector& theta, const HypercubePoint& x) const {
        double w_prime = outer_.derivative(pre(theta, x));
        const auto& phi = table_[x.bits];
        std::vector<double> grad(static_cast<std::size_t>(p_));
        for (int j = 0; j < p_; ++j) grad[static_cast<std::size_t>(j)] = w_prime * phi[static_cast<std::size_t>(j)];
        return grad;
    }

private:
    double pre(const ParamVector& theta, const HypercubePoint& x) const {
        if (static_cast<int>(theta.size()) != p_ || x.n != n_)
            throw std::invalid_argument("WindowFeatureModel: dimension mismatch");
        const auto& phi = table_[x.bits];
        double z = b0_;
        for (int j = 0; j < p_; ++j) z += theta[static_cast<std::size_t>(j)] * phi[static_cast<std::size_t>(j)];
        return z;
    }

    int n_;
    int p_;
    double b0_;
    std::vector<std::vector<double>> table_;
    SigmaWindow outer_;
    double scale_bound_;
};

}  // namespace gdtk
