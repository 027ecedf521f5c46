#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "gdtk/hypercube.hpp"

namespace gdtk {

// Two-layer ReLU network f(x) = sum_j a_j relu(<w_j, x> + b_j) + c with a flat
// parameter layout [W (width*n, row-major), b (width), a (width), c].
class ReluMlp {
public:
    ReluMlp(int n, int width) : n_(n), width_(width) {
        if (n < 1 || n > 64) throw std::invalid_argument("ReluMlp: n out of range");
        if (width < 1) throw std::invalid_argument("ReluMlp: width must be positive");
    }

    int n() const { return n_; }
    int width() const { return width_; }
    int param_count() const { return width_ * (n_ + 2) + 1; }

    // Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) per layer, matching the common
    // default for fully connected layers. Deterministic in the seed.
    std::vector<double> init_params(std::uint64_t seed) const {
        std::mt19937_64 rng(seed);
        const double s1 = 1.0 / std::sqrt(static_cast<double>(n_));
        const double s2 = 1.0 / std::sqrt(static_cast<double>(width_));
        std::uniform_real_distribution<double> u1(-s1, s1), u2(-s2, s2);
        std::vector<double> theta(param_count());
        int idx = 0;
        for (int j = 0; j < width_ * n_; ++j) theta[idx++] = u1(rng);  // W
        for (int j = 0; j < width_; ++j) theta[idx++] = u1(rng);       // b
        for (int j = 0; j < width_; ++j) theta[idx++] = u2(rng);       // a
        theta[idx++] = u2(rng);                                        // c
        return theta;
    }

    double value(const std::vector<double>& theta, const HypercubePoint& x) const {
        check(theta, x);
        const double* W = theta.data();
        const double* b = W + width_ * n_;
        const double* a = b + width_;
        double out = a[width_];  // c sits right after a
        for (int j = 0; j < width_; ++j) {
            double z = b[j];
            for (int i = 0; i < n_; ++i) z += W[j * n_ + i] * x.coord(i);
            if (z > 0.0) out += a[j] * z;
        }
        return out;
    }

    // Exact gradient on the differentiable region; at a kink (z == 0) the
    // subgradient 0 is used for the incoming weights.
    std::vector<double> gradient(const std::vector<double>& theta, const HypercubePoint& x) const {
        check(theta, x);
        const double* W = theta.data();
        const double* b = W + width_ * n_;
        const double* a = b + width_;
        std::vector<double> g(param_count(), 0.0);
        for (int j = 0; j < width_; ++j) {
            double z = b[j];
            for (int i = 0; i < n_; ++i) z += W[j * n_ + i] * x.coord(i);
            double* gW = g.data();
            double* gb = gW + width_ * n_;
            double* ga = gb + width_;
            if (z > 0.0) {
                for (int i = 0; i < n_; ++i) gW[j * n_ + i] = a[j] * x.coord(i);
                gb[j] = a[j];
                ga[j] = z;
            }
        }
        g[param_count() - 1] = 1.0;  // d/dc
        return g;
    }

private:
    void check(const std::vector<double>& theta, const HypercubePoint& x) const {
        if (static_cast<int>(theta.size()) != param_count())
            throw std::invalid_argument("ReluMlp: bad parameter vector size");
        if (x.n != n_) throw std::invalid_argument("ReluMlp: dimension mismatch");
    }

    int n_;
    int width_;
};

}  // namespace gdtk
