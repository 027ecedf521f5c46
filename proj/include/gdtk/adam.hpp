#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gdtk/problems.hpp"
#include "gdtk/relu_mlp.hpp"

namespace gdtk {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    int steps = 20000;
    int batch_size = 64;
    int checkpoint_every = 500;
    int test_size = 4096;
    std::uint64_t seed = 0;
    double stop_at_accuracy = 2.0;  // early stop once a checkpoint reaches this; > 1 disables
};

struct AdamCheckpoint {
    int step;
    double train_loss;     // minibatch square loss at this step
    double test_accuracy;  // sign agreement on a fixed held-out sample
};

struct AdamReport {
    std::vector<AdamCheckpoint> curve;
    std::vector<double> final_params;
    double final_test_accuracy = 0.0;
    bool diverged = false;
};

// Minibatch Adam on the square loss (f(x) - y)^2 for a two-layer ReLU net on
// the biased sparse-parity stream. Deterministic in the seed: held-out test
// set, initialization, and minibatch order all derive from it.
inline AdamReport adam_train(const ReluMlp& model, int n, const SupportSet& I, double alpha,
                             const AdamConfig& cfg) {
    if (cfg.steps < 0 || cfg.batch_size < 1 || cfg.test_size < 1 || cfg.checkpoint_every < 1)
        throw std::invalid_argument("adam_train: bad config");

    BspSampler test_sampler(n, I, alpha, cfg.seed * 2654435761u + 1);
    auto test_set = test_sampler.draw(static_cast<std::size_t>(cfg.test_size));
    BspSampler train_sampler(n, I, alpha, cfg.seed * 2654435761u + 2);

    const int p = model.param_count();
    std::vector<double> theta = model.init_params(cfg.seed);
    std::vector<double> m(p, 0.0), v(p, 0.0), grad(p, 0.0);

    AdamReport rep;
    auto test_accuracy = [&](const std::vector<double>& th) {
        int correct = 0;
        for (const auto& [x, y] : test_set) {
            double f = model.value(th, x);
            if ((f >= 0.0 ? 1 : -1) == y) ++correct;
        }
        return static_cast<double>(correct) / test_set.size();
    };

    for (int t = 1; t <= cfg.steps; ++t) {
        auto batch = train_sampler.draw(static_cast<std::size_t>(cfg.batch_size));
        std::fill(grad.begin(), grad.end(), 0.0);
        double batch_loss = 0.0;
        for (const auto& [x, y] : batch) {
            double resid = model.value(theta, x) - y;
            batch_loss += resid * resid;
            std::vector<double> g = model.gradient(theta, x);
            double scale = 2.0 * resid / cfg.batch_size;
            for (int i = 0; i < p; ++i) grad[i] += scale * g[i];
        }
        batch_loss /= cfg.batch_size;

        for (int i = 0; i < p; ++i) {
            m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * grad[i];
            v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
            double mhat = m[i] / (1.0 - std::pow(cfg.beta1, t));
            double vhat = v[i] / (1.0 - std::pow(cfg.beta2, t));
            theta[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
        }

        for (double th : theta)
            if (!std::isfinite(th)) rep.diverged = true;
        if (rep.diverged) break;

        if (t % cfg.checkpoint_every == 0 || t == cfg.steps) {
            rep.curve.push_back({t, batch_loss, test_accuracy(theta)});
            if (rep.curve.back().test_accuracy >= cfg.stop_at_accuracy) break;
        }
    }

    if (cfg.steps == 0) rep.curve.push_back({0, 0.0, test_accuracy(theta)});
    rep.final_params = theta;
    rep.final_test_accuracy = rep.curve.empty() ? 0.0 : rep.curve.back().test_accuracy;
    return rep;
}

}  // namespace gdtk
