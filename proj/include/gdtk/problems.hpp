#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "gdtk/hypercube.hpp"
#include "gdtk/measure.hpp"

namespace gdtk {

// Biased sparse parities: x ~ (1-alpha) * Uniform + alpha * Product(E[x_i] = 1/2),
// y = chi_I(x). The biased component has P(x_i = +1) = 3/4.
inline FiniteMeasure enumerate_bsp(int n, int k, const SupportSet& I, double alpha) {
    if (n < 2 || n > kEnumerationCap) throw std::invalid_argument("enumerate_bsp: n out of range");
    if (k < 2 || k > n) throw std::invalid_argument("enumerate_bsp: need 2 <= k <= n");
    if (I.n != n || I.size() != k) throw std::invalid_argument("enumerate_bsp: |I| != k");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("enumerate_bsp: alpha out of range");

    const double uniform_w = (1.0 - alpha) * std::ldexp(1.0, -n);
    std::vector<Atom> atoms;
    atoms.reserve(std::size_t{1} << n);
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b) {
        int ones = std::popcount(b);
        // prod of 3/4 per +1 coordinate and 1/4 per -1 coordinate
        double biased_w = std::pow(0.75, ones) * std::pow(0.25, n - ones);
        HypercubePoint x(b, n);
        atoms.push_back({b, uniform_w + alpha * biased_w,
                         parity_label(x, I) > 0 ? 1.0 : 0.0});
    }
    return FiniteMeasure(n, std::move(atoms));
}

// The uniform-input half of a parity problem: x ~ Uniform, y = chi_I(x).
inline FiniteMeasure enumerate_uniform_parity(int n, const SupportSet& I) {
    if (n < 1 || n > kEnumerationCap)
        throw std::invalid_argument("enumerate_uniform_parity: n out of range");
    const double w = std::ldexp(1.0, -n);
    std::vector<Atom> atoms;
    atoms.reserve(std::size_t{1} << n);
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b)
        atoms.push_back({b, w, parity_label(HypercubePoint(b, n), I) > 0 ? 1.0 : 0.0});
    return FiniteMeasure(n, std::move(atoms));
}

// Leaky parities: with weight (1-alpha) a uniform point with y = chi_I(x), with
// weight alpha the fixed point x^I (x_i = +1 iff i in I) with a fair label coin.
// The atom at x^I carries the merged weight and mixed p_plus.
inline FiniteMeasure enumerate_lp(int n, const SupportSet& I, double alpha) {
    if (n < 2 || n > kEnumerationCap) throw std::invalid_argument("enumerate_lp: n out of range");
    if (I.n != n || I.size() < 2) throw std::invalid_argument("enumerate_lp: need |I| >= 2");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("enumerate_lp: alpha out of range");

    const double uniform_w = (1.0 - alpha) * std::ldexp(1.0, -n);
    std::vector<Atom> atoms;
    atoms.reserve((std::size_t{1} << n) + 1);
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << n); ++b)
        atoms.push_back({b, uniform_w, parity_label(HypercubePoint(b, n), I) > 0 ? 1.0 : 0.0});
    atoms.push_back({I.mask, alpha, 0.5});  // leak atom; FiniteMeasure merges it
    return FiniteMeasure(n, std::move(atoms));
}

// The leak point x^I.
inline HypercubePoint leak_atom(const SupportSet& I) { return HypercubePoint(I.mask, I.n); }

// Streaming sampler for the biased-sparse-parity source at dimensions beyond the
// enumeration cap (used by the ReLU demo at n = 64/128).
class BspSampler {
public:
    BspSampler(int n, const SupportSet& I, double alpha, std::uint64_t seed)
        : n_(n), I_(I), alpha_(alpha), rng_(seed) {
        if (n < 2 || n > 64) throw std::invalid_argument("BspSampler: n out of range");
        if (I.n != n || I.size() < 1) throw std::invalid_argument("BspSampler: bad support");
        if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("BspSampler: alpha");
    }

    std::pair<HypercubePoint, int> draw() {
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        bool biased = unif(rng_) < alpha_;
        double p_plus = biased ? 0.75 : 0.5;
        std::uint64_t bits = 0;
        for (int i = 0; i < n_; ++i)
            if (unif(rng_) < p_plus) bits |= (std::uint64_t{1} << i);
        HypercubePoint x(bits, n_);
        return {x, parity_label(x, I_)};
    }

    std::vector<std::pair<HypercubePoint, int>> draw(std::size_t m) {
        std::vector<std::pair<HypercubePoint, int>> out;
        out.reserve(m);
        for (std::size_t j = 0; j < m; ++j) out.push_back(draw());
        return out;
    }

private:
    int n_;
    SupportSet I_;
    double alpha_;
    std::mt19937_64 rng_;
};

}  // namespace gdtk
