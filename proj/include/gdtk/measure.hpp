#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <stdexcept>
#include <vector>

#include "gdtk/hypercube.hpp"

namespace gdtk {

// Compensated (Kahan) summation in a fixed order.
class KahanSum {
public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

// One weighted point of a finite measure over {-1,+1}^n x {-1,+1}.
// p_plus is the conditional probability that y = +1 at this point.
struct Atom {
    std::uint64_t bits = 0;
    double weight = 0.0;
    double p_plus = 0.0;
};

// Exact finite measure: the population oracle everything else consumes.
// Atoms are unique in x and kept sorted by bits; immutable after construction.
class FiniteMeasure {
public:
    FiniteMeasure(int n, std::vector<Atom> atoms) : n_(n), atoms_(std::move(atoms)) {
        if (n < 1 || n > kEnumerationCap)
            throw std::invalid_argument("FiniteMeasure: dimension outside enumeration cap");
        std::sort(atoms_.begin(), atoms_.end(),
                  [](const Atom& a, const Atom& b) { return a.bits < b.bits; });
        // Merge duplicate points; mixed labels become a single p_plus.
        std::vector<Atom> merged;
        for (const Atom& a : atoms_) {
            if (a.weight < 0.0) throw std::invalid_argument("FiniteMeasure: negative weight");
            if (a.p_plus < -1e-15 || a.p_plus > 1.0 + 1e-15)
                throw std::invalid_argument("FiniteMeasure: p_plus outside [0,1]");
            if (!merged.empty() && merged.back().bits == a.bits) {
                Atom& m = merged.back();
                double w = m.weight + a.weight;
                if (w > 0.0) m.p_plus = (m.weight * m.p_plus + a.weight * a.p_plus) / w;
                m.weight = w;
            } else {
                merged.push_back(a);
            }
        }
        atoms_ = std::move(merged);
        KahanSum total;
        for (const Atom& a : atoms_) total.add(a.weight);
        if (std::abs(total.value() - 1.0) > 1e-12)
            throw std::invalid_argument("FiniteMeasure: weights do not sum to 1");
    }

    int n() const { return n_; }
    const std::vector<Atom>& atoms() const { return atoms_; }

    HypercubePoint point(const Atom& a) const { return HypercubePoint(a.bits, n_); }

    // E_{(x,y)}[g(x,y)], accumulated with compensated summation in atom order.
    template <class G>
    double expectation(G&& g) const {
        KahanSum s;
        for (const Atom& a : atoms_) {
            HypercubePoint x(a.bits, n_);
            s.add(a.weight * (a.p_plus * g(x, +1) + (1.0 - a.p_plus) * g(x, -1)));
        }
        return s.value();
    }

    // E[x_i] of the marginal.
    double coordinate_mean(int i) const {
        KahanSum s;
        for (const Atom& a : atoms_) s.add(a.weight * HypercubePoint(a.bits, n_).coord(i));
        return s.value();
    }

    // i.i.d. draws by inverse CDF over atoms, then a label coin. Deterministic per seed.
    std::vector<std::pair<HypercubePoint, int>> sample(std::uint64_t seed, std::size_t m) const {
        if (m < 1) throw std::invalid_argument("FiniteMeasure::sample: m must be >= 1");
        std::vector<double> cdf(atoms_.size());
        KahanSum acc;
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            acc.add(atoms_[i].weight);
            cdf[i] = acc.value();
        }
        cdf.back() = 1.0;
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::vector<std::pair<HypercubePoint, int>> out;
        out.reserve(m);
        for (std::size_t j = 0; j < m; ++j) {
            double u = unif(rng);
            std::size_t idx = static_cast<std::size_t>(
                std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
            if (idx >= atoms_.size()) idx = atoms_.size() - 1;
            const Atom& a = atoms_[idx];
            int y = (unif(rng) < a.p_plus) ? +1 : -1;
            out.emplace_back(HypercubePoint(a.bits, n_), y);
        }
        return out;
    }

    // Debug CSV: (bits as binary string, weight, p_plus). Not a stable format.
    void write_csv(std::ostream& os) const {
        os << "bits,weight,p_plus\n";
        char buf[64];
        for (const Atom& a : atoms_) {
            std::snprintf(buf, sizeof buf, ",%.17g,%.17g\n", a.weight, a.p_plus);
            os << HypercubePoint(a.bits, n_).to_string() << buf;
        }
    }

private:
    int n_;
    std::vector<Atom> atoms_;
};

}  // namespace gdtk
