#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace gdtk {

// Piecewise quadratic sigmoidal unit: 0 below 0, 2z^2 on [0,1/2],
// 4z - 2z^2 - 1 on [1/2,1], 1 above 1. Continuously differentiable.
inline double sigma(double z) {
    if (z <= 0.0) return 0.0;
    if (z >= 1.0) return 1.0;
    if (z <= 0.5) return 2.0 * z * z;
    return 4.0 * z - 2.0 * z * z - 1.0;
}

inline double sigma_prime(double z) {
    if (z <= 0.0 || z >= 1.0) return 0.0;
    if (z <= 0.5) return 4.0 * z;
    return 4.0 - 4.0 * z;
}

// Rescaled window c + sigma((z-a)/(b-a)) * (d-c): equals c below a, d above b,
// with |derivative| <= 2|d-c|/(b-a).
struct SigmaWindow {
    double a, b, c, d;
    SigmaWindow(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
        if (!(a < b)) throw std::invalid_argument("SigmaWindow: need a < b");
    }
    double value(double z) const { return c + sigma((z - a) / (b - a)) * (d - c); }
    double derivative(double z) const { return sigma_prime((z - a) / (b - a)) * (d - c) / (b - a); }
};

inline double sigma_window(double a, double b, double c, double d, double z) {
    return SigmaWindow(a, b, c, d).value(z);
}

// Soft sign, coordinate-wise: sigma(n z - 2) - sigma(-n z - 2).
// Vanishes on |z| <= 2/n and saturates to +-1 for |z| >= 3/n.
inline double xi(double z, int n) {
    return sigma(n * z - 2.0) - sigma(-n * z - 2.0);
}

inline double xi_prime(double z, int n) {
    return n * (sigma_prime(n * z - 2.0) + sigma_prime(-n * z - 2.0));
}

inline std::vector<double> xi(const std::vector<double>& z, int n) {
    std::vector<double> out(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = xi(z[i], n);
    return out;
}

// Non-emptiness gate S(s) = 1 - prod(1 - s_i^2); on s in {-1,0,1}^n this is 1{s != 0}.
inline double gate_S(const std::vector<double>& s) {
    double prod = 1.0;
    for (double si : s) prod *= 1.0 - si * si;
    return 1.0 - prod;
}

// Product over the nonzero coordinates: H(s) = prod(1 + s_i - s_i^2);
// on s in {-1,0,1}^n this is prod_{i: s_i != 0} s_i.
inline double product_H(const std::vector<double>& s) {
    double prod = 1.0;
    for (double si : s) prod *= 1.0 + si - si * si;
    return prod;
}

}  // namespace gdtk
