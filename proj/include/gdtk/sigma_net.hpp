#pragma once

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "gdtk/activations.hpp"

namespace gdtk {

// Product network over sigma units: a balanced tree of pair-product gadgets,
// each computing uv = ((u+v)^2 - u^2 - v^2) / 2 with squares realized as
// z^2 = 2 r^2 (sigma(z/2r) + sigma(-z/2r)), valid on |z| <= r. Inputs are
// restricted to [-1,1], so all squares use r = 2.
struct SigmaNet {
    int n = 0;           // declared fan-in
    int padded = 0;      // n rounded up to a power of two (padded with ones)
    int depth = 0;       // pair-product levels
    int edge_count = 0;  // weighted connections, counting each gadget's fixed wiring
};

namespace detail {

inline double sigma_square(double z, double r) {
    return 2.0 * r * r * (sigma(z / (2.0 * r)) + sigma(-z / (2.0 * r)));
}

inline double pair_product(double u, double v) {
    const double r = 2.0;
    return 0.5 * (sigma_square(u + v, r) - sigma_square(u, r) - sigma_square(v, r));
}

// Per gadget: 2 edges forming u+v, 3 squares of 2 sigma units each with input
// and output edges (12), 3 edges into the final combiner.
inline constexpr int kEdgesPerGadget = 17;

}  // namespace detail

inline SigmaNet compile_product_net(int n) {
    if (n < 1) throw std::invalid_argument("compile_product_net: need n >= 1");
    SigmaNet net;
    net.n = n;
    net.padded = 1;
    while (net.padded < n) net.padded *= 2;
    net.depth = 0;
    for (int m = net.padded; m > 1; m /= 2) ++net.depth;
    net.edge_count = detail::kEdgesPerGadget * (net.padded - 1);
    return net;
}

inline double eval_sigma_net(const SigmaNet& net, const std::vector<double>& inputs) {
    if (static_cast<int>(inputs.size()) != net.n)
        throw std::invalid_argument("eval_sigma_net: wrong fan-in");
    std::vector<double> level(inputs);
    for (double v : level)
        if (!(v >= -1.0 && v <= 1.0))
            throw std::domain_error("eval_sigma_net: input outside [-1,1]");
    level.resize(static_cast<std::size_t>(net.padded), 1.0);
    while (level.size() > 1) {
        std::vector<double> next(level.size() / 2);
        for (std::size_t i = 0; i < next.size(); ++i)
            next[i] = detail::pair_product(level[2 * i], level[2 * i + 1]);
        level = std::move(next);
    }
    return level[0];
}

// Tree of pair-product gadgets as a DOT graph, for documentation.
inline void write_dot(const SigmaNet& net, std::ostream& os) {
    os << "digraph product_net {\n  rankdir=BT;\n";
    int id = 0;
    std::vector<int> level_ids;
    for (int i = 0; i < net.padded; ++i) {
        os << "  n" << id << " [label=\"" << (i < net.n ? "x" + std::to_string(i) : "1")
           << "\", shape=box];\n";
        level_ids.push_back(id++);
    }
    while (level_ids.size() > 1) {
        std::vector<int> next;
        for (std::size_t i = 0; i + 1 < level_ids.size(); i += 2) {
            os << "  n" << id << " [label=\"pairprod\"];\n";
            os << "  n" << level_ids[i] << " -> n" << id << ";\n";
            os << "  n" << level_ids[i + 1] << " -> n" << id << ";\n";
            next.push_back(id++);
        }
        level_ids = std::move(next);
    }
    os << "}\n";
}

}  // namespace gdtk
