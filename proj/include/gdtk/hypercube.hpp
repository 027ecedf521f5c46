#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gdtk {

// Default cap on exhaustive enumeration of {-1,+1}^n.
inline constexpr int kEnumerationCap = 24;

// A point of the hypercube {-1,+1}^n, packed as bits (bit 1 -> +1, bit 0 -> -1).
// Points themselves support n up to 64; the cap above only limits enumeration.
struct HypercubePoint {
    std::uint64_t bits = 0;
    int n = 0;

    HypercubePoint() = default;
    HypercubePoint(std::uint64_t bits_, int n_) : bits(bits_), n(n_) {
        if (n_ < 1 || n_ > 64) throw std::invalid_argument("HypercubePoint: n out of range");
        if (n_ < 64 && (bits_ >> n_) != 0)
            throw std::invalid_argument("HypercubePoint: stray bits above dimension");
    }

    // Coordinate value in {-1,+1}.
    double coord(int i) const { return ((bits >> i) & 1u) ? 1.0 : -1.0; }

    std::vector<double> to_vector() const {
        std::vector<double> v(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = coord(i);
        return v;
    }

    static HypercubePoint from_vector(const std::vector<double>& v) {
        std::uint64_t b = 0;
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] > 0) b |= (std::uint64_t{1} << i);
        return HypercubePoint(b, static_cast<int>(v.size()));
    }

    // Binary string, coordinate 0 first.
    std::string to_string() const {
        std::string s(static_cast<std::size_t>(n), '0');
        for (int i = 0; i < n; ++i)
            if ((bits >> i) & 1u) s[static_cast<std::size_t>(i)] = '1';
        return s;
    }

    bool operator==(const HypercubePoint&) const = default;
};

// A subset of coordinates I of [n], kept as a bitmask.
struct SupportSet {
    std::uint64_t mask = 0;
    int n = 0;

    SupportSet() = default;
    SupportSet(std::uint64_t mask_, int n_) : mask(mask_), n(n_) {
        if (n_ < 1 || n_ > 64) throw std::invalid_argument("SupportSet: n out of range");
        if (n_ < 64 && (mask_ >> n_) != 0)
            throw std::invalid_argument("SupportSet: index out of range");
    }

    static SupportSet from_indices(const std::vector<int>& idx, int n) {
        std::uint64_t m = 0;
        for (int i : idx) {
            if (i < 0 || i >= n) throw std::invalid_argument("SupportSet: index out of range");
            m |= (std::uint64_t{1} << i);
        }
        return SupportSet(m, n);
    }

    int size() const { return std::popcount(mask); }
    bool contains(int i) const { return (mask >> i) & 1u; }

    std::vector<int> indices() const {
        std::vector<int> out;
        for (int i = 0; i < n; ++i)
            if (contains(i)) out.push_back(i);
        return out;
    }

    bool operator==(const SupportSet&) const = default;
};

// chi_I(x) = prod_{i in I} x_i.
inline int parity_label(const HypercubePoint& x, const SupportSet& I) {
    if (I.n != x.n) throw std::invalid_argument("parity_label: dimension mismatch");
    // Product over I is -1 iff an odd number of selected coordinates are -1.
    int minus_ones = std::popcount(I.mask & ~x.bits);
    return (minus_ones % 2 == 0) ? 1 : -1;
}

// All k-subsets of [n], in lexicographic mask order.
inline std::vector<SupportSet> all_supports(int n, int k) {
    std::vector<SupportSet> out;
    if (k < 0 || k > n) return out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
        if (std::popcount(m) == k) out.emplace_back(m, n);
    return out;
}

// All subsets of [n] with |I| >= min_size.
inline std::vector<SupportSet> all_supports_at_least(int n, int min_size) {
    std::vector<SupportSet> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
        if (std::popcount(m) >= min_size) out.emplace_back(m, n);
    return out;
}

}  // namespace gdtk
