#include "ntnwave/qam.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>

namespace ntnwave {

namespace {

unsigned bits_for_order(unsigned order) {
    if (order != 4 && order != 16 && order != 64) {
        throw ConfigError("modulation order must be 4, 16 or 64 (got " + std::to_string(order) + ")");
    }
    unsigned bits = 0;
    while ((1u << bits) < order) ++bits;
    return bits;
}

// Axis amplitude (odd integer) for the per-axis bit sequence, MSB first.
double axis_level(const std::vector<unsigned>& axis_bits) {
    const std::size_t m = axis_bits.size();
    double level = 0.0;
    // Evaluate (1−2b₀)(2^{m−1} − (1−2b₁)(2^{m−2} − … (1−2b_{m−1})·1)) from the inside out.
    for (std::size_t i = m; i-- > 0;) {
        const double sign = 1.0 - 2.0 * axis_bits[i];
        if (i == m - 1) {
            level = sign;
        } else {
            level = sign * (std::ldexp(1.0, static_cast<int>(m - 1 - i)) - level);
        }
    }
    return level;
}

Constellation build(unsigned order) {
    const unsigned bits = bits_for_order(order);
    const unsigned per_axis = bits / 2;
    const double norm = std::sqrt(2.0 * (order - 1) / 3.0);
    Constellation c;
    c.bits_per_symbol = bits;
    c.points.resize(order);
    c.labels.resize(order);
    for (unsigned label = 0; label < order; ++label) {
        std::vector<unsigned> i_bits(per_axis), q_bits(per_axis);
        for (unsigned b = 0; b < bits; ++b) {
            const unsigned bit = (label >> (bits - 1 - b)) & 1u;
            (b % 2 == 0 ? i_bits : q_bits)[b / 2] = bit;
        }
        c.points[label] = Complex(axis_level(i_bits), axis_level(q_bits)) / norm;
        c.labels[label] = label;
    }
    return c;
}

}  // namespace

Constellation qam_constellation(unsigned order) {
    static std::mutex mu;
    static std::map<unsigned, Constellation> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) {
        it = cache.emplace(order, build(order)).first;
    }
    return it->second;
}

ComplexVector qam_map(std::span<const std::uint8_t> bits, unsigned order) {
    const unsigned per_symbol = bits_for_order(order);
    if (bits.size() % per_symbol != 0) {
        throw InvalidDimension("qam_map: " + std::to_string(bits.size()) + " bits is not a multiple of " +
                               std::to_string(per_symbol));
    }
    const Constellation c = qam_constellation(order);
    const std::size_t count = bits.size() / per_symbol;
    ComplexVector out(static_cast<Eigen::Index>(count));
    for (std::size_t s = 0; s < count; ++s) {
        unsigned label = 0;
        for (unsigned b = 0; b < per_symbol; ++b) {
            label = (label << 1) | (bits[s * per_symbol + b] & 1u);
        }
        out(static_cast<Eigen::Index>(s)) = c.points[label];
    }
    return out;
}

void append_label_bits(const Constellation& constellation, std::span<const std::size_t> indices, BitVector& out) {
    const unsigned per_symbol = constellation.bits_per_symbol;
    for (std::size_t idx : indices) {
        const std::uint32_t label = constellation.labels[idx];
        for (unsigned b = 0; b < per_symbol; ++b) {
            out.push_back(static_cast<std::uint8_t>((label >> (per_symbol - 1 - b)) & 1u));
        }
    }
}

BitVector qam_demap(const ComplexVector& symbols, unsigned order) {
    const Constellation c = qam_constellation(order);
    std::vector<std::size_t> indices(static_cast<std::size_t>(symbols.size()));
    for (Eigen::Index i = 0; i < symbols.size(); ++i) {
        indices[static_cast<std::size_t>(i)] = slice_index(symbols(i), c);
    }
    BitVector out;
    out.reserve(indices.size() * c.bits_per_symbol);
    append_label_bits(c, indices, out);
    return out;
}

}  // namespace ntnwave
