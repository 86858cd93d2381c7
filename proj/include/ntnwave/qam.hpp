// qam.hpp - Gray-coded square QAM (4/16/64) with unit average energy.
//
// Bit labelling follows the 3GPP NR convention: even-position bits drive the
// in-phase axis, odd-position bits the quadrature axis, and on each axis
//   level = (1 − 2b₀)(2^{m−1} − (1 − 2b₁)(2^{m−2} − …))
// so QPSK maps 00 → (1 + j)/√2 and 16-QAM maps 0011 → (3 + 3j)/√10.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ntnwave/detection.hpp"
#include "ntnwave/types.hpp"

namespace ntnwave {

using BitVector = std::vector<std::uint8_t>;

/// Constellation for order ∈ {4, 16, 64}; point i carries label i.
Constellation qam_constellation(unsigned order);

/// Map bits (length divisible by log2(order)) to symbols, first bit of each
/// group is the label MSB.
ComplexVector qam_map(std::span<const std::uint8_t> bits, unsigned order);

/// Exact inverse of qam_map for points of the constellation; off-grid values
/// are sliced to the nearest point first.
BitVector qam_demap(const ComplexVector& symbols, unsigned order);

/// Bits of the given constellation indices, appended to `out`.
void append_label_bits(const Constellation& constellation, std::span<const std::size_t> indices, BitVector& out);

}  // namespace ntnwave
