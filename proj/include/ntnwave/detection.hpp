// detection.hpp - LMMSE equalization and MMSE successive detection (MMSE-SD).
//
// MMSE-SD repeatedly: forms W = (HᴴH + σ²I)⁻¹Hᴴ for the current H, picks the
// undetected symbol with the largest post-equalization SINR, slices it,
// subtracts its contribution from y and zeroes its column in H.
//
// detect_mmse_sd() is the production path. It never forms W: for the active
// index set A with P = (G_AA + σ²I)⁻¹, G = HᴴH,
//   SINR_k = 1/(σ² P_kk) − 1,   x̂_k = (P z)_k with z = H_Aᴴ y,
// and removing index q is a rank-1 downdate of P. This is O(n³) per frame.
// reference::detect_mmse_sd() recomputes W at every step, O(n⁴), and is kept
// as the conformance baseline.

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "ntnwave/types.hpp"

namespace ntnwave {

struct Constellation {
    std::vector<Complex> points;
    std::vector<std::uint32_t> labels;  // bit label of each point
    unsigned bits_per_symbol = 0;
};

enum class DetectorKind { Lmmse, MmseSd };

std::string_view to_string(DetectorKind kind);
DetectorKind parse_detector_kind(std::string_view name);

struct DetectorConfig {
    DetectorKind kind = DetectorKind::MmseSd;
    double noise_variance = 0.0;
    Constellation constellation;
};

struct DetectionResult {
    std::vector<std::size_t> indices;  // constellation index per symbol
    ComplexVector symbols;
    std::vector<std::size_t> detection_order;
};

/// Per-iteration record of an MMSE-SD run: the chosen index and the SINR of
/// every symbol at that step (-inf for already detected ones).
struct MmseSdTrace {
    std::vector<std::size_t> order;
    std::vector<RealVector> sinr;

    /// One line per step: "step <i> q=<q> sinr=<v>".
    void write(std::ostream& out) const;
};

/// σ² actually used by the detectors: σ² itself when positive, otherwise
/// 1e-12·trace(G)/n (or 1e-12 for an all-zero G).
double regularized_noise_variance(double sigma2, const ComplexMatrix& gram);

ComplexMatrix lmmse_weights(const ComplexMatrix& h_eff, double sigma2);

/// Post-equalization SINR of each active symbol; inactive entries are -inf.
/// Only active columns contribute to the interference sum.
RealVector sinr_per_symbol(const ComplexMatrix& w, const ComplexMatrix& h_eff, double sigma2,
                           const std::vector<bool>& active);

/// Nearest constellation index (Euclidean); ties go to the lowest index.
std::size_t slice_index(Complex z, const Constellation& constellation);
inline Complex slice(Complex z, const Constellation& constellation) {
    return constellation.points[slice_index(z, constellation)];
}

DetectionResult detect_lmmse(const ComplexVector& y, const ComplexMatrix& h_eff, const DetectorConfig& config);
/// Same, with the Gram matrix h_effᴴ h_eff supplied by the caller.
DetectionResult detect_lmmse(const ComplexVector& y, const ComplexMatrix& h_eff, const ComplexMatrix& gram,
                             const DetectorConfig& config);

DetectionResult detect_mmse_sd(const ComplexVector& y, const ComplexMatrix& h_eff, const DetectorConfig& config,
                               MmseSdTrace* trace = nullptr);
DetectionResult detect_mmse_sd(const ComplexVector& y, const ComplexMatrix& h_eff, const ComplexMatrix& gram,
                               const DetectorConfig& config, MmseSdTrace* trace = nullptr);

/// Dispatch on config.kind.
DetectionResult detect(const ComplexVector& y, const ComplexMatrix& h_eff, const ComplexMatrix& gram,
                       const DetectorConfig& config);

namespace reference {

/// Literal successive detection with a full W recomputation per step.
DetectionResult detect_mmse_sd(const ComplexVector& y, const ComplexMatrix& h_eff, const DetectorConfig& config,
                               MmseSdTrace* trace = nullptr);

}  // namespace reference
}  // namespace ntnwave
