// waveforms.hpp - OFDM / AFDM / OCDM / OTFS modulators and effective channels.
//
// Every waveform is described by a unitary demodulation transform T:
//   OFDM  T = F_n
//   AFDM  T = Λ_{c1} F_n Λ_{c2}
//   OCDM  T = Λ_{1/2n} F_n Λ_{1/2n}
//   OTFS  T = F_l ⊗ P_rx   (modulation uses F_lᴴ ⊗ P_tx)
// modulate() returns Tᴴx (OTFS: the tx matrix times x) and demodulate()
// returns T r. The effective channel seen by the detector is T H Tᴴ.
//
// OTFS frames are vec() of a k×l delay-Doppler grid: rows are indexed by k,
// columns by l, stored column-major.

#pragma once

#include <cstddef>
#include <string_view>

#include "ntnwave/types.hpp"

namespace ntnwave {

enum class WaveformKind { Ofdm, Afdm, Ocdm, Otfs };

std::string_view to_string(WaveformKind kind);
/// Case-insensitive; throws ConfigError on unknown names.
WaveformKind parse_waveform_kind(std::string_view name);

struct ChirpRates {
    double c1 = 0.0;
    double c2 = 0.0;
    bool orthogonality_ok = false;
};

/// AFDM chirp rates from the maximum normalized Doppler and guard width:
/// c1 = (2(f_max + xi) + 1) / 2n; c2 is passed through. The orthogonality
/// flag reports 2(f_max + xi)(l_max + 1) + l_max <= n; a false flag is a
/// warning, not an error.
ChirpRates afdm_chirp_rates(int f_max, int xi, int l_max, std::size_t n, double c2 = 0.0);

class WaveformSpec {
public:
    static WaveformSpec ofdm(std::size_t n);
    static WaveformSpec afdm(std::size_t n, double c1, double c2);
    static WaveformSpec ocdm(std::size_t n);
    /// Rectangular (identity) pulses.
    static WaveformSpec otfs(std::size_t k, std::size_t l);
    static WaveformSpec otfs(std::size_t k, std::size_t l, ComplexMatrix pulse_tx, ComplexMatrix pulse_rx);

    WaveformKind kind() const { return kind_; }
    std::size_t size() const { return n_; }
    double c1() const { return c1_; }
    double c2() const { return c2_; }
    std::size_t grid_k() const { return k_; }
    std::size_t grid_l() const { return l_; }
    const ComplexMatrix& pulse_tx() const { return pulse_tx_; }
    const ComplexMatrix& pulse_rx() const { return pulse_rx_; }
    bool identity_pulses() const { return identity_pulses_; }

    /// Dense demodulation transform T (n×n).
    ComplexMatrix demod_matrix() const;
    /// Dense modulation transform (Tᴴ for the chirp family, F_lᴴ ⊗ P_tx for OTFS).
    ComplexMatrix mod_matrix() const;

    // Chirp diagonals for the DAFT family (empty for OTFS).
    const ComplexVector& chirp1() const { return chirp1_; }
    const ComplexVector& chirp2() const { return chirp2_; }

private:
    WaveformSpec() = default;

    WaveformKind kind_ = WaveformKind::Ofdm;
    std::size_t n_ = 0;
    double c1_ = 0.0;
    double c2_ = 0.0;
    std::size_t k_ = 0;
    std::size_t l_ = 0;
    ComplexMatrix pulse_tx_;
    ComplexMatrix pulse_rx_;
    bool identity_pulses_ = true;
    ComplexVector chirp1_;
    ComplexVector chirp2_;
};

/// Time-domain signal for one frame of symbols (FFT-backed).
ComplexVector modulate(const WaveformSpec& spec, const ComplexVector& frame);
/// Symbol-domain observation of a time-domain block (FFT-backed).
ComplexVector demodulate(const WaveformSpec& spec, const ComplexVector& received);
/// T h Tᴴ (FFT-backed).
ComplexMatrix effective_channel(const WaveformSpec& spec, const ComplexMatrix& h);

/// Mᴴ a M for the modulation transform M. With a = HᴴH this is the Gram
/// matrix of the effective channel, since the demodulation transform is unitary.
ComplexMatrix effective_gram(const WaveformSpec& spec, const ComplexMatrix& time_gram);

/// Apply T to every column of m in place.
void demodulate_columns(const WaveformSpec& spec, ComplexMatrix& m);

namespace reference {

// Dense-matrix versions of the operations above.
ComplexVector modulate(const WaveformSpec& spec, const ComplexVector& frame);
ComplexVector demodulate(const WaveformSpec& spec, const ComplexVector& received);
ComplexMatrix effective_channel(const WaveformSpec& spec, const ComplexMatrix& h);

}  // namespace reference
}  // namespace ntnwave
