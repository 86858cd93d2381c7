// montecarlo.hpp - end-to-end BER simulation over an SNR sweep.
//
// A frame is a pure function of (master_seed, snr_db, frame_index): bits,
// channel and noise each come from their own mt19937_64 stream whose seed is
// a SplitMix64 hash of that key and a stream id. Frames inside an SNR point
// run in OpenMP batches; the stop rule is evaluated over frames in index
// order, so the records do not depend on thread count or batch size.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ntnwave/channel.hpp"
#include "ntnwave/detection.hpp"
#include "ntnwave/types.hpp"
#include "ntnwave/waveforms.hpp"

namespace ntnwave {

struct StopRule {
    std::uint64_t min_bit_errors = 500;
    std::uint64_t max_frames = 20000;
};

struct SimConfig {
    WaveformKind waveform = WaveformKind::Afdm;
    std::size_t n = 256;
    std::size_t otfs_k = 16;
    std::size_t otfs_l = 16;
    std::optional<double> c1;  // derived from the Doppler budget when unset
    double c2 = 0.0;
    int guard_xi = 1;

    bool identity_channel = false;  // AWGN-only link, bypasses the TDL model
    TdlModel channel = TdlModel::TdlC;
    double rms_ds_s = 100e-9;
    DopplerConfig doppler;
    bool satellite_doppler = false;  // when set, bulk Doppler = satellite_doppler(geometry)
    SatelliteGeometry geometry;
    GainMode gain_mode = GainMode::PdpNormalized;
    double subcarrier_spacing_hz = 15e3;

    DetectorKind detector = DetectorKind::MmseSd;
    unsigned modulation_order = 16;

    std::vector<double> snr_db;
    StopRule stop;
    std::uint64_t master_seed = 1;
};

struct BerRecord {
    std::string waveform;
    std::string channel;
    std::string detector;
    std::uint64_t seed = 0;
    double snr_db = 0.0;
    std::uint64_t frames = 0;
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;
    double ber = 0.0;
};

struct FrameOutcome {
    std::uint64_t bit_errors = 0;
    std::uint64_t bits = 0;
};

/// 10^(−snr_db/10): unit-energy symbols over a unit-power channel.
double snr_to_sigma2(double snr_db);

/// Adds i.i.d. CN(0, σ²) noise.
ComplexVector awgn(const ComplexVector& signal, double sigma2, Rng& rng);

/// Stream seed for (master_seed, snr_db, frame_index, stream).
std::uint64_t derive_seed(std::uint64_t master_seed, double snr_db, std::uint64_t frame_index, std::uint64_t stream);

/// Validated, precomputed simulation state for one curve.
class Simulator {
public:
    explicit Simulator(SimConfig config);

    const SimConfig& config() const { return config_; }
    const WaveformSpec& waveform() const { return spec_; }
    const Constellation& constellation() const { return constellation_; }
    const std::vector<std::size_t>& delay_taps() const { return taps_; }
    double sample_period_s() const { return sample_period_s_; }
    /// Non-fatal configuration findings (e.g. AFDM orthogonality not met).
    const std::vector<std::string>& warnings() const { return warnings_; }

    FrameOutcome run_frame(double snr_db, std::uint64_t frame_index) const;

    using Progress = std::function<void(std::size_t point, std::size_t total, const BerRecord&)>;
    /// threads <= 0 uses the OpenMP default.
    BerRecord run_point(double snr_db, int threads = 0) const;
    std::vector<BerRecord> run_sweep(int threads = 0, const Progress& progress = {}) const;

private:
    SimConfig config_;
    WaveformSpec spec_;
    Constellation constellation_;
    const TdlProfile* profile_ = nullptr;
    std::vector<std::size_t> taps_;
    double sample_period_s_ = 0.0;
    std::vector<std::string> warnings_;
};

FrameOutcome run_frame(const SimConfig& config, double snr_db, std::uint64_t frame_index);
std::vector<BerRecord> run_sweep(const SimConfig& config, int threads = 0);

}  // namespace ntnwave
