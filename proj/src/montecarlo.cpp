#include "ntnwave/montecarlo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <string>

#include <omp.h>

#include "ntnwave/qam.hpp"

namespace ntnwave {

namespace {

enum Stream : std::uint64_t { kBitsStream = 1, kChannelStream = 2, kNoiseStream = 3 };

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

WaveformSpec build_waveform(const SimConfig& cfg, std::size_t l_max, std::vector<std::string>& warnings) {
    switch (cfg.waveform) {
    case WaveformKind::Ofdm:
        return WaveformSpec::ofdm(cfg.n);
    case WaveformKind::Ocdm:
        return WaveformSpec::ocdm(cfg.n);
    case WaveformKind::Otfs:
        if (cfg.otfs_k * cfg.otfs_l != cfg.n) {
            throw ConfigError("OTFS grid " + std::to_string(cfg.otfs_k) + "x" + std::to_string(cfg.otfs_l) +
                              " does not match frame length " + std::to_string(cfg.n));
        }
        return WaveformSpec::otfs(cfg.otfs_k, cfg.otfs_l);
    case WaveformKind::Afdm: {
        const double alpha_total = cfg.doppler.alpha_max_hz + std::abs(cfg.doppler.bulk_doppler_hz);
        const int f_max = static_cast<int>(std::ceil(alpha_total / cfg.subcarrier_spacing_hz));
        const auto rates = afdm_chirp_rates(f_max, cfg.guard_xi, static_cast<int>(l_max), cfg.n, cfg.c2);
        if (!rates.orthogonality_ok) {
            warnings.push_back("AFDM orthogonality condition not met (f_max=" + std::to_string(f_max) +
                               ", xi=" + std::to_string(cfg.guard_xi) + ", l_max=" + std::to_string(l_max) +
                               ", n=" + std::to_string(cfg.n) + ")");
        }
        return WaveformSpec::afdm(cfg.n, cfg.c1.value_or(rates.c1), cfg.c2);
    }
    }
    throw ConfigError("invalid waveform");
}

void validate(const SimConfig& cfg) {
    if (cfg.n == 0) throw ConfigError("frame length n must be >= 1");
    if (cfg.stop.min_bit_errors < 1) throw ConfigError("min_bit_errors must be >= 1");
    if (cfg.stop.max_frames < 1) throw ConfigError("max_frames must be >= 1");
    if (!(cfg.subcarrier_spacing_hz > 0.0)) throw ConfigError("subcarrier spacing must be positive");
    if (!(cfg.rms_ds_s > 0.0)) throw ConfigError("rms delay spread must be positive");
    if (cfg.doppler.alpha_max_hz < 0.0) throw ConfigError("alpha_max_hz must be >= 0");
    if (cfg.guard_xi < 0) throw ConfigError("guard_xi must be >= 0");
    for (double s : cfg.snr_db) {
        if (!std::isfinite(s)) throw ConfigError("SNR points must be finite");
    }
    const auto& g = cfg.geometry;
    if (!(g.v_sat >= 0.0) || !(g.altitude_h > 0.0) || !(g.earth_radius_r > 0.0) || !(g.carrier_hz > 0.0) ||
        !(g.elevation_deg > 0.0 && g.elevation_deg <= 90.0)) {
        throw ConfigError("satellite geometry out of range (elevation must be in (0, 90] degrees)");
    }
}

}  // namespace

double snr_to_sigma2(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }

ComplexVector awgn(const ComplexVector& signal, double sigma2, Rng& rng) {
    if (sigma2 < 0.0) {
        throw ConfigError("awgn: noise variance must be >= 0");
    }
    if (sigma2 == 0.0) {
        return signal;
    }
    std::normal_distribution<double> gauss(0.0, std::sqrt(sigma2 / 2.0));
    ComplexVector out = signal;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        out(i) += Complex(re, im);
    }
    return out;
}

std::uint64_t derive_seed(std::uint64_t master_seed, double snr_db, std::uint64_t frame_index, std::uint64_t stream) {
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ std::bit_cast<std::uint64_t>(snr_db));
    h = splitmix64(h ^ frame_index);
    return splitmix64(h ^ stream);
}

Simulator::Simulator(SimConfig config)
    : config_(std::move(config)), spec_(WaveformSpec::ofdm(1)) {
    validate(config_);
    if (config_.satellite_doppler) {
        config_.doppler.bulk_doppler_hz = satellite_doppler(config_.geometry);
    }
    constellation_ = qam_constellation(config_.modulation_order);
    sample_period_s_ = 1.0 / (static_cast<double>(config_.n) * config_.subcarrier_spacing_hz);
    std::size_t l_max = 0;
    if (!config_.identity_channel) {
        profile_ = &builtin_profile(config_.channel);
        taps_ = scale_delays(*profile_, config_.rms_ds_s, sample_period_s_, config_.n);
        l_max = *std::max_element(taps_.begin(), taps_.end());
    }
    spec_ = build_waveform(config_, l_max, warnings_);
}

FrameOutcome Simulator::run_frame(double snr_db, std::uint64_t frame_index) const {
    const auto n = static_cast<Eigen::Index>(config_.n);
    const unsigned bps = constellation_.bits_per_symbol;
    const std::uint64_t seed = config_.master_seed;

    // Bits
    Rng bit_rng(derive_seed(seed, snr_db, frame_index, kBitsStream));
    BitVector bits(config_.n * bps);
    for (std::size_t i = 0; i < bits.size(); i += 64) {
        const std::uint64_t word = bit_rng();
        for (std::size_t b = 0; b < 64 && i + b < bits.size(); ++b) {
            bits[i + b] = static_cast<std::uint8_t>((word >> b) & 1u);
        }
    }
    const ComplexVector x = qam_map(bits, config_.modulation_order);
    const ComplexVector s = modulate(spec_, x);

    // Channel
    ComplexVector received;
    ComplexMatrix h_eff;
    ComplexMatrix gram;
    if (config_.identity_channel) {
        received = s;
        h_eff = ComplexMatrix::Identity(n, n);
        gram = ComplexMatrix::Identity(n, n);
    } else {
        Rng channel_rng(derive_seed(seed, snr_db, frame_index, kChannelStream));
        const auto real = sample_realization(*profile_, taps_, config_.doppler, config_.gain_mode, config_.n,
                                             sample_period_s_, channel_rng);
        const SparseComplexMatrix h = channel_matrix_sparse(real);
        received = h * s;
        h_eff = effective_channel(spec_, ComplexMatrix(h));
        const ComplexMatrix time_gram = ComplexMatrix(h.adjoint() * h);
        gram = effective_gram(spec_, time_gram);
    }

    const double sigma2 = snr_to_sigma2(snr_db);
    Rng noise_rng(derive_seed(seed, snr_db, frame_index, kNoiseStream));
    const ComplexVector r = awgn(received, sigma2, noise_rng);
    const ComplexVector y = demodulate(spec_, r);

    DetectorConfig det{config_.detector, sigma2, constellation_};
    const DetectionResult result = detect(y, h_eff, gram, det);

    BitVector decided;
    decided.reserve(bits.size());
    append_label_bits(constellation_, result.indices, decided);

    FrameOutcome out;
    out.bits = bits.size();
    for (std::size_t i = 0; i < bits.size(); ++i) {
        out.bit_errors += bits[i] != decided[i];
    }
    return out;
}

BerRecord Simulator::run_point(double snr_db, int threads) const {
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
    const std::uint64_t batch = static_cast<std::uint64_t>(std::max(1, nthreads)) * 2;

    BerRecord rec;
    rec.waveform = std::string(to_string(config_.waveform));
    rec.channel = config_.identity_channel ? "IDENTITY" : std::string(to_string(config_.channel));
    rec.detector = std::string(to_string(config_.detector));
    rec.seed = config_.master_seed;
    rec.snr_db = snr_db;

    std::vector<FrameOutcome> outcomes;
    bool stop = false;
    while (!stop && rec.frames < config_.stop.max_frames) {
        const std::uint64_t first = rec.frames;
        const std::uint64_t count = std::min(batch, config_.stop.max_frames - first);
        outcomes.assign(count, FrameOutcome{});
        std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
            try {
                outcomes[static_cast<std::size_t>(i)] = run_frame(snr_db, first + static_cast<std::uint64_t>(i));
            } catch (...) {
#pragma omp critical(ntnwave_frame_failure)
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);

        // Frame-ordered accumulation keeps the stopping frame independent of batching.
        for (const auto& o : outcomes) {
            rec.frames += 1;
            rec.bits += o.bits;
            rec.bit_errors += o.bit_errors;
            if (rec.bit_errors >= config_.stop.min_bit_errors) {
                stop = true;
                break;
            }
        }
    }
    rec.ber = rec.bits == 0 ? 0.0 : static_cast<double>(rec.bit_errors) / static_cast<double>(rec.bits);
    return rec;
}

std::vector<BerRecord> Simulator::run_sweep(int threads, const Progress& progress) const {
    std::vector<BerRecord> records;
    records.reserve(config_.snr_db.size());
    for (std::size_t i = 0; i < config_.snr_db.size(); ++i) {
        records.push_back(run_point(config_.snr_db[i], threads));
        if (progress) progress(i, config_.snr_db.size(), records.back());
    }
    return records;
}

FrameOutcome run_frame(const SimConfig& config, double snr_db, std::uint64_t frame_index) {
    return Simulator(config).run_frame(snr_db, frame_index);
}

std::vector<BerRecord> run_sweep(const SimConfig& config, int threads) {
    return Simulator(config).run_sweep(threads);
}

}  // namespace ntnwave
