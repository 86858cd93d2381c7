#include "ntnwave/channel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

namespace ntnwave {

namespace {

const TdlProfile kTdlA{TdlModel::TdlA,
                       {{0.0, 0.0, Fading::Rayleigh, std::nullopt},
                        {1.0811, -4.675, Fading::Rayleigh, std::nullopt},
                        {2.8416, -6.482, Fading::Rayleigh, std::nullopt}}};

const TdlProfile kTdlB{TdlModel::TdlB,
                       {{0.0, 0.0, Fading::Rayleigh, std::nullopt},
                        {0.7249, -1.973, Fading::Rayleigh, std::nullopt},
                        {0.7410, -4.332, Fading::Rayleigh, std::nullopt},
                        {5.7392, -11.914, Fading::Rayleigh, std::nullopt}}};

// First tap of the LOS models is split into a specular and a Rayleigh part.
const TdlProfile kTdlC{TdlModel::TdlC,
                       {{0.0, -0.394, Fading::Los, 10.224},
                        {0.0, -10.618, Fading::Rayleigh, std::nullopt},
                        {14.8124, -23.373, Fading::Rayleigh, std::nullopt}}};

const TdlProfile kTdlD{TdlModel::TdlD,
                       {{0.0, -0.284, Fading::Los, 11.707},
                        {0.0, -11.991, Fading::Rayleigh, std::nullopt},
                        {0.5596, -9.887, Fading::Rayleigh, std::nullopt},
                        {7.3340, -16.771, Fading::Rayleigh, std::nullopt}}};

std::string normalize_name(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '_' || c == '-' || c == ' ') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

}  // namespace

std::string_view to_string(TdlModel model) {
    switch (model) {
    case TdlModel::TdlA: return "TDL_A";
    case TdlModel::TdlB: return "TDL_B";
    case TdlModel::TdlC: return "TDL_C";
    case TdlModel::TdlD: return "TDL_D";
    }
    return "?";
}

std::string_view to_string(Fading fading) { return fading == Fading::Los ? "LOS" : "Rayleigh"; }

std::string_view to_string(GainMode mode) {
    return mode == GainMode::PdpNormalized ? "PdpNormalized" : "UniformInversePaths";
}

TdlModel parse_tdl_model(std::string_view name) {
    const std::string s = normalize_name(name);
    if (s == "tdla" || s == "a") return TdlModel::TdlA;
    if (s == "tdlb" || s == "b") return TdlModel::TdlB;
    if (s == "tdlc" || s == "c") return TdlModel::TdlC;
    if (s == "tdld" || s == "d") return TdlModel::TdlD;
    throw ConfigError("unknown channel model '" + std::string(name) + "' (expected TDL_A..TDL_D)");
}

GainMode parse_gain_mode(std::string_view name) {
    const std::string s = normalize_name(name);
    if (s == "pdpnormalized" || s == "pdp") return GainMode::PdpNormalized;
    if (s == "uniforminversepaths" || s == "uniform") return GainMode::UniformInversePaths;
    throw ConfigError("unknown gain mode '" + std::string(name) +
                      "' (expected PdpNormalized or UniformInversePaths)");
}

const TdlProfile& builtin_profile(TdlModel model) {
    switch (model) {
    case TdlModel::TdlA: return kTdlA;
    case TdlModel::TdlB: return kTdlB;
    case TdlModel::TdlC: return kTdlC;
    case TdlModel::TdlD: return kTdlD;
    }
    throw ConfigError("invalid TDL model");
}

std::vector<std::size_t> scale_delays(const TdlProfile& profile, double rms_ds_s, double sample_period_s) {
    if (!(rms_ds_s > 0.0) || !(sample_period_s > 0.0)) {
        throw ConfigError("scale_delays: rms delay spread and sample period must be positive");
    }
    std::vector<std::size_t> taps;
    taps.reserve(profile.taps.size());
    for (const auto& tap : profile.taps) {
        const double samples = std::round(tap.normalized_delay * rms_ds_s / sample_period_s);
        taps.push_back(static_cast<std::size_t>(samples));
    }
    return taps;
}

std::vector<std::size_t> scale_delays(const TdlProfile& profile, double rms_ds_s, double sample_period_s,
                                      std::size_t n) {
    auto taps = scale_delays(profile, rms_ds_s, sample_period_s);
    for (std::size_t t : taps) {
        if (t >= n) {
            throw ConfigError("delay exceeds frame: tap " + std::to_string(t) + " >= frame length " +
                              std::to_string(n));
        }
    }
    return taps;
}

double satellite_doppler(const SatelliteGeometry& geom) {
    const double elev = geom.elevation_deg * kPi / 180.0;
    return (geom.v_sat / kSpeedOfLight) * (geom.earth_radius_r / (geom.earth_radius_r + geom.altitude_h)) *
           std::cos(elev) * geom.carrier_hz;
}

std::vector<double> tap_powers(const TdlProfile& profile, GainMode mode) {
    const std::size_t m = profile.taps.size();
    std::vector<double> p(m);
    if (mode == GainMode::UniformInversePaths) {
        std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(m));
        return p;
    }
    std::transform(profile.taps.begin(), profile.taps.end(), p.begin(),
                   [](const TdlTap& t) { return std::pow(10.0, t.power_db / 10.0); });
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& v : p) v /= total;
    return p;
}

ChannelRealization sample_realization(const TdlProfile& profile, const std::vector<std::size_t>& taps,
                                      const DopplerConfig& doppler, GainMode mode, std::size_t n,
                                      double sample_period_s, Rng& rng) {
    if (profile.taps.empty()) {
        throw ConfigError("sample_realization: empty profile");
    }
    if (taps.size() != profile.taps.size()) {
        throw InvalidDimension("sample_realization: one delay tap per profile sub-tap required");
    }
    for (std::size_t t : taps) {
        if (t >= n) {
            throw ConfigError("delay exceeds frame: tap " + std::to_string(t) + " >= frame length " +
                              std::to_string(n));
        }
    }

    const auto powers = tap_powers(profile, mode);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> angle(-kPi, kPi);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);

    ChannelRealization real;
    real.n = n;
    real.sample_period_s = sample_period_s;
    real.paths.reserve(profile.taps.size());
    for (std::size_t m = 0; m < profile.taps.size(); ++m) {
        ChannelPath path;
        path.delay_tap = taps[m];
        if (profile.taps[m].fading == Fading::Los) {
            const double phi = phase(rng);
            path.gain = std::polar(std::sqrt(powers[m]), phi);
            path.doppler_hz = doppler.bulk_doppler_hz;
        } else {
            const double scale = std::sqrt(powers[m] / 2.0);
            const double re = gauss(rng);
            const double im = gauss(rng);
            path.gain = Complex(re * scale, im * scale);
            path.doppler_hz = doppler.bulk_doppler_hz + jakes_doppler(doppler.alpha_max_hz, angle(rng));
        }
        real.paths.push_back(path);
    }
    return real;
}

namespace {

template <typename Sink>
void for_each_entry(const ChannelRealization& real, Sink&& sink) {
    const std::size_t n = real.n;
    if (n == 0) {
        throw InvalidDimension("channel_matrix: frame length must be >= 1");
    }
    for (const auto& path : real.paths) {
        if (path.delay_tap >= n) {
            throw ConfigError("channel_matrix: delay tap " + std::to_string(path.delay_tap) +
                              " out of range for frame length " + std::to_string(n));
        }
        const double step = path.doppler_hz * real.sample_period_s;  // cycles per sample
        for (std::size_t i = 0; i < n; ++i) {
            double cycles = step * static_cast<double>(i);
            cycles -= std::floor(cycles);
            const Complex rot = std::polar(1.0, -2.0 * kPi * cycles);
            sink(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>((i + n - path.delay_tap) % n),
                 path.gain * rot);
        }
    }
}

}  // namespace

ComplexMatrix channel_matrix(const ChannelRealization& real) {
    const auto size = static_cast<Eigen::Index>(real.n);
    ComplexMatrix h = ComplexMatrix::Zero(size, size);
    for_each_entry(real, [&h](Eigen::Index r, Eigen::Index c, Complex v) { h(r, c) += v; });
    return h;
}

SparseComplexMatrix channel_matrix_sparse(const ChannelRealization& real) {
    std::vector<Eigen::Triplet<Complex>> entries;
    entries.reserve(real.n * real.paths.size());
    for_each_entry(real, [&entries](Eigen::Index r, Eigen::Index c, Complex v) { entries.emplace_back(r, c, v); });
    const auto size = static_cast<Eigen::Index>(real.n);
    SparseComplexMatrix h(size, size);
    h.setFromTriplets(entries.begin(), entries.end());  // duplicates are summed
    return h;
}

void write_profile_table(std::ostream& out) {
    out << "model,tap,delay,power_db,fading,k_factor_db\n";
    for (TdlModel model : {TdlModel::TdlA, TdlModel::TdlB, TdlModel::TdlC, TdlModel::TdlD}) {
        const auto& profile = builtin_profile(model);
        for (std::size_t i = 0; i < profile.taps.size(); ++i) {
            const auto& tap = profile.taps[i];
            out << to_string(model) << ',' << i << ',' << tap.normalized_delay << ',' << tap.power_db << ','
                << to_string(tap.fading) << ',';
            if (tap.k_factor_db) out << *tap.k_factor_db;
            out << '\n';
        }
    }
}

}  // namespace ntnwave
