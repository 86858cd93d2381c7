// channel.hpp - NTN tapped-delay-line LEO channel realizations.
//
// Profiles are the four TR 38.811 NTN TDL power delay profiles with
// normalized delays; scale_delays() maps them onto integer sample taps for a
// target RMS delay spread. A realization is a short list of paths (complex
// gain, integer delay, continuous Doppler) from which the n×n time-domain
// matrix is built:
//
//   H[i, (i - ℓ_m) mod n] += g_m · exp(-j2π ν_m i T_s)

#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "ntnwave/types.hpp"

namespace ntnwave {

using Rng = std::mt19937_64;

enum class TdlModel { TdlA, TdlB, TdlC, TdlD };
enum class Fading { Rayleigh, Los };
enum class GainMode { PdpNormalized, UniformInversePaths };

std::string_view to_string(TdlModel model);
std::string_view to_string(Fading fading);
std::string_view to_string(GainMode mode);
/// Accepts "TDL_C", "TDL-C", "tdlc", "C" and similar spellings.
TdlModel parse_tdl_model(std::string_view name);
GainMode parse_gain_mode(std::string_view name);

struct TdlTap {
    double normalized_delay = 0.0;
    double power_db = 0.0;
    Fading fading = Fading::Rayleigh;
    std::optional<double> k_factor_db;
};

struct TdlProfile {
    TdlModel model = TdlModel::TdlA;
    std::vector<TdlTap> taps;
};

struct DopplerConfig {
    double alpha_max_hz = 491.0;   // Jakes maximum Doppler from UE motion
    double bulk_doppler_hz = 0.0;  // deterministic satellite shift; 0 = pre-compensated
};

struct SatelliteGeometry {
    double v_sat = 7500.0;            // m/s
    double altitude_h = 600e3;        // m
    double earth_radius_r = 6371e3;   // m
    double elevation_deg = 50.0;
    double carrier_hz = 2.55e9;
};

struct ChannelPath {
    Complex gain;
    std::size_t delay_tap = 0;
    double doppler_hz = 0.0;
};

struct ChannelRealization {
    std::vector<ChannelPath> paths;
    std::size_t n = 0;
    double sample_period_s = 0.0;
};

/// Table rows for one of the four NTN TDL models.
const TdlProfile& builtin_profile(TdlModel model);

/// Integer delay taps round(delay·rms_ds/T_s), one per profile sub-tap.
std::vector<std::size_t> scale_delays(const TdlProfile& profile, double rms_ds_s, double sample_period_s);

/// Same, and throws ConfigError("delay exceeds frame") when any tap >= n.
std::vector<std::size_t> scale_delays(const TdlProfile& profile, double rms_ds_s, double sample_period_s,
                                      std::size_t n);

/// Doppler from satellite motion: (v/c)(R/(R+h)) cos(elev) f_c.
double satellite_doppler(const SatelliteGeometry& geom);

inline double jakes_doppler(double alpha_max_hz, double theta) { return alpha_max_hz * std::cos(theta); }

/// Linear per-sub-tap powers under the given normalization.
std::vector<double> tap_powers(const TdlProfile& profile, GainMode mode);

/// Draw one quasi-static realization. Rayleigh sub-taps get CN(0, p) gains and
/// Jakes Doppler bulk + α_max cos θ with θ ~ U[-π, π]; LOS sub-taps get
/// amplitude sqrt(p), a uniform phase and the bulk Doppler only.
ChannelRealization sample_realization(const TdlProfile& profile, const std::vector<std::size_t>& taps,
                                      const DopplerConfig& doppler, GainMode mode, std::size_t n,
                                      double sample_period_s, Rng& rng);

/// Dense n×n time-domain matrix of a realization.
ComplexMatrix channel_matrix(const ChannelRealization& real);
/// The same matrix in sparse form (one nonzero circular diagonal per distinct delay).
SparseComplexMatrix channel_matrix_sparse(const ChannelRealization& real);

/// Writes one CSV record per sub-tap of every builtin model:
/// model,tap,delay,power_db,fading,k_factor_db
void write_profile_table(std::ostream& out);

}  // namespace ntnwave
