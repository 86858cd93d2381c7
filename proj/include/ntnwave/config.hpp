// config.hpp - flat key=value experiment configuration and figure presets.
//
// A config file is a list of `key = value` lines; '#' starts a comment. Every
// key maps onto one SimConfig field. `waveform`, `channel` and `detector`
// accept comma-separated lists, and the experiment runs their cartesian
// product. SNR lists accept "a:step:b" ranges and comma-separated values.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ntnwave/montecarlo.hpp"

namespace ntnwave {

struct Experiment {
    SimConfig base;
    std::vector<WaveformKind> waveforms{WaveformKind::Afdm};
    std::vector<TdlModel> channels{TdlModel::TdlC};
    std::vector<DetectorKind> detectors{DetectorKind::MmseSd};

    /// One validated SimConfig per (waveform, channel, detector), in that nesting order.
    std::vector<SimConfig> expand() const;
};

/// Defaults: 2.55 GHz, 15 kHz, 16-QAM, N = 256, K = L = 16, α_max = 491 Hz,
/// TDL-C, AFDM, MMSE-SD, SNR 0:2:24 dB.
Experiment default_experiment();

/// Names accepted by apply_preset().
std::vector<std::string> preset_names();
/// fig3-tdlc, fig4-tdla … fig4-tdld: AFDM/OCDM/OTFS × LMMSE/MMSE-SD over
/// the named model.
void apply_preset(Experiment& exp, std::string_view name);

/// Throws ConfigError naming the key for unknown keys or malformed values.
void apply_setting(Experiment& exp, std::string_view key, std::string_view value);

/// All recognised keys, in canonical order.
const std::vector<std::string>& config_keys();

Experiment parse_config_text(std::string_view text, Experiment base = default_experiment());
Experiment parse_config_file(const std::filesystem::path& path, Experiment base = default_experiment());

/// Canonical key=value rendering; parse_config_text() of it reproduces `exp`.
std::string render_config(const Experiment& exp);

/// "0:2:24" → 0,2,…,24; "0,5,10" → 0,5,10; mixed forms are comma-joined.
std::vector<double> parse_snr_list(std::string_view text);

}  // namespace ntnwave
