#include "ntnwave/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace ntnwave {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

double to_double(std::string_view key, std::string_view text) {
    text = trim(text);
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
        throw ConfigError("config key '" + std::string(key) + "': expected a number, got '" + std::string(text) + "'");
    }
    return v;
}

std::uint64_t to_u64(std::string_view key, std::string_view text) {
    text = trim(text);
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("config key '" + std::string(key) + "': expected a non-negative integer, got '" +
                          std::string(text) + "'");
    }
    return v;
}

bool to_bool(std::string_view key, std::string_view text) {
    std::string s(trim(text));
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
    if (s == "0" || s == "false" || s == "no" || s == "off") return false;
    throw ConfigError("config key '" + std::string(key) + "': expected true/false, got '" + std::string(text) + "'");
}

template <typename T, typename Parse>
std::vector<T> parse_list(std::string_view text, Parse parse) {
    std::vector<T> out;
    for (auto part : split(text, ',')) {
        if (part.empty()) continue;
        out.push_back(parse(part));
    }
    if (out.empty()) {
        throw ConfigError("empty list '" + std::string(text) + "'");
    }
    return out;
}

std::string fmt_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);  // shortest round-trip form
    return std::string(buf, res.ptr);
}

template <typename T, typename Name>
std::string join(const std::vector<T>& items, Name name) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        out += std::string(name(items[i]));
    }
    return out;
}

using Setter = std::function<void(Experiment&, std::string_view key, std::string_view value)>;
using Getter = std::function<std::string(const Experiment&)>;

struct KeySpec {
    std::string name;
    Setter set;
    Getter get;
};

#define NTN_DOUBLE_KEY(NAME, FIELD)                                                                   \
    KeySpec {                                                                                         \
        NAME, [](Experiment& e, std::string_view k, std::string_view v) { e.base.FIELD = to_double(k, v); }, \
            [](const Experiment& e) { return fmt_double(e.base.FIELD); }                              \
    }

const std::vector<KeySpec>& key_table() {
    static const std::vector<KeySpec> table = {
        {"waveform",
         [](Experiment& e, std::string_view, std::string_view v) {
             e.waveforms = parse_list<WaveformKind>(v, parse_waveform_kind);
         },
         [](const Experiment& e) { return join(e.waveforms, [](WaveformKind k) { return to_string(k); }); }},
        {"n",
         [](Experiment& e, std::string_view k, std::string_view v) { e.base.n = to_u64(k, v); },
         [](const Experiment& e) { return std::to_string(e.base.n); }},
        {"otfs_k",
         [](Experiment& e, std::string_view k, std::string_view v) { e.base.otfs_k = to_u64(k, v); },
         [](const Experiment& e) { return std::to_string(e.base.otfs_k); }},
        {"otfs_l",
         [](Experiment& e, std::string_view k, std::string_view v) { e.base.otfs_l = to_u64(k, v); },
         [](const Experiment& e) { return std::to_string(e.base.otfs_l); }},
        {"c1",
         [](Experiment& e, std::string_view k, std::string_view v) {
             if (trim(v) == "auto") {
                 e.base.c1.reset();
             } else {
                 e.base.c1 = to_double(k, v);
             }
         },
         [](const Experiment& e) { return e.base.c1 ? fmt_double(*e.base.c1) : std::string("auto"); }},
        NTN_DOUBLE_KEY("c2", c2),
        {"guard_xi",
         [](Experiment& e, std::string_view k, std::string_view v) {
             e.base.guard_xi = static_cast<int>(to_u64(k, v));
         },
         [](const Experiment& e) { return std::to_string(e.base.guard_xi); }},
        {"identity_channel",
         [](Experiment& e, std::string_view k, std::string_view v) { e.base.identity_channel = to_bool(k, v); },
         [](const Experiment& e) { return std::string(e.base.identity_channel ? "true" : "false"); }},
        {"channel",
         [](Experiment& e, std::string_view, std::string_view v) {
             e.channels = parse_list<TdlModel>(v, parse_tdl_model);
         },
         [](const Experiment& e) { return join(e.channels, [](TdlModel m) { return to_string(m); }); }},
        NTN_DOUBLE_KEY("rms_ds_s", rms_ds_s),
        NTN_DOUBLE_KEY("alpha_max_hz", doppler.alpha_max_hz),
        NTN_DOUBLE_KEY("bulk_doppler_hz", doppler.bulk_doppler_hz),
        {"satellite_doppler",
         [](Experiment& e, std::string_view k, std::string_view v) { e.base.satellite_doppler = to_bool(k, v); },
         [](const Experiment& e) { return std::string(e.base.satellite_doppler ? "true" : "false"); }},
        NTN_DOUBLE_KEY("v_sat", geometry.v_sat),
        NTN_DOUBLE_KEY("altitude_m", geometry.altitude_h),
        NTN_DOUBLE_KEY("earth_radius_m", geometry.earth_radius_r),
        NTN_DOUBLE_KEY("elevation_deg", geometry.elevation_deg),
        NTN_DOUBLE_KEY("carrier_hz", geometry.carrier_hz),
        {"gain_mode",
         [](Experiment& e, std::string_view, std::string_view v) { e.base.gain_mode = parse_gain_mode(trim(v)); },
         [](const Experiment& e) { return std::string(to_string(e.base.gain_mode)); }},
        NTN_DOUBLE_KEY("subcarrier_spacing_hz", subcarrier_spacing_hz),
        {"detector",
         [](Experiment& e, std::string_view, std::string_view v) {
             e.detectors = parse_list<DetectorKind>(v, parse_detector_kind);
         },
         [](const Experiment& e) { return join(e.detectors, [](DetectorKind d) { return to_string(d); }); }},
        {"modulation_order",
         [](Experiment& e, std::string_view k, std::string_view v) {
             const auto order = to_u64(k, v);
             if (order != 4 && order != 16 && order != 64) {
                 throw ConfigError("config key 'modulation_order': must be 4, 16 or 64");
             }
             e.base.modulation_order = static_cast<unsigned>(order);
         },
         [](const Experiment& e) { return std::to_string(e.base.modulation_order); }},
        {"snr_db",
         [](Experiment& e, std::string_view, std::string_view v) { e.base.snr_db = parse_snr_list(v); },
         [](const Experiment& e) {
             return join(e.base.snr_db, [](double s) { return fmt_double(s); });
         }},
        {"min_bit_errors",
         [](Experiment& e, std::string_view k, std::string_view v) { e.base.stop.min_bit_errors = to_u64(k, v); },
         [](const Experiment& e) { return std::to_string(e.base.stop.min_bit_errors); }},
        {"max_frames",
         [](Experiment& e, std::string_view k, std::string_view v) { e.base.stop.max_frames = to_u64(k, v); },
         [](const Experiment& e) { return std::to_string(e.base.stop.max_frames); }},
        {"seed",
         [](Experiment& e, std::string_view k, std::string_view v) { e.base.master_seed = to_u64(k, v); },
         [](const Experiment& e) { return std::to_string(e.base.master_seed); }},
    };
    return table;
}

#undef NTN_DOUBLE_KEY

}  // namespace

std::vector<double> parse_snr_list(std::string_view text) {
    std::vector<double> out;
    for (auto part : split(text, ',')) {
        if (part.empty()) continue;
        const auto fields = split(part, ':');
        if (fields.size() == 1) {
            out.push_back(to_double("snr_db", fields[0]));
        } else if (fields.size() == 3) {
            const double start = to_double("snr_db", fields[0]);
            const double step = to_double("snr_db", fields[1]);
            const double stop = to_double("snr_db", fields[2]);
            if (!(step > 0.0) || stop < start) {
                throw ConfigError("config key 'snr_db': range '" + std::string(part) +
                                  "' needs step > 0 and end >= start");
            }
            // count from the integer number of steps to avoid accumulating rounding
            const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
            for (std::size_t i = 0; i < count; ++i) {
                out.push_back(start + step * static_cast<double>(i));
            }
        } else {
            throw ConfigError("config key 'snr_db': malformed entry '" + std::string(part) +
                              "' (expected value or start:step:end)");
        }
    }
    return out;
}

std::vector<SimConfig> Experiment::expand() const {
    std::vector<SimConfig> out;
    for (auto w : waveforms) {
        for (auto c : channels) {
            for (auto d : detectors) {
                SimConfig cfg = base;
                cfg.waveform = w;
                cfg.channel = c;
                cfg.detector = d;
                Simulator probe(cfg);  // validates; throws ConfigError
                out.push_back(std::move(cfg));
            }
        }
    }
    return out;
}

Experiment default_experiment() {
    Experiment exp;
    exp.base.snr_db = parse_snr_list("0:2:24");
    return exp;
}

std::vector<std::string> preset_names() {
    return {"fig3-tdlc", "fig4-tdla", "fig4-tdlb", "fig4-tdlc", "fig4-tdld"};
}

void apply_preset(Experiment& exp, std::string_view name) {
    const std::map<std::string_view, TdlModel> presets = {{"fig3-tdlc", TdlModel::TdlC},
                                                          {"fig4-tdla", TdlModel::TdlA},
                                                          {"fig4-tdlb", TdlModel::TdlB},
                                                          {"fig4-tdlc", TdlModel::TdlC},
                                                          {"fig4-tdld", TdlModel::TdlD}};
    const auto it = presets.find(name);
    if (it == presets.end()) {
        throw ConfigError("unknown preset '" + std::string(name) + "'");
    }
    exp.waveforms = {WaveformKind::Afdm, WaveformKind::Ocdm, WaveformKind::Otfs};
    exp.channels = {it->second};
    exp.detectors = {DetectorKind::Lmmse, DetectorKind::MmseSd};
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& spec : key_table()) k.push_back(spec.name);
        return k;
    }();
    return keys;
}

void apply_setting(Experiment& exp, std::string_view key, std::string_view value) {
    key = trim(key);
    for (const auto& spec : key_table()) {
        if (spec.name == key) {
            spec.set(exp, key, trim(value));
            return;
        }
    }
    throw ConfigError("unknown config key '" + std::string(key) + "'");
}

Experiment parse_config_text(std::string_view text, Experiment base) {
    std::size_t line_no = 0;
    for (auto line : split(text, '\n')) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = trim(line.substr(0, hash));
        }
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        try {
            apply_setting(base, line.substr(0, eq), line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return base;
}

Experiment parse_config_file(const std::filesystem::path& path, Experiment base) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str(), std::move(base));
}

std::string render_config(const Experiment& exp) {
    std::string out;
    for (const auto& spec : key_table()) {
        out += spec.name + " = " + spec.get(exp) + "\n";
    }
    return out;
}

}  // namespace ntnwave
