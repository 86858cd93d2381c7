// ntnwave - BER sweeps of OFDM/AFDM/OCDM/OTFS over NTN TDL channels.
//
//   ntnwave run [--config file] [--preset name] [--out csv] [--plot dat]
//               [--seed u64] [--threads n] [--<key> value ...]
//   ntnwave profiles [--out csv]
//
// NTNWAVE_THREADS sets the default thread count.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "ntnwave/channel.hpp"
#include "ntnwave/config.hpp"
#include "ntnwave/montecarlo.hpp"
#include "ntnwave/report.hpp"

namespace {

int threads_from_env() {
    if (const char* env = std::getenv("NTNWAVE_THREADS")) {
        try {
            return std::stoi(env);
        } catch (const std::exception&) {
            std::cerr << "warning: ignoring invalid NTNWAVE_THREADS='" << env << "'\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"BER simulation of delay-Doppler waveforms over NTN TDL channels"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run an SNR sweep and write CSV / plot data");
    std::string config_path;
    std::string preset;
    std::string out_csv = "ber.csv";
    std::string plot_path;
    std::optional<std::uint64_t> seed;
    int threads = threads_from_env();
    run->add_option("--config", config_path, "key=value config file")->check(CLI::ExistingFile);
    run->add_option("--preset", preset, "figure preset")->check(CLI::IsMember(ntnwave::preset_names()));
    run->add_option("--out", out_csv, "CSV output path")->capture_default_str();
    run->add_option("--plot", plot_path, "plot-data output path");
    run->add_option("--seed", seed, "master seed (overrides config)");
    run->add_option("--threads", threads, "worker threads (0 = OpenMP default)");

    // Every config key is also accepted as a flag; applied after the file.
    std::map<std::string, std::string> overrides;
    for (const auto& key : ntnwave::config_keys()) {
        if (key == "seed") continue;  // --seed above
        run->add_option_function<std::string>(
            "--" + key, [&overrides, key](const std::string& v) { overrides[key] = v; }, "config key " + key);
    }

    auto* profiles = app.add_subcommand("profiles", "Export the built-in TDL tap tables");
    std::string profiles_out;
    profiles->add_option("--out", profiles_out, "output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    if (*profiles) {
        if (profiles_out.empty()) {
            ntnwave::write_profile_table(std::cout);
        } else {
            std::ofstream out(profiles_out);
            if (!out) {
                std::cerr << "error: cannot open '" << profiles_out << "'\n";
                return 1;
            }
            ntnwave::write_profile_table(out);
        }
        return 0;
    }

    try {
        ntnwave::Experiment exp = ntnwave::default_experiment();
        if (!preset.empty()) ntnwave::apply_preset(exp, preset);
        if (!config_path.empty()) exp = ntnwave::parse_config_file(config_path, exp);
        for (const auto& [key, value] : overrides) ntnwave::apply_setting(exp, key, value);
        if (seed) exp.base.master_seed = *seed;

        const auto curves = exp.expand();
        ntnwave::RunManifest manifest;
        manifest.config = ntnwave::render_config(exp);
        manifest.master_seed = exp.base.master_seed;
        manifest.started_utc = ntnwave::utc_timestamp();

        std::vector<ntnwave::BerRecord> records;
        const std::size_t total = curves.size() * exp.base.snr_db.size();
        std::size_t done = 0;
        for (const auto& cfg : curves) {
            ntnwave::Simulator sim(cfg);
            for (const auto& w : sim.warnings()) {
                std::cerr << "warning: " << w << '\n';
                manifest.warnings.push_back(w);
            }
            sim.run_sweep(threads, [&](std::size_t, std::size_t, const ntnwave::BerRecord& rec) {
                ++done;
                std::fprintf(stderr, "point %zu/%zu snr=%gdB ber=%s\n", done, total, rec.snr_db,
                             ntnwave::format_ber(rec.ber).c_str());
                records.push_back(rec);
            });
        }

        ntnwave::emit_csv(records, out_csv);
        for (const auto& rec : records) manifest.record_checksums.push_back(ntnwave::crc32_hex(ntnwave::csv_row(rec)));
        if (!plot_path.empty()) {
            manifest.omitted_zero_error_points = ntnwave::emit_plotdata(records, plot_path);
            if (manifest.omitted_zero_error_points > 0) {
                std::cerr << "warning: " << manifest.omitted_zero_error_points
                          << " zero-error point(s) omitted from plot data\n";
            }
        }
        manifest.finished_utc = ntnwave::utc_timestamp();
        std::ofstream mf(out_csv + ".manifest.json");
        mf << manifest.to_json() << '\n';
        if (!mf) {
            std::cerr << "error: cannot write manifest\n";
            return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
