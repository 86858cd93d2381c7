// report.hpp - CSV / plot-data output and the run manifest.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "ntnwave/montecarlo.hpp"

namespace ntnwave {

inline constexpr const char* kToolVersion = "ntnwave 0.1.0";
inline constexpr const char* kCsvHeader = "waveform,channel,detector,snr_db,frames,bits,bit_errors,ber,seed";

/// Mantissa with six decimals and an unpadded exponent: 5.000000e-3.
std::string format_ber(double ber);

std::string csv_row(const BerRecord& rec);
void write_csv(std::ostream& out, const std::vector<BerRecord>& records);
void emit_csv(const std::vector<BerRecord>& records, const std::filesystem::path& path);

/// Parses a file produced by write_csv(). `ber` is recomputed from the counts
/// and checked against the printed value.
std::vector<BerRecord> read_csv(std::istream& in);

/// One block per (waveform, channel, detector) curve, separated by two blank
/// lines, each row "snr_db ber". Zero-error points are omitted and noted in a
/// comment line. Returns the number of omitted rows.
std::size_t write_plotdata(std::ostream& out, const std::vector<BerRecord>& records);
std::size_t emit_plotdata(const std::vector<BerRecord>& records, const std::filesystem::path& path);

struct RunManifest {
    std::string config;  // render_config() snapshot
    std::string tool_version = kToolVersion;
    std::uint64_t master_seed = 0;
    std::string started_utc;
    std::string finished_utc;
    std::vector<std::string> record_checksums;  // CRC-32 of each CSV row, hex
    std::size_t omitted_zero_error_points = 0;
    std::vector<std::string> warnings;

    std::string to_json() const;
};

std::string crc32_hex(const std::string& text);
std::string utc_timestamp();

}  // namespace ntnwave
