#include "ntnwave/report.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include <zlib.h>

namespace ntnwave {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot open '" + path.string() + "' for writing");
    }
    return out;
}

std::string shortest(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

template <typename T>
T parse_number(const std::string& text, std::size_t line_no) {
    T v{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("csv line " + std::to_string(line_no) + ": bad number '" + text + "'");
    }
    return v;
}

}  // namespace

std::string format_ber(double ber) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", ber);
    std::string s(buf);
    const auto e = s.find('e');
    std::string mantissa = s.substr(0, e);
    std::string exponent = s.substr(e + 1);
    std::string sign;
    if (!exponent.empty() && (exponent[0] == '+' || exponent[0] == '-')) {
        if (exponent[0] == '-') sign = "-";
        exponent.erase(0, 1);
    }
    const auto nz = exponent.find_first_not_of('0');
    exponent = nz == std::string::npos ? "0" : exponent.substr(nz);
    if (exponent == "0") sign.clear();
    return mantissa + "e" + sign + exponent;
}

std::string csv_row(const BerRecord& rec) {
    std::string row;
    row += rec.waveform + ',' + rec.channel + ',' + rec.detector + ',';
    row += shortest(rec.snr_db) + ',';
    row += std::to_string(rec.frames) + ',' + std::to_string(rec.bits) + ',' + std::to_string(rec.bit_errors) + ',';
    row += format_ber(rec.ber) + ',';
    row += std::to_string(rec.seed);
    return row;
}

void write_csv(std::ostream& out, const std::vector<BerRecord>& records) {
    out << kCsvHeader << '\n';
    for (const auto& rec : records) {
        out << csv_row(rec) << '\n';
    }
}

void emit_csv(const std::vector<BerRecord>& records, const std::filesystem::path& path) {
    auto out = open_output(path);
    write_csv(out, records);
}

std::vector<BerRecord> read_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line) || line != kCsvHeader) {
        throw ConfigError("csv: missing or unexpected header");
    }
    std::vector<BerRecord> records;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split_fields(line);
        if (f.size() != 9) {
            throw ConfigError("csv line " + std::to_string(line_no) + ": expected 9 fields");
        }
        BerRecord rec;
        rec.waveform = f[0];
        rec.channel = f[1];
        rec.detector = f[2];
        rec.snr_db = parse_number<double>(f[3], line_no);
        rec.frames = parse_number<std::uint64_t>(f[4], line_no);
        rec.bits = parse_number<std::uint64_t>(f[5], line_no);
        rec.bit_errors = parse_number<std::uint64_t>(f[6], line_no);
        const double printed = parse_number<double>(f[7], line_no);
        rec.seed = parse_number<std::uint64_t>(f[8], line_no);
        rec.ber = rec.bits == 0 ? 0.0 : static_cast<double>(rec.bit_errors) / static_cast<double>(rec.bits);
        if (std::abs(printed - rec.ber) > 1e-6 * std::max(rec.ber, 1e-300) + 1e-300) {
            throw ConfigError("csv line " + std::to_string(line_no) + ": ber does not match bit_errors/bits");
        }
        records.push_back(std::move(rec));
    }
    return records;
}

std::size_t write_plotdata(std::ostream& out, const std::vector<BerRecord>& records) {
    using Key = std::tuple<std::string, std::string, std::string>;
    std::vector<Key> order;
    std::map<Key, std::vector<const BerRecord*>> curves;
    for (const auto& rec : records) {
        Key key{rec.waveform, rec.channel, rec.detector};
        auto [it, inserted] = curves.try_emplace(key);
        if (inserted) order.push_back(key);
        it->second.push_back(&rec);
    }
    std::size_t omitted = 0;
    bool first = true;
    for (const auto& key : order) {
        if (!first) out << "\n\n";
        first = false;
        const auto& [w, c, d] = key;
        out << "# " << w << ' ' << c << ' ' << d << '\n';
        out << "# snr_db ber\n";
        for (const auto* rec : curves[key]) {
            if (rec->bit_errors == 0) {
                out << "# omitted snr_db=" << shortest(rec->snr_db) << " (0 errors in " << rec->bits << " bits)\n";
                ++omitted;
                continue;
            }
            out << shortest(rec->snr_db) << ' ' << format_ber(rec->ber) << '\n';
        }
    }
    return omitted;
}

std::size_t emit_plotdata(const std::vector<BerRecord>& records, const std::filesystem::path& path) {
    auto out = open_output(path);
    return write_plotdata(out, records);
}

std::string crc32_hex(const std::string& text) {
    const uLong crc = ::crc32(::crc32(0L, Z_NULL, 0), reinterpret_cast<const Bytef*>(text.data()),
                              static_cast<uInt>(text.size()));
    char buf[16];
    std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc));
    return buf;
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string RunManifest::to_json() const {
    nlohmann::json j;
    j["tool_version"] = tool_version;
    j["master_seed"] = master_seed;
    j["started_utc"] = started_utc;
    j["finished_utc"] = finished_utc;
    j["config"] = config;
    j["record_checksums"] = record_checksums;
    j["omitted_zero_error_points"] = omitted_zero_error_points;
    j["warnings"] = warnings;
    return j.dump(2);
}

}  // namespace ntnwave
