#include "doctest.h"

#include <cmath>

#include "ntnwave/montecarlo.hpp"
#include "ntnwave/report.hpp"
#include "oracles.hpp"

using namespace ntnwave;

namespace {

SimConfig small_config() {
    SimConfig c;
    c.n = 64;
    c.otfs_k = 8;
    c.otfs_l = 8;
    c.stop = {100, 20};
    c.master_seed = 11;
    return c;
}

}  // namespace

TEST_CASE("snr_to_sigma2") {
    CHECK(snr_to_sigma2(0.0) == 1.0);
    CHECK(snr_to_sigma2(10.0) == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(snr_to_sigma2(20.0) == doctest::Approx(0.01).epsilon(1e-15));
}

TEST_CASE("awgn moments") {
    Rng rng(3);
    const ComplexVector zero = ComplexVector::Zero(1000000);
    CHECK(awgn(zero, 0.0, rng) == zero);
    const ComplexVector w = awgn(zero, 1.0, rng);
    const double n = static_cast<double>(w.size());
    double re2 = 0.0, im2 = 0.0, reim = 0.0;
    for (const auto& v : w) {
        re2 += v.real() * v.real();
        im2 += v.imag() * v.imag();
        reim += v.real() * v.imag();
    }
    CHECK(std::abs((re2 + im2) / n - 1.0) < 0.005);
    CHECK(std::abs(re2 / n - 0.5) < 0.005);
    CHECK(std::abs(reim / std::sqrt(re2 * im2)) < 0.01);
    CHECK_THROWS_AS(awgn(zero, -1.0, rng), ConfigError);
}

TEST_CASE("derive_seed separates its inputs") {
    const auto base = derive_seed(1, 10.0, 0, 1);
    CHECK(base == derive_seed(1, 10.0, 0, 1));
    CHECK(base != derive_seed(2, 10.0, 0, 1));
    CHECK(base != derive_seed(1, 12.0, 0, 1));
    CHECK(base != derive_seed(1, 10.0, 1, 1));
    CHECK(base != derive_seed(1, 10.0, 0, 2));
}

TEST_CASE("run_frame") {
    SimConfig c = small_config();
    const Simulator sim(c);
    const auto a = sim.run_frame(12.0, 5);
    const auto b = sim.run_frame(12.0, 5);
    CHECK(a.bit_errors == b.bit_errors);
    CHECK(a.bits == 64 * 4);
    CHECK(a.bits == run_frame(c, 12.0, 5).bits);
    CHECK(a.bit_errors == run_frame(c, 12.0, 5).bit_errors);

    SUBCASE("noiseless identity link") {
        SimConfig id = small_config();
        id.identity_channel = true;
        for (auto wf : {WaveformKind::Ofdm, WaveformKind::Afdm, WaveformKind::Ocdm, WaveformKind::Otfs}) {
            id.waveform = wf;
            for (auto det : {DetectorKind::Lmmse, DetectorKind::MmseSd}) {
                id.detector = det;
                const Simulator s(id);
                for (std::uint64_t f = 0; f < 3; ++f) CHECK(s.run_frame(120.0, f).bit_errors == 0);
            }
        }
    }

    SUBCASE("AFDM with zero chirps degenerates to OFDM") {
        SimConfig ofdm = small_config();
        ofdm.waveform = WaveformKind::Ofdm;
        SimConfig afdm = ofdm;
        afdm.waveform = WaveformKind::Afdm;
        afdm.c1 = 0.0;
        afdm.c2 = 0.0;
        for (auto det : {DetectorKind::Lmmse, DetectorKind::MmseSd}) {
            ofdm.detector = afdm.detector = det;
            const Simulator so(ofdm), sa(afdm);
            for (std::uint64_t f = 0; f < 8; ++f) CHECK(so.run_frame(8.0, f).bit_errors == sa.run_frame(8.0, f).bit_errors);
        }
    }

    SUBCASE("configuration errors") {
        SimConfig bad = small_config();
        bad.waveform = WaveformKind::Otfs;
        bad.otfs_k = 4;
        CHECK_THROWS_AS(Simulator{bad}, ConfigError);
        bad = small_config();
        bad.rms_ds_s = 1e-3;
        CHECK_THROWS_AS(Simulator{bad}, ConfigError);
        bad = small_config();
        bad.stop.max_frames = 0;
        CHECK_THROWS_AS(Simulator{bad}, ConfigError);
        bad = small_config();
        bad.modulation_order = 32;
        CHECK_THROWS_AS(Simulator{bad}, ConfigError);
    }

    SUBCASE("orthogonality warning") {
        SimConfig w = small_config();
        w.doppler.alpha_max_hz = 40e3;
        w.rms_ds_s = 3e-6;
        CHECK_FALSE(Simulator(w).warnings().empty());
        CHECK(Simulator(small_config()).warnings().empty());
    }
}

TEST_CASE("run_sweep") {
    SimConfig c = small_config();
    CHECK(run_sweep(c).empty());

    c.snr_db = {-5.0};
    c.stop = {100, 1000};
    const auto quick = run_sweep(c, 1);
    REQUIRE(quick.size() == 1);
    CHECK(quick[0].frames <= 3);
    CHECK(quick[0].bit_errors >= 100);

    c.snr_db = {0.0, 6.0, 12.0};
    c.stop = {200, 12};
    const auto one = run_sweep(c, 1);
    const auto two = run_sweep(c, 2);
    const auto three = run_sweep(c, 3);
    std::ostringstream a, b, d;
    write_csv(a, one);
    write_csv(b, two);
    write_csv(d, three);
    CHECK(a.str() == b.str());
    CHECK(a.str() == d.str());

    for (const auto& r : one) {
        CHECK(r.bit_errors <= r.bits);
        CHECK(r.bits == r.frames * 64 * 4);
        CHECK(r.ber == static_cast<double>(r.bit_errors) / static_cast<double>(r.bits));
        CHECK(r.seed == 11);
        CHECK(r.waveform == "AFDM");
        CHECK(r.channel == "TDL_C");
        CHECK(r.detector == "MMSE_SD");
    }

    std::vector<std::size_t> seen;
    Simulator(c).run_sweep(1, [&](std::size_t i, std::size_t total, const BerRecord&) {
        CHECK(total == 3);
        seen.push_back(i);
    });
    CHECK(seen == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("AWGN link BER is monotone and matches the closed form") {
    SimConfig c;
    c.identity_channel = true;
    c.waveform = WaveformKind::Ofdm;
    c.detector = DetectorKind::Lmmse;
    c.n = 256;
    c.snr_db = {0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
    c.stop = {1000000, 1000};  // 1e6 bits per point
    c.master_seed = 5;
    const auto recs = run_sweep(c);
    REQUIRE(recs.size() == c.snr_db.size());
    for (std::size_t i = 1; i < recs.size(); ++i) CHECK(recs[i].ber <= recs[i - 1].ber);
    for (const auto& r : recs) {
        CHECK(r.bits >= 1000000);
        CHECK(r.ber <= 0.5);
        const double expect = oracle::ber_16qam_awgn(r.snr_db);
        if (expect * static_cast<double>(r.bits) >= 500.0) {
            CHECK(std::abs(r.ber / expect - 1.0) <= 0.10);
        }
    }
}
