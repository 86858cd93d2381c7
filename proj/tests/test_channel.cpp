#include "doctest.h"

#include <cmath>
#include <set>
#include <sstream>

#include "ntnwave/channel.hpp"
#include "ntnwave/transforms.hpp"
#include "oracles.hpp"

using namespace ntnwave;

TEST_CASE("builtin profiles hold the table rows") {
    const auto& a = builtin_profile(TdlModel::TdlA);
    REQUIRE(a.taps.size() == 3);
    CHECK(a.taps[1].normalized_delay == 1.0811);
    CHECK(a.taps[2].normalized_delay == 2.8416);
    CHECK(a.taps[1].power_db == -4.675);
    CHECK(a.taps[2].power_db == -6.482);
    for (const auto& t : a.taps) CHECK(t.fading == Fading::Rayleigh);

    const auto& c = builtin_profile(TdlModel::TdlC);
    REQUIRE(c.taps.size() == 3);
    CHECK(c.taps[0].fading == Fading::Los);
    CHECK(c.taps[0].power_db == -0.394);
    CHECK(*c.taps[0].k_factor_db == 10.224);
    CHECK(c.taps[1].power_db == -10.618);
    CHECK(c.taps[2].normalized_delay == 14.8124);
    CHECK(c.taps[2].power_db == -23.373);

    CHECK(builtin_profile(TdlModel::TdlB).taps.size() == 4);
    CHECK(builtin_profile(TdlModel::TdlD).taps.size() == 4);
}

TEST_CASE("profile invariants") {
    for (auto model : {TdlModel::TdlA, TdlModel::TdlB, TdlModel::TdlC, TdlModel::TdlD}) {
        const auto& p = builtin_profile(model);
        CHECK(p.taps.front().normalized_delay == 0.0);
        int los = 0;
        for (std::size_t i = 0; i < p.taps.size(); ++i) {
            if (p.taps[i].fading != Fading::Los) continue;
            ++los;
            // K-factor equals LOS power minus the co-located Rayleigh power
            const auto& ray = p.taps[i + 1];
            CHECK(ray.normalized_delay == p.taps[i].normalized_delay);
            CHECK(std::abs(*p.taps[i].k_factor_db - (p.taps[i].power_db - ray.power_db)) < 1e-3);
        }
        const bool has_los = model == TdlModel::TdlC || model == TdlModel::TdlD;
        CHECK(los == (has_los ? 1 : 0));
    }
    // TDL-D: K-factor in linear terms
    const auto& d = builtin_profile(TdlModel::TdlD);
    CHECK(std::pow(10.0, (d.taps[0].power_db - d.taps[1].power_db) / 10.0) ==
          doctest::Approx(std::pow(10.0, 1.1707)).epsilon(1e-9));
}

TEST_CASE("scale_delays") {
    const double ts = 1.0 / (256.0 * 15e3);  // 260.417 ns
    const auto a = scale_delays(builtin_profile(TdlModel::TdlA), 100e-9, ts);
    CHECK(a[0] == 0);
    CHECK(a[1] == 0);  // 108.11 ns
    CHECK(a[2] == 1);  // 284.16 ns
    const auto c = scale_delays(builtin_profile(TdlModel::TdlC), 100e-9, ts);
    CHECK(c[2] == 6);  // 1481.24 ns
    for (auto model : {TdlModel::TdlA, TdlModel::TdlB, TdlModel::TdlC, TdlModel::TdlD}) {
        const auto taps = scale_delays(builtin_profile(model), 3e-6, ts);
        CHECK(std::is_sorted(taps.begin(), taps.end()));
        CHECK(taps[0] == 0);
    }
    CHECK_THROWS_AS(scale_delays(builtin_profile(TdlModel::TdlC), 10e-6, ts, 256), ConfigError);
    CHECK_THROWS_AS(scale_delays(builtin_profile(TdlModel::TdlC), 0.0, ts), ConfigError);
}

TEST_CASE("satellite_doppler") {
    SatelliteGeometry g;  // 7.5 km/s, 600 km, 50°, 2.55 GHz
    const double expect = (7500.0 / 299792458.0) * (6371e3 / 6971e3) * std::cos(50.0 * kPi / 180.0) * 2.55e9;
    CHECK(satellite_doppler(g) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(satellite_doppler(g) == doctest::Approx(3.748e4).epsilon(1e-3));
    g.elevation_deg = 90.0;
    CHECK(std::abs(satellite_doppler(g)) < 1e-9);
    g.elevation_deg = 50.0;
    g.v_sat = 0.0;
    CHECK(satellite_doppler(g) == 0.0);
}

TEST_CASE("jakes_doppler") {
    CHECK(jakes_doppler(491.0, 0.0) == 491.0);
    CHECK(std::abs(jakes_doppler(491.0, kPi / 2.0)) < 1e-12);

    Rng rng(41);
    std::uniform_real_distribution<double> theta(-kPi, kPi);
    const int draws = 100000;
    double sum = 0.0;
    for (int i = 0; i < draws; ++i) sum += jakes_doppler(491.0, theta(rng));
    const double sigma = 491.0 / std::sqrt(2.0);
    CHECK(std::abs(sum / draws) < 3.0 * sigma / std::sqrt(static_cast<double>(draws)));
}

TEST_CASE("sample_realization statistics") {
    const double ts = 1.0 / (256.0 * 15e3);
    const int draws = 100000;

    SUBCASE("uniform inverse-path gains") {
        const auto& p = builtin_profile(TdlModel::TdlA);
        const auto taps = scale_delays(p, 100e-9, ts, 256);
        Rng rng(43);
        std::vector<double> power(3, 0.0);
        for (int i = 0; i < draws; ++i) {
            const auto r = sample_realization(p, taps, {}, GainMode::UniformInversePaths, 256, ts, rng);
            for (std::size_t m = 0; m < 3; ++m) power[m] += std::norm(r.paths[m].gain);
        }
        for (double pw : power) CHECK(std::abs(pw / draws - 1.0 / 3.0) < 0.02 / 3.0);
    }

    SUBCASE("LOS to Rayleigh ratio follows the K-factor") {
        const auto& p = builtin_profile(TdlModel::TdlC);
        const auto taps = scale_delays(p, 100e-9, ts, 256);
        Rng rng(47);
        double los = 0.0, ray = 0.0;
        for (int i = 0; i < draws; ++i) {
            const auto r = sample_realization(p, taps, {}, GainMode::PdpNormalized, 256, ts, rng);
            los += std::norm(r.paths[0].gain);
            ray += std::norm(r.paths[1].gain);
        }
        const double ratio = los / ray;
        const double k = std::pow(10.0, 10.224 / 10.0);
        CHECK(std::abs(ratio / k - 1.0) < 0.03);
    }
}

TEST_CASE("sample_realization Doppler support") {
    const double ts = 1.0 / (256.0 * 15e3);
    const auto& p = builtin_profile(TdlModel::TdlD);
    const auto taps = scale_delays(p, 100e-9, ts, 256);
    Rng rng(53);
    DopplerConfig dop{491.0, 1200.0};
    for (int i = 0; i < 2000; ++i) {
        const auto r = sample_realization(p, taps, dop, GainMode::PdpNormalized, 256, ts, rng);
        for (std::size_t m = 0; m < r.paths.size(); ++m) {
            CHECK(std::abs(r.paths[m].doppler_hz - dop.bulk_doppler_hz) <= dop.alpha_max_hz);
            CHECK(r.paths[m].delay_tap < 256);
        }
        CHECK(r.paths[0].doppler_hz == dop.bulk_doppler_hz);  // LOS: no Jakes spread
    }

    Rng rng2(59);
    const auto still = sample_realization(p, taps, {0.0, 0.0}, GainMode::PdpNormalized, 256, ts, rng2);
    for (const auto& path : still.paths) CHECK(path.doppler_hz == 0.0);

    TdlProfile empty;
    CHECK_THROWS_AS(sample_realization(empty, {}, {}, GainMode::PdpNormalized, 256, ts, rng2), ConfigError);
}

TEST_CASE("channel_matrix") {
    ChannelRealization r;
    r.n = 4;
    r.sample_period_s = 1.0 / (4.0 * 15e3);

    r.paths = {{Complex(1.0), 0, 0.0}};
    CHECK((channel_matrix(r) - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

    r.paths = {{Complex(1.0), 1, 0.0}};
    CHECK((channel_matrix(r) - circular_shift_matrix(1, 4)).cwiseAbs().maxCoeff() == 0.0);

    r.paths = {{Complex(1.0), 0, 15e3}};  // one subcarrier of Doppler: ν T_s = 1/4
    const ComplexMatrix h = channel_matrix(r);
    for (Eigen::Index i = 0; i < 4; ++i) {
        CHECK(std::abs(h(i, i) - std::polar(1.0, -kPi / 2.0 * static_cast<double>(i))) < 1e-12);
    }

    r.paths = {{Complex(1.0), 4, 0.0}};
    CHECK_THROWS_AS(channel_matrix(r), ConfigError);
}

TEST_CASE("channel_matrix sparsity and sparse form") {
    const double ts = 1.0 / (256.0 * 15e3);
    const auto& p = builtin_profile(TdlModel::TdlB);
    const auto taps = scale_delays(p, 300e-9, ts, 256);
    Rng rng(61);
    const auto real = sample_realization(p, taps, {}, GainMode::PdpNormalized, 256, ts, rng);
    const ComplexMatrix h = channel_matrix(real);
    const std::set<std::size_t> distinct(taps.begin(), taps.end());
    std::size_t nonzero_diagonals = 0;
    for (std::size_t d = 0; d < 256; ++d) {
        bool any = false;
        for (std::size_t i = 0; i < 256; ++i)
            any = any || std::abs(h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>((i + 256 - d) % 256))) > 0.0;
        nonzero_diagonals += any;
    }
    CHECK(nonzero_diagonals == distinct.size());
    CHECK((ComplexMatrix(channel_matrix_sparse(real)) - h).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("statistical energy conservation") {
    const double ts = 1.0 / (64.0 * 15e3);
    Rng data_rng(67);
    const ComplexVector x = oracle::random_vector(64, data_rng);
    for (auto model : {TdlModel::TdlA, TdlModel::TdlB, TdlModel::TdlC, TdlModel::TdlD}) {
        const auto& p = builtin_profile(model);
        const auto taps = scale_delays(p, 300e-9, ts, 64);
        Rng rng(71);
        double acc = 0.0;
        const int draws = 10000;
        for (int i = 0; i < draws; ++i) {
            const auto real = sample_realization(p, taps, {491.0, 0.0}, GainMode::PdpNormalized, 64, ts, rng);
            acc += (channel_matrix_sparse(real) * x).squaredNorm() / x.squaredNorm();
        }
        CHECK(std::abs(acc / draws - 1.0) < 0.03);
    }
}

TEST_CASE("profile export and name parsing") {
    std::ostringstream os;
    write_profile_table(os);
    const std::string text = os.str();
    CHECK(text.rfind("model,tap,delay,power_db,fading,k_factor_db\n", 0) == 0);
    CHECK(text.find("TDL_C,0,0,-0.394,LOS,10.224\n") != std::string::npos);
    CHECK(text.find("TDL_B,3,5.7392,-11.914,Rayleigh,\n") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 3 + 4 + 3 + 4);

    CHECK(parse_tdl_model("TDL-C") == TdlModel::TdlC);
    CHECK(parse_tdl_model("tdl_a") == TdlModel::TdlA);
    CHECK_THROWS_AS(parse_tdl_model("TDL-E"), ConfigError);
    CHECK(parse_gain_mode("uniform") == GainMode::UniformInversePaths);
}
