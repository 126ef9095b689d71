#include <gtest/gtest.h>

#include <cmath>

#include "radar/error.hpp"
#include "radar/hampel.hpp"
#include "radar/kinematics.hpp"
#include "radar/simulator.hpp"

namespace radar {
namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected radar::Error";
    return ErrorKind::Io;
}

SimConfig poly_config(std::vector<double> coeffs, double duration) {
    SimConfig cfg;
    cfg.profile = PolyProfile{std::move(coeffs)};
    cfg.duration_s = duration;
    return cfg;
}

TEST(DistanceToEcho, Examples) {
    EXPECT_EQ(distance_to_echo(kFirmwareModel, 1.4112), 97u);
    EXPECT_EQ(distance_to_echo({1.0, 0.0, 1.0}, 5.0), 5u);
    EXPECT_EQ(distance_to_echo(kFirmwareModel, kFirmwareModel.intercept), 0u);
    EXPECT_EQ(kind_of([] { distance_to_echo(kFirmwareModel, -1.0); }), ErrorKind::NegativeTime);
    EXPECT_EQ(kind_of([] { distance_to_echo({0.0, 0.0, 1.0}, 1.0); }), ErrorKind::BadConfig);
}

TEST(DistanceToEcho, InvertsPredictOnWholeMicroseconds) {
    for (std::uint64_t t = 0; t < 20000; t += 7) {
        const auto back = distance_to_echo(kFirmwareModel, predict(kFirmwareModel, static_cast<double>(t)));
        EXPECT_LE(back > t ? back - t : t - back, 1u);
    }
}

TEST(Simulate, NoiselessConstantProfile) {
    auto cfg = poly_config({10.0}, 4 * 0.015);
    const auto r = simulate(cfg);
    ASSERT_EQ(r.size(), 5u);
    const double expected = predict(kFirmwareModel, static_cast<double>(distance_to_echo(kFirmwareModel, 10.0)));
    for (std::size_t k = 0; k < r.size(); ++k) {
        EXPECT_EQ(r[k].lambda_cm, expected);
        EXPECT_EQ(r[k].t_device_us, 15000u * k);
    }
    EXPECT_NEAR(expected, 10.0, kFirmwareModel.slope / 2);
}

TEST(Simulate, AllFalseReads) {
    auto cfg = poly_config({20.0, 30.0}, 2.0);
    cfg.noise.false_read_prob = 1.0;
    cfg.noise.jitter_sigma_cm = 1.0;
    for (const auto& r : simulate(cfg)) EXPECT_EQ(format_line(r).substr(0, 5), "48.02");
}

TEST(Simulate, SaturatesAtRangeCeiling) {
    auto cfg = poly_config({3.85, 100.0}, 1.5);  // reaches 153.85 cm
    const auto r = simulate(cfg);
    double top = 0.0;
    std::size_t saturated = 0;
    for (const auto& x : r) {
        top = std::max(top, x.lambda_cm);
        if (std::abs(x.lambda_cm - 107.0) <= kFirmwareModel.slope / 2) ++saturated;
    }
    EXPECT_LE(top, 107.0 + kFirmwareModel.slope / 2);
    EXPECT_GT(saturated, 30u);
}

TEST(Simulate, JitterRespectsCeilingBound) {
    auto cfg = poly_config({3.85, 100.0}, 3.0);
    cfg.noise.jitter_sigma_cm = 0.2;
    cfg.seed = 99;
    for (const auto& x : simulate(cfg)) EXPECT_LE(x.lambda_cm, 107.0 + 6 * 0.2 + kFirmwareModel.slope);
}

TEST(Simulate, Deterministic) {
    auto cfg = poly_config({5.0, 20.0, 3.0}, 3.0);
    cfg.noise.jitter_sigma_cm = 0.3;
    cfg.noise.false_read_prob = 0.1;
    cfg.seed = 1234;
    EXPECT_EQ(emit_log(simulate(cfg)), emit_log(simulate(cfg)));
    auto other = cfg;
    other.seed = 1235;
    EXPECT_NE(emit_log(simulate(cfg)), emit_log(simulate(other)));
}

TEST(Simulate, StartOffsetShiftsDeviceClock) {
    auto cfg = poly_config({3.85}, 0.03);
    cfg.start_offset_s = 610.0;
    const auto r = simulate(cfg);
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(r[0].t_device_us, 610000000u);
    EXPECT_EQ(r[2].t_device_us, 610030000u);
}

TEST(Simulate, BelowMinimumRangeClampsToZeroEcho) {
    auto cfg = poly_config({-5.0}, 0.03);
    for (const auto& r : simulate(cfg)) EXPECT_DOUBLE_EQ(r.lambda_cm, kFirmwareModel.intercept);
}

TEST(Simulate, SegmentProfile) {
    const SegmentProfile p{10.0, {{1.0, 5.0}, {2.0, -1.0}}};
    EXPECT_DOUBLE_EQ(position_at(p, 0.0), 10.0);
    EXPECT_DOUBLE_EQ(position_at(p, 0.5), 12.5);
    EXPECT_DOUBLE_EQ(position_at(p, 2.0), 14.0);
    EXPECT_DOUBLE_EQ(position_at(p, 10.0), 13.0);
}

TEST(Simulate, BadConfig) {
    const auto bad = [](auto mutate) {
        auto cfg = poly_config({1.0}, 1.0);
        mutate(cfg);
        return kind_of([&] { simulate(cfg); });
    };
    EXPECT_EQ(bad([](SimConfig& c) { c.period_s = 0.0; }), ErrorKind::BadConfig);
    EXPECT_EQ(bad([](SimConfig& c) { c.duration_s = -1.0; }), ErrorKind::BadConfig);
    EXPECT_EQ(bad([](SimConfig& c) { c.noise.false_read_prob = 1.5; }), ErrorKind::BadConfig);
    EXPECT_EQ(bad([](SimConfig& c) { c.noise.max_range_cm = 0.0; }), ErrorKind::BadConfig);
    EXPECT_EQ(bad([](SimConfig& c) { c.noise.jitter_sigma_cm = -0.1; }), ErrorKind::BadConfig);
    EXPECT_EQ(bad([](SimConfig& c) { c.profile = PolyProfile{}; }), ErrorKind::BadConfig);
    EXPECT_EQ(bad([](SimConfig& c) { c.profile = SegmentProfile{0.0, {{0.0, 1.0}}}; }), ErrorKind::BadConfig);
}

TEST(SimRng, NormalMoments) {
    SimRng rng(17);
    constexpr int n = 200000;
    double sum = 0.0;
    double sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sq += z * z;
    }
    const double mean = sum / n;
    EXPECT_NEAR(mean, 0.0, 0.01);
    EXPECT_NEAR(sq / n - mean * mean, 1.0, 0.01);
}

TEST(SimRng, UniformRange) {
    SimRng rng(0);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}

TEST(EmitLog, Format) {
    const std::vector<RawReading> one{{1.41, 97u, {}}};
    EXPECT_EQ(emit_log(one), "1.41 cm - 97 \xC2\xB5s\n");
    EXPECT_EQ(emit_log({}), "");
}

TEST(EmitLog, RoundTripThroughParser) {
    auto cfg = poly_config({3.85, 10.0, 40.0, -10.0}, 2.0);
    cfg.noise.jitter_sigma_cm = 0.5;
    cfg.noise.false_read_prob = 0.05;
    cfg.seed = 3;
    const auto readings = simulate(cfg);
    const auto parsed = parse_log_text(emit_log(readings), ParsePolicy::Strict);
    ASSERT_EQ(parsed.readings.size(), readings.size());
    for (std::size_t i = 0; i < readings.size(); ++i) {
        EXPECT_LE(std::abs(parsed.readings[i].lambda_cm - readings[i].lambda_cm), 0.005 + 1e-12);
        EXPECT_EQ(parsed.readings[i].t_device_us, readings[i].t_device_us);
    }
}

TEST(Simulate, NoiselessCubicRoundTrip) {
    const std::vector<double> c{3.85, 10.0, 40.0, -10.0};
    const auto readings = simulate(poly_config(c, 2.0));
    const auto parsed = parse_log_text(emit_log(readings), ParsePolicy::Strict);
    const auto filtered = hampel_filter(rebase(to_series(parsed.readings)), {13, 0.0, 1.4826});
    const auto m = fit_poly(filtered.series, 3, Domain{0.2, 1.8});
    for (std::size_t j = 0; j < c.size(); ++j) EXPECT_LE(std::abs(m.coeffs[j] - c[j]), 0.005 * std::abs(c[j]));
}

}  // namespace
}  // namespace radar
