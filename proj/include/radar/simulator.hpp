#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "radar/calibration.hpp"
#include "radar/ingest.hpp"

namespace radar {

struct PolyProfile {
    std::vector<double> coeffs;  // ascending, cm over seconds
};

struct VelocitySegment {
    double duration_s{0.0};
    double velocity_cm_s{0.0};
};

/// Piecewise constant velocity; position is held after the last segment.
struct SegmentProfile {
    double x0_cm{0.0};
    std::vector<VelocitySegment> segments;
};

using MotionProfile = std::variant<PolyProfile, SegmentProfile>;

double position_at(const MotionProfile& profile, double t_s);

struct NoiseConfig {
    double jitter_sigma_cm{0.0};
    double false_read_prob{0.0};
    double false_read_value_cm{48.02};
    double max_range_cm{107.0};
};

struct SimConfig {
    MotionProfile profile{PolyProfile{{0.0}}};
    CalibrationModel model{kFirmwareModel};
    double period_s{0.015};
    double duration_s{1.0};
    double start_offset_s{0.0};
    NoiseConfig noise;
    std::uint64_t seed{0};

    void validate() const;
};

/// Echo duration that maps to d_cm under the model, rounded to whole µs.
std::uint64_t distance_to_echo(const CalibrationModel& model, double d_cm);

std::vector<RawReading> simulate(const SimConfig& cfg);

std::string emit_log(std::span<const RawReading> readings);

/// mt19937_64 with Box-Muller normals; see README for the exact draw order.
class SimRng {
public:
    explicit SimRng(std::uint64_t seed);

    /// Uniform in [0, 1) from the top 53 bits of one engine output.
    double uniform();
    /// Standard normal from two uniforms; no cached second value.
    double normal();

private:
    std::mt19937_64 engine_;
};

}  // namespace radar
