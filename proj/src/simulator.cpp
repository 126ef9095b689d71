#include "radar/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "radar/error.hpp"

namespace radar {

namespace {

struct PositionVisitor {
    double t;

    double operator()(const PolyProfile& p) const {
        double acc = 0.0;
        for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) acc = acc * t + *it;
        return acc;
    }

    double operator()(const SegmentProfile& p) const {
        double x = p.x0_cm;
        double remaining = t;
        for (const auto& seg : p.segments) {
            if (remaining <= 0.0) break;
            const double dt = std::min(remaining, seg.duration_s);
            x += seg.velocity_cm_s * dt;
            remaining -= dt;
        }
        return x;
    }
};

void require(bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::BadConfig, what);
}

}  // namespace

double position_at(const MotionProfile& profile, double t_s) { return std::visit(PositionVisitor{t_s}, profile); }

void SimConfig::validate() const {
    require(std::isfinite(period_s) && period_s > 0.0, "period_s must be > 0");
    require(std::isfinite(duration_s) && duration_s > 0.0, "duration_s must be > 0");
    require(std::isfinite(start_offset_s) && start_offset_s >= 0.0, "start_offset_s must be >= 0");
    require(std::isfinite(noise.jitter_sigma_cm) && noise.jitter_sigma_cm >= 0.0, "jitter_sigma_cm must be >= 0");
    require(noise.false_read_prob >= 0.0 && noise.false_read_prob <= 1.0, "false_read_prob must be in [0, 1]");
    require(std::isfinite(noise.false_read_value_cm), "false_read_value_cm must be finite");
    require(std::isfinite(noise.max_range_cm) && noise.max_range_cm > 0.0, "max_range_cm must be > 0");
    require(std::isfinite(model.slope) && model.slope > 0.0, "model slope must be > 0");
    require(std::isfinite(model.intercept), "model intercept must be finite");
    if (const auto* poly = std::get_if<PolyProfile>(&profile)) {
        require(!poly->coeffs.empty(), "polynomial profile needs at least one coefficient");
        for (double c : poly->coeffs) require(std::isfinite(c), "profile coefficients must be finite");
    } else {
        const auto& seg = std::get<SegmentProfile>(profile);
        require(std::isfinite(seg.x0_cm), "segment profile x0 must be finite");
        for (const auto& s : seg.segments) {
            require(std::isfinite(s.duration_s) && s.duration_s > 0.0, "segment durations must be > 0");
            require(std::isfinite(s.velocity_cm_s), "segment velocities must be finite");
        }
    }
}

SimRng::SimRng(std::uint64_t seed) : engine_(seed) {}

double SimRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double SimRng::normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t distance_to_echo(const CalibrationModel& model, double d_cm) {
    if (!(model.slope > 0.0)) throw Error(ErrorKind::BadConfig, "calibration slope must be > 0");
    const double t = (d_cm - model.intercept) / model.slope;
    if (!(t >= 0.0)) {
        throw Error(ErrorKind::NegativeTime, "distance below the model minimum of " + std::to_string(model.intercept));
    }
    return static_cast<std::uint64_t>(std::llround(t));
}

std::vector<RawReading> simulate(const SimConfig& cfg) {
    cfg.validate();
    SimRng rng(cfg.seed);
    const auto n = static_cast<std::size_t>(std::floor(cfg.duration_s / cfg.period_s + 1e-9)) + 1;

    std::vector<RawReading> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * cfg.period_s;
        double d = std::min(position_at(cfg.profile, t), cfg.noise.max_range_cm);

        // One uniform per sample decides the false read; jitter draws two more.
        if (rng.uniform() < cfg.noise.false_read_prob) {
            d = cfg.noise.false_read_value_cm;
        } else if (cfg.noise.jitter_sigma_cm > 0.0) {
            d += cfg.noise.jitter_sigma_cm * rng.normal();
        }

        // The device cannot time a negative echo; the shortest report is the intercept.
        const auto echo = distance_to_echo(cfg.model, std::max(d, cfg.model.intercept));
        RawReading reading;
        reading.lambda_cm = predict(cfg.model, static_cast<double>(echo));
        reading.t_device_us = static_cast<std::uint64_t>(std::llround((cfg.start_offset_s + t) * 1e6));
        out.push_back(std::move(reading));
    }
    return out;
}

std::string emit_log(std::span<const RawReading> readings) {
    std::string out;
    for (const auto& r : readings) {
        out += format_line(r);
        out += '\n';
    }
    return out;
}

}  // namespace radar
