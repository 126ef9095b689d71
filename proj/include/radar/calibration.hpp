#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace radar {

struct CalibrationPair {
    double L_cm{0.0};
    double t_us{0.0};
};

struct EvaluationPair {
    double L_cm{0.0};
    double lambda_cm{0.0};
};

/// Affine map distance = slope * x + intercept, plus the Pearson r of the data it was fitted on.
/// For the echo calibration x is in µs; for the correction fit x is a sensor reading in cm.
struct CalibrationModel {
    double slope{1.0};
    double intercept{0.0};
    double r{1.0};
};

/// Coefficients hard-coded in the firmware's loop().
inline constexpr CalibrationModel kFirmwareModel{0.0183, -0.3639, 0.9985};

struct Region {
    enum class Kind { Full, Below, Above };
    Kind kind{Kind::Full};
    double bound_cm{0.0};

    static Region full() { return {}; }
    static Region below(double bound) { return {Kind::Below, bound}; }
    static Region above(double bound) { return {Kind::Above, bound}; }

    bool contains(double L_cm) const;
    /// "full", "lt:<bound>" or "gt:<bound>".
    std::string label() const;
    static Region parse(const std::string& text);
};

struct ErrorReport {
    double mae_cm{0.0};
    double mse_cm2{0.0};
    std::size_t n{0};
    Region region;
};

CalibrationModel fit_linear(std::span<const CalibrationPair> pairs);

double predict(const CalibrationModel& model, double t_us);

ErrorReport evaluate(std::span<const EvaluationPair> pairs);

/// Strict inequalities: Below keeps L < bound, Above keeps L > bound.
ErrorReport evaluate_region(std::span<const EvaluationPair> pairs, Region region);

/// Least squares of true distance on sensor reading (L on lambda).
CalibrationModel fit_correction(std::span<const EvaluationPair> pairs);

/// Error report of lambda' = model(lambda) against L.
ErrorReport evaluate_corrected(std::span<const EvaluationPair> pairs, const CalibrationModel& model);

}  // namespace radar
