#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "radar/ingest.hpp"

namespace radar {

struct Domain {
    double t_min{0.0};
    double t_max{1.0};

    bool contains(double t) const { return t >= t_min && t <= t_max; }
};

struct FitStats {
    double mae_cm{0.0};
    double mse_cm2{0.0};
};

/// Polynomial in raw time, coefficients ascending in degree.
struct PolyModel {
    std::vector<double> coeffs{0.0};
    Domain domain;
    std::optional<FitStats> fit;  // only set on models produced by fit_poly

    std::size_t degree() const { return coeffs.size() - 1; }
};

struct Evaluation {
    double value{0.0};
    bool extrapolated{false};
};

struct MotionSample {
    double t_s{0.0};
    double x_cm{0.0};
    double v_cm_s{0.0};
    double a_cm_s2{0.0};
    bool extrapolated{false};
};

enum class Sign { Negative, Zero, Positive };

struct SignInterval {
    double t_begin{0.0};
    double t_end{0.0};
    Sign sign{Sign::Zero};
};

struct Extremum {
    double t_s{0.0};
    double v_cm_s{0.0};
};

struct MotionReport {
    std::vector<MotionSample> samples;
    Extremum v_extremum;
    std::vector<double> a_zero_crossings;
    std::vector<double> v_zero_crossings;
    std::vector<SignInterval> a_sign;
};

PolyModel fit_poly(const TimeSeries& series, std::size_t degree, std::optional<Domain> domain = std::nullopt);

PolyModel differentiate(const PolyModel& model);

Evaluation eval_poly(const PolyModel& model, double t);

/// Real roots of the model inside [lo, hi], ascending. Closed form up to degree 2.
std::vector<double> roots_in(std::span<const double> coeffs, double lo, double hi);

/// n uniformly spaced samples over [t_begin, t_end]; points outside the model domain are flagged.
std::vector<MotionSample> sample_motion(const PolyModel& model, double t_begin, double t_end, std::size_t n);

MotionReport motion_report(const PolyModel& model, std::size_t n_samples);

}  // namespace radar
