#include "radar/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "radar/error.hpp"
#include "radar/formats.hpp"
#include "text_util.hpp"

namespace radar {

namespace {

// Closed-form simple regression of y on x using centered sums.
CalibrationModel ols(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2) throw Error(ErrorKind::InsufficientData, "need at least 2 pairs, got " + std::to_string(n));
    if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) {
        throw Error(ErrorKind::DegenerateInput, "all predictor values are equal");
    }

    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);

    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }

    CalibrationModel model;
    model.slope = sxy / sxx;
    model.intercept = mean_y - model.slope * mean_x;
    // r is undefined for a constant response; report 0 (no linear association).
    model.r = syy > 0.0 ? std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0) : 0.0;
    return model;
}

ErrorReport error_report(std::span<const EvaluationPair> pairs, Region region) {
    ErrorReport report;
    report.region = region;
    double abs_sum = 0.0;
    double sq_sum = 0.0;
    for (const auto& p : pairs) {
        if (!region.contains(p.L_cm)) continue;
        const double e = p.lambda_cm - p.L_cm;
        abs_sum += std::abs(e);
        sq_sum += e * e;
        ++report.n;
    }
    if (report.n == 0) {
        if (region.kind == Region::Kind::Full) throw Error(ErrorKind::InsufficientData, "no evaluation pairs");
        throw Error(ErrorKind::EmptyRegion, "no pairs with " + region.label());
    }
    report.mae_cm = abs_sum / static_cast<double>(report.n);
    report.mse_cm2 = sq_sum / static_cast<double>(report.n);
    return report;
}

}  // namespace

bool Region::contains(double L_cm) const {
    switch (kind) {
        case Kind::Full: return true;
        case Kind::Below: return L_cm < bound_cm;
        case Kind::Above: return L_cm > bound_cm;
    }
    return false;
}

std::string Region::label() const {
    switch (kind) {
        case Kind::Full: return "full";
        case Kind::Below: return "lt:" + formats::format_double(bound_cm);
        case Kind::Above: return "gt:" + formats::format_double(bound_cm);
    }
    return "full";
}

Region Region::parse(const std::string& text) {
    if (text == "full") return full();
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const auto op = std::string_view(text).substr(0, colon);
        const auto bound = detail::parse_double(std::string_view(text).substr(colon + 1));
        if (bound && std::isfinite(*bound)) {
            if (op == "lt") return below(*bound);
            if (op == "gt") return above(*bound);
        }
    }
    throw Error(ErrorKind::BadConfig, "region must be full, lt:<cm> or gt:<cm>, got \"" + text + "\"");
}

CalibrationModel fit_linear(std::span<const CalibrationPair> pairs) {
    std::vector<double> t;
    std::vector<double> L;
    t.reserve(pairs.size());
    L.reserve(pairs.size());
    for (const auto& p : pairs) {
        t.push_back(p.t_us);
        L.push_back(p.L_cm);
    }
    return ols(t, L);
}

double predict(const CalibrationModel& model, double t_us) { return model.slope * t_us + model.intercept; }

ErrorReport evaluate(std::span<const EvaluationPair> pairs) { return error_report(pairs, Region::full()); }

ErrorReport evaluate_region(std::span<const EvaluationPair> pairs, Region region) {
    return error_report(pairs, region);
}

CalibrationModel fit_correction(std::span<const EvaluationPair> pairs) {
    std::vector<double> lambda;
    std::vector<double> L;
    lambda.reserve(pairs.size());
    L.reserve(pairs.size());
    for (const auto& p : pairs) {
        lambda.push_back(p.lambda_cm);
        L.push_back(p.L_cm);
    }
    return ols(lambda, L);
}

ErrorReport evaluate_corrected(std::span<const EvaluationPair> pairs, const CalibrationModel& model) {
    std::vector<EvaluationPair> corrected(pairs.begin(), pairs.end());
    for (auto& p : corrected) p.lambda_cm = predict(model, p.lambda_cm);
    return evaluate(corrected);
}

}  // namespace radar
