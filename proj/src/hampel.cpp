#include "radar/hampel.hpp"

#include <algorithm>
#include <cmath>

#include "radar/error.hpp"

namespace radar {

namespace {

// Middle order statistic of an odd-length buffer; reorders the buffer.
double odd_median(std::vector<double>& buf) {
    const auto mid = buf.begin() + static_cast<std::ptrdiff_t>(buf.size() / 2);
    std::nth_element(buf.begin(), mid, buf.end());
    return *mid;
}

}  // namespace

void HampelConfig::validate() const {
    if (window_size < 3 || window_size % 2 == 0) {
        throw Error(ErrorKind::BadConfig, "window must be odd and >= 3, got " + std::to_string(window_size));
    }
    if (!(threshold >= 0.0) || !std::isfinite(threshold)) throw Error(ErrorKind::BadConfig, "threshold must be >= 0");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw Error(ErrorKind::BadConfig, "scale must be > 0");
}

HampelResult hampel_filter(const TimeSeries& series, const HampelConfig& cfg) {
    cfg.validate();
    if (series.empty()) throw Error(ErrorKind::EmptySeries, "cannot filter an empty series");

    const auto& in = series.samples();
    const std::size_t n = in.size();
    const std::size_t half = cfg.window_size / 2;

    HampelResult result;
    std::vector<Sample> out(in);
    std::vector<double> window(cfg.window_size);

    for (std::size_t i = half; i + half < n; ++i) {
        for (std::size_t k = 0; k < cfg.window_size; ++k) window[k] = in[i - half + k].x_cm;
        const double median = odd_median(window);

        for (std::size_t k = 0; k < cfg.window_size; ++k) window[k] = std::abs(in[i - half + k].x_cm - median);
        const double spread = cfg.scale * odd_median(window);

        if (std::abs(in[i].x_cm - median) > cfg.threshold * spread) {
            out[i].x_cm = median;
            result.replaced_indices.push_back(i);
        }
    }
    result.series = TimeSeries(std::move(out));
    return result;
}

}  // namespace radar
