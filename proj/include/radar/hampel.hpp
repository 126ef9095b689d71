#pragma once

#include <cstddef>
#include <vector>

#include "radar/ingest.hpp"

namespace radar {

struct HampelConfig {
    std::size_t window_size{13};
    double threshold{0.0};
    double scale{1.4826};

    void validate() const;
};

struct HampelResult {
    TimeSeries series;
    std::vector<std::size_t> replaced_indices;
};

/// Single non-recursive pass over the original values. Points within
/// window_size / 2 of either end are passed through unchanged.
HampelResult hampel_filter(const TimeSeries& series, const HampelConfig& cfg);

}  // namespace radar
