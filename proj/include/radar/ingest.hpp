#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace radar {

/// One line of the firmware's serial output: "<lambda> cm - <micros> µs".
struct RawReading {
    double lambda_cm{0.0};
    std::uint64_t t_device_us{0};
    std::optional<std::string> wall_time;

    bool operator==(const RawReading&) const = default;
};

struct Sample {
    double t_s{0.0};
    double x_cm{0.0};

    bool operator==(const Sample&) const = default;
};

/// Position series with strictly increasing, finite timestamps.
class TimeSeries {
public:
    TimeSeries() = default;

    /// Throws Error(NonMonotonic) or Error(BadConfig) when the invariants do not hold.
    explicit TimeSeries(std::vector<Sample> samples);

    static TimeSeries from_columns(std::span<const double> t_s, std::span<const double> x_cm);

    const std::vector<Sample>& samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }
    bool empty() const noexcept { return samples_.empty(); }
    const Sample& operator[](std::size_t i) const { return samples_[i]; }

    std::vector<double> times() const;
    std::vector<double> values() const;

    bool operator==(const TimeSeries&) const = default;

private:
    std::vector<Sample> samples_;
};

enum class ParsePolicy { Strict, Skip };

struct ParsedLog {
    std::vector<RawReading> readings;
    std::size_t skipped{0};
};

// "\xC2\xB5" is U+00B5 MICRO SIGN, as emitted by the firmware source file.
inline constexpr std::string_view kMicroSign = "\xC2\xB5";

RawReading parse_line(std::string_view line);

/// Formats a reading exactly as the firmware prints it (2 decimals, no newline).
std::string format_line(const RawReading& reading);

ParsedLog parse_log(std::istream& stream, ParsePolicy policy);
ParsedLog parse_log_text(std::string_view text, ParsePolicy policy);

/// Converts device readings to a position series (µs -> s); rejects counter wraparound.
TimeSeries to_series(std::span<const RawReading> readings);

TimeSeries rebase(const TimeSeries& series);

std::string to_csv(std::span<const RawReading> readings);
std::vector<RawReading> readings_from_csv(std::string_view text);

std::string series_to_csv(const TimeSeries& series);
TimeSeries series_from_csv(std::string_view text);

}  // namespace radar
