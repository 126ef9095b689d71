#include "radar/ingest.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "radar/error.hpp"
#include "radar/formats.hpp"
#include "text_util.hpp"

namespace radar {

namespace {

constexpr std::string_view kSeparator = " cm - ";

[[noreturn]] void malformed(std::string_view line, std::string_view why) {
    throw Error(ErrorKind::MalformedLine, std::string(why) + " in \"" + std::string(line) + "\"");
}

bool is_timestamp_char(char c) {
    return (c >= '0' && c <= '9') || c == '-' || c == ':' || c == '.' || c == ',' || c == 'T' || c == 'Z' ||
           c == '+' || c == '_';
}

// Accepts "[anything]", "<iso-token>", "<iso-token> >" (PlatformIO's time filter).
std::optional<std::string> parse_prefix(std::string_view prefix, std::string_view line) {
    prefix = detail::trim(prefix);
    if (prefix.empty()) return std::nullopt;
    if (prefix.front() == '[') {
        if (prefix.back() != ']' || prefix.size() < 3) malformed(line, "unterminated timestamp bracket");
        return std::string(detail::trim(prefix.substr(1, prefix.size() - 2)));
    }
    if (prefix.back() == '>') {
        prefix.remove_suffix(1);
        prefix = detail::trim(prefix);
    }
    if (prefix.empty() || prefix.front() < '0' || prefix.front() > '9') malformed(line, "unrecognised prefix");
    for (char c : prefix) {
        if (!is_timestamp_char(c)) malformed(line, "unrecognised prefix");
    }
    return std::string(prefix);
}

}  // namespace

TimeSeries::TimeSeries(std::vector<Sample> samples) : samples_(std::move(samples)) {
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const auto& s = samples_[i];
        if (!std::isfinite(s.t_s) || !std::isfinite(s.x_cm)) {
            throw Error(ErrorKind::BadConfig, "non-finite sample at index " + std::to_string(i));
        }
        if (i > 0 && !(s.t_s > samples_[i - 1].t_s)) {
            throw Error(ErrorKind::NonMonotonic, "time not strictly increasing at index " + std::to_string(i));
        }
    }
}

TimeSeries TimeSeries::from_columns(std::span<const double> t_s, std::span<const double> x_cm) {
    if (t_s.size() != x_cm.size()) throw Error(ErrorKind::BadConfig, "column length mismatch");
    std::vector<Sample> samples(t_s.size());
    for (std::size_t i = 0; i < t_s.size(); ++i) samples[i] = {t_s[i], x_cm[i]};
    return TimeSeries(std::move(samples));
}

std::vector<double> TimeSeries::times() const {
    std::vector<double> out;
    out.reserve(samples_.size());
    for (const auto& s : samples_) out.push_back(s.t_s);
    return out;
}

std::vector<double> TimeSeries::values() const {
    std::vector<double> out;
    out.reserve(samples_.size());
    for (const auto& s : samples_) out.push_back(s.x_cm);
    return out;
}

RawReading parse_line(std::string_view raw) {
    const std::string_view line = detail::trim(raw);

    const auto sep = line.find(kSeparator);
    if (sep == std::string_view::npos) malformed(line, "missing \"cm -\" separator");

    const std::string_view head = line.substr(0, sep);
    const auto last_space = head.find_last_of(" \t");
    const std::string_view lambda_text = last_space == std::string_view::npos ? head : head.substr(last_space + 1);
    const std::string_view prefix = last_space == std::string_view::npos ? std::string_view{} : head.substr(0, last_space);

    RawReading reading;
    const auto lambda = detail::parse_double(lambda_text);
    if (!lambda || !std::isfinite(*lambda)) malformed(line, "non-numeric distance");
    reading.lambda_cm = *lambda;
    reading.wall_time = parse_prefix(prefix, line);

    std::string_view tail = line.substr(sep + kSeparator.size());
    const auto space = tail.find(' ');
    if (space == std::string_view::npos) malformed(line, "missing time unit");
    const auto t_us = detail::parse_uint(tail.substr(0, space));
    if (!t_us) malformed(line, "non-numeric device time");
    reading.t_device_us = *t_us;

    tail.remove_prefix(space + 1);
    if (tail.size() != kMicroSign.size() + 1 || !tail.starts_with(kMicroSign) || tail.back() != 's') {
        malformed(line, "missing \"\xC2\xB5s\" unit");
    }
    return reading;
}

std::string format_line(const RawReading& reading) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", reading.lambda_cm);
    std::string out(buf);
    out += kSeparator;
    out += std::to_string(reading.t_device_us);
    out += ' ';
    out += kMicroSign;
    out += 's';
    return out;
}

ParsedLog parse_log(std::istream& stream, ParsePolicy policy) {
    if (!stream) throw Error(ErrorKind::Io, "unreadable stream");
    ParsedLog out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        if (detail::trim(line).empty()) {
            ++out.skipped;
            continue;
        }
        try {
            out.readings.push_back(parse_line(line));
        } catch (const Error& e) {
            if (policy == ParsePolicy::Strict) {
                throw Error(ErrorKind::MalformedLine, "line " + std::to_string(line_no) + ": " + e.what());
            }
            ++out.skipped;
        }
    }
    if (stream.bad()) throw Error(ErrorKind::Io, "read failure after line " + std::to_string(line_no));
    return out;
}

ParsedLog parse_log_text(std::string_view text, ParsePolicy policy) {
    std::istringstream in{std::string(text)};
    return parse_log(in, policy);
}

TimeSeries to_series(std::span<const RawReading> readings) {
    std::vector<Sample> samples;
    samples.reserve(readings.size());
    for (std::size_t i = 0; i < readings.size(); ++i) {
        if (i > 0 && readings[i].t_device_us <= readings[i - 1].t_device_us) {
            throw Error(ErrorKind::NonMonotonic, "device time does not increase at reading " + std::to_string(i) +
                                                     " (counter wraparound or reordered log)");
        }
        samples.push_back({static_cast<double>(readings[i].t_device_us) * 1e-6, readings[i].lambda_cm});
    }
    return TimeSeries(std::move(samples));
}

TimeSeries rebase(const TimeSeries& series) {
    if (series.empty()) return {};
    const double t0 = series[0].t_s;
    std::vector<Sample> out(series.samples());
    for (auto& s : out) s.t_s -= t0;
    return TimeSeries(std::move(out));
}

std::string to_csv(std::span<const RawReading> readings) {
    std::string out = "t_us,lambda_cm\n";
    for (const auto& r : readings) {
        out += std::to_string(r.t_device_us);
        out += ',';
        out += formats::format_double(r.lambda_cm);
        out += '\n';
    }
    return out;
}

std::vector<RawReading> readings_from_csv(std::string_view text) {
    const auto rows = formats::read_numeric_csv(text, {"t_us", "lambda_cm"});
    std::vector<RawReading> out;
    out.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const double t = rows[i][0];
        if (t < 0 || std::floor(t) != t || t > 9007199254740992.0) {
            throw Error(ErrorKind::MalformedCsv, "t_us must be a non-negative integer on row " + std::to_string(i + 1));
        }
        out.push_back({rows[i][1], static_cast<std::uint64_t>(t), std::nullopt});
    }
    return out;
}

std::string series_to_csv(const TimeSeries& series) {
    std::string out = "t_s,x_cm\n";
    for (const auto& s : series.samples()) {
        out += formats::format_double(s.t_s);
        out += ',';
        out += formats::format_double(s.x_cm);
        out += '\n';
    }
    return out;
}

TimeSeries series_from_csv(std::string_view text) {
    const auto rows = formats::read_numeric_csv(text, {"t_s", "x_cm"});
    std::vector<Sample> samples;
    samples.reserve(rows.size());
    for (const auto& row : rows) samples.push_back({row[0], row[1]});
    return TimeSeries(std::move(samples));
}

}  // namespace radar
