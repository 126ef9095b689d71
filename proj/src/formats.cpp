#include "radar/formats.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "radar/error.hpp"
#include "text_util.hpp"

namespace radar::formats {

using nlohmann::json;

namespace {

std::vector<std::string_view> split(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(delim, start);
        out.push_back(detail::trim(line.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::MalformedJson, e.what());
    }
}

template <typename T>
T required(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::MalformedJson, std::string("missing key \"") + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::MalformedJson, std::string("bad value for \"") + key + "\": " + e.what());
    }
}

template <typename T>
T optional_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    return required<T>(j, key);
}

json model_json(const CalibrationModel& m) {
    return {{"slope_cm_per_us", m.slope}, {"intercept_cm", m.intercept}, {"r", m.r}};
}

CalibrationModel model_from(const json& j) {
    return {required<double>(j, "slope_cm_per_us"), required<double>(j, "intercept_cm"), required<double>(j, "r")};
}

json profile_json(const MotionProfile& profile) {
    if (const auto* poly = std::get_if<PolyProfile>(&profile)) {
        return {{"kind", "poly"}, {"coeffs", poly->coeffs}};
    }
    const auto& seg = std::get<SegmentProfile>(profile);
    json segments = json::array();
    for (const auto& s : seg.segments) segments.push_back({{"duration_s", s.duration_s}, {"velocity_cm_s", s.velocity_cm_s}});
    return {{"kind", "segments"}, {"x0_cm", seg.x0_cm}, {"segments", segments}};
}

MotionProfile profile_from(const json& j) {
    const auto kind = required<std::string>(j, "kind");
    if (kind == "poly") return PolyProfile{required<std::vector<double>>(j, "coeffs")};
    if (kind == "segments") {
        SegmentProfile seg;
        seg.x0_cm = required<double>(j, "x0_cm");
        for (const auto& s : required<json>(j, "segments")) {
            seg.segments.push_back({required<double>(s, "duration_s"), required<double>(s, "velocity_cm_s")});
        }
        return seg;
    }
    throw Error(ErrorKind::MalformedJson, "profile kind must be \"poly\" or \"segments\"");
}

}  // namespace

std::string format_double(double value) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

std::vector<std::vector<double>> read_numeric_csv(std::string_view text, const std::vector<std::string>& header) {
    std::vector<std::vector<double>> rows;
    bool have_header = false;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        const std::string_view line = detail::trim(text.substr(start, end == std::string_view::npos ? end : end - start));
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        if (line.empty()) continue;

        const auto cells = split(line, ',');
        if (!have_header) {
            bool ok = cells.size() == header.size();
            for (std::size_t i = 0; ok && i < cells.size(); ++i) ok = cells[i] == header[i];
            if (!ok) {
                std::string expected;
                for (const auto& h : header) expected += (expected.empty() ? "" : ",") + h;
                throw Error(ErrorKind::MalformedCsv, "expected header \"" + expected + "\", got \"" + std::string(line) + "\"");
            }
            have_header = true;
            continue;
        }
        if (cells.size() != header.size()) {
            throw Error(ErrorKind::MalformedCsv, "line " + std::to_string(line_no) + ": expected " +
                                                     std::to_string(header.size()) + " fields");
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto cell : cells) {
            const auto v = detail::parse_double(cell);
            if (!v || !std::isfinite(*v)) {
                throw Error(ErrorKind::MalformedCsv,
                            "line " + std::to_string(line_no) + ": non-numeric field \"" + std::string(cell) + "\"");
            }
            row.push_back(*v);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<CalibrationPair> calibration_table_from_csv(std::string_view text) {
    std::vector<CalibrationPair> out;
    for (const auto& row : read_numeric_csv(text, {"L_cm", "t_us"})) out.push_back({row[0], row[1]});
    return out;
}

std::vector<EvaluationPair> evaluation_table_from_csv(std::string_view text) {
    std::vector<EvaluationPair> out;
    for (const auto& row : read_numeric_csv(text, {"L_cm", "lambda_cm"})) out.push_back({row[0], row[1]});
    return out;
}

std::string model_to_json(const CalibrationModel& model) { return model_json(model).dump(2) + "\n"; }

CalibrationModel model_from_json(std::string_view text) { return model_from(parse_json(text)); }

std::string error_report_to_json(const ErrorReport& report) {
    const json j = {{"mae_cm", report.mae_cm},
                    {"mse_cm2", report.mse_cm2},
                    {"n", report.n},
                    {"region", report.region.label()}};
    return j.dump(2) + "\n";
}

std::string poly_to_json(const PolyModel& model) {
    json j = {{"coeffs_ascending", model.coeffs}, {"t_min_s", model.domain.t_min}, {"t_max_s", model.domain.t_max}};
    if (model.fit) {
        j["fit_mae_cm"] = model.fit->mae_cm;
        j["fit_mse_cm2"] = model.fit->mse_cm2;
    } else {
        j["fit_mae_cm"] = nullptr;
        j["fit_mse_cm2"] = nullptr;
    }
    return j.dump(2) + "\n";
}

PolyModel poly_from_json(std::string_view text) {
    const json j = parse_json(text);
    PolyModel model;
    model.coeffs = required<std::vector<double>>(j, "coeffs_ascending");
    if (model.coeffs.empty()) throw Error(ErrorKind::MalformedJson, "coeffs_ascending must not be empty");
    model.domain = {required<double>(j, "t_min_s"), required<double>(j, "t_max_s")};
    if (!(model.domain.t_min < model.domain.t_max)) throw Error(ErrorKind::MalformedJson, "t_min_s must be < t_max_s");
    if (j.contains("fit_mae_cm") && !j.at("fit_mae_cm").is_null()) {
        model.fit = FitStats{required<double>(j, "fit_mae_cm"), required<double>(j, "fit_mse_cm2")};
    }
    return model;
}

std::string motion_to_csv(const std::vector<MotionSample>& samples) {
    std::string out = "t_s,x_cm,v_cm_s,a_cm_s2,extrapolated\n";
    for (const auto& s : samples) {
        out += format_double(s.t_s) + ',' + format_double(s.x_cm) + ',' + format_double(s.v_cm_s) + ',' +
               format_double(s.a_cm_s2) + ',' + (s.extrapolated ? "1" : "0") + '\n';
    }
    return out;
}

std::string sim_config_to_json(const SimConfig& cfg) {
    const json j = {{"profile", profile_json(cfg.profile)},
                    {"model", model_json(cfg.model)},
                    {"period_s", cfg.period_s},
                    {"duration_s", cfg.duration_s},
                    {"start_offset_s", cfg.start_offset_s},
                    {"noise",
                     {{"jitter_sigma_cm", cfg.noise.jitter_sigma_cm},
                      {"false_read_prob", cfg.noise.false_read_prob},
                      {"false_read_value_cm", cfg.noise.false_read_value_cm},
                      {"max_range_cm", cfg.noise.max_range_cm}}},
                    {"seed", cfg.seed}};
    return j.dump(2) + "\n";
}

SimConfig sim_config_from_json(std::string_view text) {
    const json j = parse_json(text);
    SimConfig cfg;
    cfg.profile = profile_from(required<json>(j, "profile"));
    cfg.duration_s = required<double>(j, "duration_s");
    if (j.contains("model")) cfg.model = model_from(j.at("model"));
    cfg.period_s = optional_or(j, "period_s", cfg.period_s);
    cfg.start_offset_s = optional_or(j, "start_offset_s", cfg.start_offset_s);
    cfg.seed = optional_or<std::uint64_t>(j, "seed", cfg.seed);
    if (j.contains("noise")) {
        const auto& n = j.at("noise");
        cfg.noise.jitter_sigma_cm = optional_or(n, "jitter_sigma_cm", cfg.noise.jitter_sigma_cm);
        cfg.noise.false_read_prob = optional_or(n, "false_read_prob", cfg.noise.false_read_prob);
        cfg.noise.false_read_value_cm = optional_or(n, "false_read_value_cm", cfg.noise.false_read_value_cm);
        cfg.noise.max_range_cm = optional_or(n, "max_range_cm", cfg.noise.max_range_cm);
    }
    cfg.validate();
    return cfg;
}

MotionProfile parse_profile(std::string_view spec) {
    const auto colon = spec.find(':');
    const auto kind = spec.substr(0, colon);
    if (colon == std::string_view::npos) throw Error(ErrorKind::BadConfig, "profile must be poly:... or seg:...");
    const auto fields = split(spec.substr(colon + 1), ',');

    const auto number = [&](std::string_view s) {
        const auto v = detail::parse_double(s);
        if (!v || !std::isfinite(*v)) throw Error(ErrorKind::BadConfig, "bad number \"" + std::string(s) + "\" in profile");
        return *v;
    };

    if (kind == "poly") {
        PolyProfile p;
        for (const auto f : fields) p.coeffs.push_back(number(f));
        return p;
    }
    if (kind == "seg") {
        SegmentProfile p;
        p.x0_cm = number(fields.front());
        for (std::size_t i = 1; i < fields.size(); ++i) {
            const auto parts = split(fields[i], ':');
            if (parts.size() != 2) throw Error(ErrorKind::BadConfig, "segment must be duration:velocity");
            p.segments.push_back({number(parts[0]), number(parts[1])});
        }
        return p;
    }
    throw Error(ErrorKind::BadConfig, "unknown profile kind \"" + std::string(kind) + "\"");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw Error(ErrorKind::Io, "read failure on " + path);
    return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(ErrorKind::Io, "write failure on " + path);
}

}  // namespace radar::formats
