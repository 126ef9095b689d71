// radar: command-line front end for the speed-radar pipeline.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 input parse
// failure, 3 insufficient data, 4 empty region, 5 too few samples left
// after filtering (pipeline only).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "radar/calibration.hpp"
#include "radar/error.hpp"
#include "radar/formats.hpp"
#include "radar/hampel.hpp"
#include "radar/ingest.hpp"
#include "radar/kinematics.hpp"
#include "radar/simulator.hpp"
#include "radar/svg.hpp"

namespace fs = std::filesystem;
using namespace radar;

namespace {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kParse = 2,
    kInsufficient = 3,
    kEmptyRegion = 4,
    kFiltered = 5,
};

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::MalformedLine:
        case ErrorKind::MalformedCsv:
        case ErrorKind::MalformedJson:
        case ErrorKind::Io:
        case ErrorKind::NonMonotonic:
            return kParse;
        case ErrorKind::InsufficientData:
        case ErrorKind::DegenerateInput:
        case ErrorKind::EmptySeries:
            return kInsufficient;
        case ErrorKind::EmptyRegion:
            return kEmptyRegion;
        case ErrorKind::NegativeTime:
        case ErrorKind::BadConfig:
            return kUsage;
    }
    return kUsage;
}

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("radar");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("RADAR_LOG_LEVEL")) {
        spdlog::set_level(spdlog::level::from_str(env));
    }
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
    } else {
        formats::write_file(path, content);
        spdlog::info("wrote {}", path);
    }
}

std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

ParsePolicy policy_from(const std::string& s) { return s == "strict" ? ParsePolicy::Strict : ParsePolicy::Skip; }

HampelConfig hampel_from(std::size_t window, double threshold, double scale) {
    HampelConfig cfg{window, threshold, scale};
    cfg.validate();
    return cfg;
}

std::optional<Domain> domain_from(const std::optional<double>& t_min, const std::optional<double>& t_max,
                                  const TimeSeries& series) {
    if (!t_min && !t_max) return std::nullopt;
    if (series.empty()) return Domain{t_min.value_or(0.0), t_max.value_or(1.0)};
    return Domain{t_min.value_or(series[0].t_s), t_max.value_or(series[series.size() - 1].t_s)};
}

struct MotionColumns {
    std::vector<double> t, x, v, a;
};

MotionColumns columns_of(const std::vector<MotionSample>& samples) {
    MotionColumns c;
    for (const auto& s : samples) {
        c.t.push_back(s.t_s);
        c.x.push_back(s.x_cm);
        c.v.push_back(s.v_cm_s);
        c.a.push_back(s.a_cm_s2);
    }
    return c;
}

void write_plots(const std::string& dir, const std::vector<MotionSample>& samples, const TimeSeries* measured,
                 const TimeSeries* filtered) {
    fs::create_directories(dir);
    const auto c = columns_of(samples);

    svg::Chart position{"Position", "t (s)", "x (cm)", {}};
    if (measured) position.series.push_back({"measured", measured->times(), measured->values(), "#bbbbbb", true});
    if (filtered) position.series.push_back({"Hampel filtered", filtered->times(), filtered->values(), "#ff7f0e", true});
    position.series.push_back({"fitted x(t)", c.t, c.x, "#1f77b4", false});

    const svg::Chart velocity{"Velocity", "t (s)", "v (cm/s)", {{"v(t)", c.t, c.v, "#2ca02c", false}}};
    const svg::Chart acceleration{"Acceleration", "t (s)", "a (cm/s\xC2\xB2)", {{"a(t)", c.t, c.a, "#d62728", false}}};

    formats::write_file((fs::path(dir) / "position.svg").string(), svg::render(position));
    formats::write_file((fs::path(dir) / "velocity.svg").string(), svg::render(velocity));
    formats::write_file((fs::path(dir) / "acceleration.svg").string(), svg::render(acceleration));
    spdlog::info("wrote plots to {}", dir);
}

void print_poly(const PolyModel& model) {
    std::cout << "coeffs (ascending):";
    for (double c : model.coeffs) std::cout << ' ' << fixed4(c);
    std::cout << "\ndomain: [" << fixed4(model.domain.t_min) << ", " << fixed4(model.domain.t_max) << "] s\n";
    if (model.fit) {
        std::cout << "fit MAE: " << fixed4(model.fit->mae_cm) << " cm\nfit MSE: " << fixed4(model.fit->mse_cm2)
                  << " cm^2\n";
    }
}

void print_motion(const MotionReport& report) {
    for (double t : report.a_zero_crossings) std::cout << "a = 0 at t = " << fixed4(t) << " s\n";
    std::cout << "v extremum: v(" << fixed4(report.v_extremum.t_s) << " s) = " << fixed4(report.v_extremum.v_cm_s)
              << " cm/s\n";
    for (const auto& seg : report.a_sign) {
        const char* sign = seg.sign == Sign::Positive ? "a > 0" : seg.sign == Sign::Negative ? "a < 0" : "a = 0";
        std::cout << sign << " on [" << fixed4(seg.t_begin) << ", " << fixed4(seg.t_end) << "] s\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();

    CLI::App app{"Ultrasonic speed-radar toolkit: calibration, log parsing, Hampel filtering, kinematics"};
    app.require_subcommand(1);
    std::function<int()> action;

    // calibrate
    std::string cal_table;
    std::string cal_out;
    auto* calibrate = app.add_subcommand("calibrate", "Fit the echo-time to distance line from an L_cm,t_us table");
    calibrate->add_option("table", cal_table, "CSV with header L_cm,t_us")->required();
    calibrate->add_option("-o,--output", cal_out, "Model JSON path (stdout when omitted)");
    calibrate->callback([&] {
        action = [&] {
            const auto pairs = formats::calibration_table_from_csv(formats::read_file(cal_table));
            const auto model = fit_linear(pairs);
            std::cout << "pairs: " << pairs.size() << "\nslope: " << fixed4(model.slope)
                      << " cm/us\nintercept: " << fixed4(model.intercept) << " cm\nr: " << fixed4(model.r) << '\n';
            emit(cal_out, formats::model_to_json(model));
            return kOk;
        };
    });

    // evaluate
    std::string eval_table;
    std::string eval_region = "full";
    std::string eval_out;
    bool eval_correction = false;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "MAE/MSE of sensor readings against true distances");
    evaluate_cmd->add_option("table", eval_table, "CSV with header L_cm,lambda_cm")->required();
    evaluate_cmd->add_option("--region", eval_region, "full, lt:<cm> or gt:<cm> (strict bounds)");
    evaluate_cmd->add_option("-o,--output", eval_out, "Error report JSON path");
    evaluate_cmd->add_flag("--correction", eval_correction,
                           "Also fit L on lambda over the region and report its training error");
    evaluate_cmd->callback([&] {
        action = [&] {
            const auto region = Region::parse(eval_region);
            const auto pairs = formats::evaluation_table_from_csv(formats::read_file(eval_table));
            const auto report = evaluate_region(pairs, region);
            std::cout << "region: " << report.region.label() << "\nn: " << report.n << "\nMAE: " << fixed4(report.mae_cm)
                      << " cm\nMSE: " << fixed4(report.mse_cm2) << " cm^2\n";
            if (eval_correction) {
                std::vector<EvaluationPair> subset;
                for (const auto& p : pairs) {
                    if (region.contains(p.L_cm)) subset.push_back(p);
                }
                const auto correction = fit_correction(subset);
                const auto corrected = evaluate_corrected(subset, correction);
                std::cout << "correction: L = " << fixed4(correction.slope) << " * lambda + "
                          << fixed4(correction.intercept) << "\ncorrected MAE: " << fixed4(corrected.mae_cm)
                          << " cm\ncorrected MSE: " << fixed4(corrected.mse_cm2) << " cm^2\n";
            }
            if (!eval_out.empty()) emit(eval_out, formats::error_report_to_json(report));
            return kOk;
        };
    });

    // parse
    std::string parse_in;
    std::string parse_out;
    std::string parse_policy = "skip";
    bool parse_rebase = false;
    auto* parse = app.add_subcommand("parse", "Convert a serial .log capture to CSV");
    parse->add_option("log", parse_in, "Serial capture file")->required();
    parse->add_option("-o,--output", parse_out, "CSV path (stdout when omitted)");
    parse->add_option("--policy", parse_policy, "Malformed line handling")->check(CLI::IsMember({"strict", "skip"}));
    parse->add_flag("--rebase", parse_rebase, "Emit t_s,x_cm with the first sample at t = 0");
    parse->callback([&] {
        action = [&] {
            const auto log = parse_log_text(formats::read_file(parse_in), policy_from(parse_policy));
            spdlog::info("{} readings, {} lines skipped", log.readings.size(), log.skipped);
            emit(parse_out, parse_rebase ? series_to_csv(rebase(to_series(log.readings))) : to_csv(log.readings));
            return kOk;
        };
    });

    // filter
    std::string filter_in;
    std::string filter_out;
    std::size_t window = 13;
    double threshold = 0.0;
    double scale = 1.4826;
    auto* filter = app.add_subcommand("filter", "Hampel-filter a t_s,x_cm series");
    filter->add_option("series", filter_in, "CSV with header t_s,x_cm")->required();
    filter->add_option("-o,--output", filter_out, "CSV path (stdout when omitted)");
    filter->add_option("--window", window, "Window size in points (odd, >= 3)");
    filter->add_option("--threshold", threshold, "Outlier threshold in scaled MADs");
    filter->add_option("--scale", scale, "MAD scale constant");
    filter->callback([&] {
        action = [&] {
            const auto cfg = hampel_from(window, threshold, scale);
            const auto series = series_from_csv(formats::read_file(filter_in));
            const auto result = hampel_filter(series, cfg);
            std::cerr << "replaced " << result.replaced_indices.size() << " of " << series.size() << " points\n";
            emit(filter_out, series_to_csv(result.series));
            return kOk;
        };
    });

    // fit
    std::string fit_in;
    std::string fit_out;
    std::size_t degree = 3;
    std::optional<double> t_min;
    std::optional<double> t_max;
    auto* fit = app.add_subcommand("fit", "Least-squares polynomial fit of a t_s,x_cm series");
    fit->add_option("series", fit_in, "CSV with header t_s,x_cm")->required();
    fit->add_option("-o,--output", fit_out, "Model JSON path (stdout when omitted)");
    fit->add_option("--degree", degree, "Polynomial degree");
    fit->add_option("--t-min", t_min, "Domain start (s); defaults to first sample");
    fit->add_option("--t-max", t_max, "Domain end (s); defaults to last sample");
    fit->callback([&] {
        action = [&] {
            const auto series = series_from_csv(formats::read_file(fit_in));
            const auto model = fit_poly(series, degree, domain_from(t_min, t_max, series));
            print_poly(model);
            emit(fit_out, formats::poly_to_json(model));
            return kOk;
        };
    });

    // report
    std::string report_in;
    std::string report_out;
    std::size_t n_samples = 200;
    std::optional<double> report_from;
    std::optional<double> report_to;
    std::string report_plots;
    auto* report = app.add_subcommand("report", "Sample x, v, a of a fitted model");
    report->add_option("model", report_in, "Polynomial model JSON")->required();
    report->add_option("-o,--output", report_out, "Report CSV path (stdout when omitted)");
    report->add_option("--samples", n_samples, "Number of uniformly spaced samples (>= 2)");
    report->add_option("--from", report_from, "Sampling start (s); outside the domain is flagged extrapolated");
    report->add_option("--to", report_to, "Sampling end (s)");
    report->add_option("--plots", report_plots, "Directory for position/velocity/acceleration SVGs");
    report->callback([&] {
        action = [&] {
            const auto model = formats::poly_from_json(formats::read_file(report_in));
            const auto motion = motion_report(model, n_samples);
            const auto samples = (report_from || report_to)
                                     ? sample_motion(model, report_from.value_or(model.domain.t_min),
                                                     report_to.value_or(model.domain.t_max), n_samples)
                                     : motion.samples;
            print_motion(motion);
            if (!report_plots.empty()) write_plots(report_plots, samples, nullptr, nullptr);
            if (!report_out.empty()) emit(report_out, formats::motion_to_csv(samples));
            else std::cout << formats::motion_to_csv(samples);
            return kOk;
        };
    });

    // simulate
    std::string sim_config;
    std::string sim_out;
    std::string sim_dump;
    std::string sim_model;
    std::optional<std::uint64_t> seed;
    std::optional<double> period;
    std::optional<double> duration;
    std::optional<double> start_offset;
    std::optional<std::string> profile;
    std::optional<double> false_read_prob;
    std::optional<double> false_read_value;
    std::optional<double> max_range;
    std::optional<double> jitter;
    auto* simulate_cmd = app.add_subcommand("simulate", "Generate a synthetic serial capture");
    simulate_cmd->add_option("--config", sim_config, "SimConfig JSON; flags below override its fields");
    simulate_cmd->add_option("-o,--output", sim_out, "Log path (stdout when omitted)");
    simulate_cmd->add_option("--dump-config", sim_dump, "Write the effective SimConfig JSON here");
    simulate_cmd->add_option("--model", sim_model, "Calibration model JSON (defaults to the firmware coefficients)");
    simulate_cmd->add_option("--seed", seed, "RNG seed");
    simulate_cmd->add_option("--period", period, "Sampling period (s)");
    simulate_cmd->add_option("--duration", duration, "Run length (s)");
    simulate_cmd->add_option("--start-offset", start_offset, "Device clock at the first sample (s)");
    simulate_cmd->add_option("--profile", profile, "poly:c0,c1,... or seg:x0,duration:velocity,...");
    simulate_cmd->add_option("--false-read-prob", false_read_prob, "Probability of a false read per sample");
    simulate_cmd->add_option("--false-read-value", false_read_value, "Distance reported on a false read (cm)");
    simulate_cmd->add_option("--max-range", max_range, "Range ceiling (cm)");
    simulate_cmd->add_option("--jitter", jitter, "Gaussian jitter sigma (cm)");
    simulate_cmd->callback([&] {
        action = [&] {
            SimConfig cfg;
            if (!sim_config.empty()) cfg = formats::sim_config_from_json(formats::read_file(sim_config));
            if (!sim_model.empty()) cfg.model = formats::model_from_json(formats::read_file(sim_model));
            if (seed) cfg.seed = *seed;
            if (period) cfg.period_s = *period;
            if (duration) cfg.duration_s = *duration;
            if (start_offset) cfg.start_offset_s = *start_offset;
            if (profile) cfg.profile = formats::parse_profile(*profile);
            if (false_read_prob) cfg.noise.false_read_prob = *false_read_prob;
            if (false_read_value) cfg.noise.false_read_value_cm = *false_read_value;
            if (max_range) cfg.noise.max_range_cm = *max_range;
            if (jitter) cfg.noise.jitter_sigma_cm = *jitter;
            cfg.validate();
            if (!sim_dump.empty()) formats::write_file(sim_dump, formats::sim_config_to_json(cfg));
            const auto readings = simulate(cfg);
            spdlog::info("simulated {} readings", readings.size());
            emit(sim_out, emit_log(readings));
            return kOk;
        };
    });

    // pipeline
    std::string pipe_in;
    std::string pipe_out;
    std::string pipe_policy = "skip";
    std::string pipe_recal;
    std::string pipe_log_model;
    std::string pipe_model_out;
    std::string pipe_filtered_out;
    std::string pipe_plots;
    auto* pipeline = app.add_subcommand("pipeline", "parse -> rebase -> Hampel -> fit -> motion report");
    pipeline->add_option("log", pipe_in, "Serial capture file")->required();
    pipeline->add_option("-o,--output", pipe_out, "Report CSV path");
    pipeline->add_option("--policy", pipe_policy, "Malformed line handling")->check(CLI::IsMember({"strict", "skip"}));
    pipeline->add_option("--recalibrate", pipe_recal, "Recompute lambda from the echo time with this model JSON");
    pipeline->add_option("--log-model", pipe_log_model,
                         "Model the log was produced with (defaults to the firmware coefficients)");
    pipeline->add_option("--window", window, "Hampel window size");
    pipeline->add_option("--threshold", threshold, "Hampel threshold");
    pipeline->add_option("--scale", scale, "Hampel MAD scale");
    pipeline->add_option("--degree", degree, "Polynomial degree");
    pipeline->add_option("--t-min", t_min, "Fit domain start (s, after rebasing)");
    pipeline->add_option("--t-max", t_max, "Fit domain end (s, after rebasing)");
    pipeline->add_option("--samples", n_samples, "Report sample count");
    pipeline->add_option("--model-out", pipe_model_out, "Write the fitted polynomial JSON here");
    pipeline->add_option("--filtered-out", pipe_filtered_out, "Write the filtered t_s,x_cm series here");
    pipeline->add_option("--plots", pipe_plots, "Directory for position/velocity/acceleration SVGs");
    pipeline->callback([&] {
        action = [&] {
            const auto cfg = hampel_from(window, threshold, scale);
            auto log = parse_log_text(formats::read_file(pipe_in), policy_from(pipe_policy));
            spdlog::info("{} readings, {} lines skipped", log.readings.size(), log.skipped);

            if (!pipe_recal.empty()) {
                const auto target = formats::model_from_json(formats::read_file(pipe_recal));
                const auto source =
                    pipe_log_model.empty() ? kFirmwareModel : formats::model_from_json(formats::read_file(pipe_log_model));
                for (auto& r : log.readings) {
                    const auto echo = distance_to_echo(source, std::max(r.lambda_cm, source.intercept));
                    r.lambda_cm = predict(target, static_cast<double>(echo));
                }
            }

            const auto series = rebase(to_series(log.readings));
            PolyModel model;
            HampelResult filtered;
            try {
                filtered = hampel_filter(series, cfg);
                model = fit_poly(filtered.series, degree, domain_from(t_min, t_max, filtered.series));
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::EmptySeries || e.kind() == ErrorKind::InsufficientData ||
                    e.kind() == ErrorKind::DegenerateInput) {
                    std::cerr << "error: " << e.what() << '\n';
                    return kFiltered;
                }
                throw;
            }
            std::cout << "readings: " << log.readings.size() << " (skipped " << log.skipped << ")\nreplaced by Hampel: "
                      << filtered.replaced_indices.size() << '\n';
            print_poly(model);
            const auto motion = motion_report(model, n_samples);
            print_motion(motion);

            if (!pipe_model_out.empty()) formats::write_file(pipe_model_out, formats::poly_to_json(model));
            if (!pipe_filtered_out.empty()) formats::write_file(pipe_filtered_out, series_to_csv(filtered.series));
            if (!pipe_plots.empty()) write_plots(pipe_plots, motion.samples, &series, &filtered.series);
            if (!pipe_out.empty()) emit(pipe_out, formats::motion_to_csv(motion.samples));
            return kOk;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        return action();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
}
