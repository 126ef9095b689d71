#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <json.hpp>
#include <string>

#include "radar/formats.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code{-1};
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(RADAR_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::path(RADAR_TMP_DIR) / ::testing::UnitTest::GetInstance()->current_test_info()->name();
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string write(const std::string& name, const std::string& content) const {
        radar::formats::write_file(path(name), content);
        return path(name);
    }

    fs::path dir_;
};

const std::string kCalibrationCsv = RADAR_DATA_DIR "/table1_calibration.csv";
const std::string kEvaluationCsv = RADAR_DATA_DIR "/table2_evaluation.csv";

TEST_F(Cli, CalibrateReferenceTable) {
    const auto r = run("calibrate " + kCalibrationCsv + " -o " + path("model.json"));
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("slope: 0.0183 cm/us"), std::string::npos) << r.out;
    const auto j = nlohmann::json::parse(radar::formats::read_file(path("model.json")));
    EXPECT_GE(j.at("r").get<double>(), 0.998);
    EXPECT_EQ(j.size(), 3u);
}

TEST_F(Cli, CalibrateErrors) {
    EXPECT_EQ(run("calibrate " + write("empty.csv", "")).code, 3);
    EXPECT_EQ(run("calibrate " + write("header.csv", "L_cm,t_us\n")).code, 3);
    EXPECT_EQ(run("calibrate " + write("garbage.csv", "this is not,a table\n\x01\x02\n")).code, 2);
    EXPECT_EQ(run("calibrate " + path("missing.csv")).code, 2);
}

TEST_F(Cli, EvaluateRegions) {
    auto r = run("evaluate " + kEvaluationCsv + " -o " + path("report.json"));
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("MAE: 0.3974 cm"), std::string::npos) << r.out;
    const auto j = nlohmann::json::parse(radar::formats::read_file(path("report.json")));
    EXPECT_EQ(j.at("region"), "full");
    EXPECT_EQ(j.at("n"), 35);

    r = run("evaluate " + kEvaluationCsv + " --region gt:20");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("MAE: 0.1820 cm"), std::string::npos) << r.out;

    r = run("evaluate " + kEvaluationCsv + " --region lt:10");
    EXPECT_NE(r.out.find("MAE: 0.6921 cm"), std::string::npos) << r.out;

    EXPECT_EQ(run("evaluate " + kEvaluationCsv + " --region gt:1000").code, 4);
    EXPECT_EQ(run("evaluate " + kEvaluationCsv + " --region between:1").code, 1);
}

TEST_F(Cli, EvaluateCorrection) {
    const auto r = run("evaluate " + kEvaluationCsv + " --region gt:20 --correction");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("corrected MSE: 0.0177"), std::string::npos) << r.out;
}

TEST_F(Cli, ParseLog) {
    const auto log = write("run.log",
                           "[2024-05-01T10:00:00.000] 3.85 cm - 610000000 \xC2\xB5s\n"
                           "garbage line\n"
                           "[2024-05-01T10:00:00.100] 4.00 cm - 610100000 \xC2\xB5s\n");
    auto r = run("parse " + log);
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "t_us,lambda_cm\n610000000,3.85\n610100000,4\n");

    r = run("parse " + log + " --rebase");
    EXPECT_EQ(r.out, "t_s,x_cm\n0,3.85\n0.10000000000002274,4\n");

    EXPECT_EQ(run("parse " + log + " --policy strict").code, 2);
}

TEST_F(Cli, FilterAndFit) {
    std::string csv = "t_s,x_cm\n";
    for (int i = 0; i < 60; ++i) {
        const double t = 0.02 * i;
        csv += radar::formats::format_double(t) + "," + radar::formats::format_double(i == 30 ? 48.02 : 5 + 20 * t) + "\n";
    }
    const auto series = write("series.csv", csv);
    auto r = run("filter " + series + " -o " + path("filtered.csv"));
    EXPECT_EQ(r.code, 0);
    const auto filtered = radar::formats::read_file(path("filtered.csv"));
    EXPECT_EQ(filtered.rfind("t_s,x_cm\n", 0), 0u);
    EXPECT_EQ(filtered.find("48.02"), std::string::npos);

    // The median window shifts a few neighbours of the spike, so only a loose slope check here.
    r = run("fit " + path("filtered.csv") + " --degree 1 -o " + path("poly.json"));
    EXPECT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(radar::formats::read_file(path("poly.json")));
    EXPECT_NEAR(j.at("coeffs_ascending")[1].get<double>(), 20.0, 0.1);

    std::string clean = "t_s,x_cm\n";
    for (int i = 0; i < 60; ++i) {
        const double t = 0.02 * i;
        clean += radar::formats::format_double(t) + "," + radar::formats::format_double(5 + 20 * t) + "\n";
    }
    r = run("fit " + write("clean.csv", clean) + " --degree 1 -o " + path("clean.json"));
    EXPECT_EQ(r.code, 0);
    j = nlohmann::json::parse(radar::formats::read_file(path("clean.json")));
    EXPECT_NEAR(j.at("coeffs_ascending")[0].get<double>(), 5.0, 1e-9);
    EXPECT_NEAR(j.at("coeffs_ascending")[1].get<double>(), 20.0, 1e-9);

    EXPECT_EQ(run("filter " + series + " --window 12").code, 1);
}

TEST_F(Cli, ReportWithPlots) {
    const auto model = write("cubic.json", R"({"coeffs_ascending": [11.86, -72.0, 176.89, -56.03],
        "t_min_s": 0.26, "t_max_s": 1.45, "fit_mae_cm": null, "fit_mse_cm2": null})");
    auto r = run("report " + model + " --samples 50 -o " + path("report.csv") + " --plots " + path("plots"));
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("a = 0 at t = 1.0524 s"), std::string::npos) << r.out;
    const auto csv = radar::formats::read_file(path("report.csv"));
    EXPECT_EQ(csv.rfind("t_s,x_cm,v_cm_s,a_cm_s2,extrapolated\n", 0), 0u);
    for (const char* f : {"position.svg", "velocity.svg", "acceleration.svg"}) {
        EXPECT_TRUE(fs::exists(dir_ / "plots" / f)) << f;
    }

    r = run("report " + model + " --samples 3 --from 0 --to 2");
    EXPECT_NE(r.out.find("0,11.86,-72,353.78,1\n"), std::string::npos) << r.out;
}

TEST_F(Cli, SimulateIsDeterministic) {
    const std::string args = " --profile poly:3.85,10,40,-10 --duration 2 --jitter 0.3 --false-read-prob 0.1 --seed 5";
    EXPECT_EQ(run("simulate" + args + " -o " + path("a.log")).code, 0);
    EXPECT_EQ(run("simulate" + args + " -o " + path("b.log") + " --dump-config " + path("cfg.json")).code, 0);
    EXPECT_EQ(radar::formats::read_file(path("a.log")), radar::formats::read_file(path("b.log")));
    EXPECT_EQ(run("simulate --config " + path("cfg.json") + " -o " + path("c.log")).code, 0);
    EXPECT_EQ(radar::formats::read_file(path("a.log")), radar::formats::read_file(path("c.log")));
    EXPECT_EQ(run("simulate --profile poly:1 --duration 1 --false-read-prob 2").code, 1);
}

TEST_F(Cli, PipelineNoiselessRoundTrip) {
    ASSERT_EQ(run("simulate --profile poly:3.85,10,40,-10 --duration 2 -o " + path("run.log")).code, 0);
    const auto r = run("pipeline " + path("run.log") + " --t-min 0.2 --t-max 1.8 --model-out " + path("poly.json") +
                       " -o " + path("report.csv") + " --plots " + path("plots"));
    EXPECT_EQ(r.code, 0) << r.out;
    const auto j = nlohmann::json::parse(radar::formats::read_file(path("poly.json")));
    const std::vector<double> want{3.85, 10.0, 40.0, -10.0};
    for (std::size_t k = 0; k < want.size(); ++k) {
        EXPECT_LE(std::abs(j.at("coeffs_ascending")[k].get<double>() - want[k]), 0.005 * std::abs(want[k]));
    }
    EXPECT_TRUE(fs::exists(dir_ / "plots" / "position.svg"));
}

TEST_F(Cli, PipelineWithFalseReads) {
    ASSERT_EQ(run("simulate --profile poly:3.85,10,40,-10 --duration 2 --false-read-prob 0.1 --seed 8 -o " +
                  path("run.log"))
                  .code,
              0);
    const auto r = run("pipeline " + path("run.log"));
    EXPECT_EQ(r.code, 0);
    const auto pos = r.out.find("replaced by Hampel: ");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_GT(std::stoi(r.out.substr(pos + 20)), 0);
}

TEST_F(Cli, PipelineAllMalformed) {
    const auto log = write("bad.log", "nothing here\nstill nothing\n");
    EXPECT_EQ(run("pipeline " + log + " --policy strict").code, 2);
    EXPECT_EQ(run("pipeline " + log).code, 5);
}

TEST_F(Cli, PipelineRecalibrate) {
    ASSERT_EQ(run("simulate --profile poly:20,10 --duration 1 -o " + path("run.log")).code, 0);
    ASSERT_EQ(run("calibrate " + kCalibrationCsv + " -o " + path("model.json")).code, 0);
    const auto r = run("pipeline " + path("run.log") + " --degree 1 --recalibrate " + path("model.json") +
                       " --model-out " + path("poly.json"));
    EXPECT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(radar::formats::read_file(path("poly.json")));
    // Fitted slope 0.0183276 vs firmware 0.0183 scales velocity by ~1.0015.
    EXPECT_NEAR(j.at("coeffs_ascending")[1].get<double>(), 10.0 * 0.018327575464321694 / 0.0183, 0.02);
}

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run("").code, 1);
    EXPECT_EQ(run("frobnicate").code, 1);
    EXPECT_EQ(run("--help").code, 0);
}

}  // namespace
