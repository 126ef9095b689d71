#pragma once

// File schemas shared by the CLI and the Python bindings.

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "radar/calibration.hpp"
#include "radar/kinematics.hpp"
#include "radar/simulator.hpp"

namespace radar::formats {

/// Reads a numeric CSV whose header must equal `header` exactly. A file with
/// no content at all yields zero rows.
std::vector<std::vector<double>> read_numeric_csv(std::string_view text, const std::vector<std::string>& header);

std::string format_double(double value);

std::vector<CalibrationPair> calibration_table_from_csv(std::string_view text);
std::vector<EvaluationPair> evaluation_table_from_csv(std::string_view text);

std::string model_to_json(const CalibrationModel& model);
CalibrationModel model_from_json(std::string_view text);

std::string error_report_to_json(const ErrorReport& report);

std::string poly_to_json(const PolyModel& model);
PolyModel poly_from_json(std::string_view text);

std::string motion_to_csv(const std::vector<MotionSample>& samples);

std::string sim_config_to_json(const SimConfig& cfg);
SimConfig sim_config_from_json(std::string_view text);

/// "poly:c0,c1,..." or "seg:x0,duration:velocity,..."
MotionProfile parse_profile(std::string_view spec);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace radar::formats
