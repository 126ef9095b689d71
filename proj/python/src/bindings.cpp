#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "radar/calibration.hpp"
#include "radar/error.hpp"
#include "radar/formats.hpp"
#include "radar/hampel.hpp"
#include "radar/ingest.hpp"
#include "radar/kinematics.hpp"
#include "radar/simulator.hpp"

namespace py = pybind11;
using namespace radar;

namespace {

PyObject* radar_error = nullptr;

template <typename T>
std::string repr_model(const T& m) {
    std::ostringstream os;
    os << "CalibrationModel(slope=" << m.slope << ", intercept=" << m.intercept << ", r=" << m.r << ")";
    return os.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Ultrasonic speed-radar calibration, filtering and kinematics";

    radar_error = PyErr_NewException("speedradar.RadarError", PyExc_RuntimeError, nullptr);
    m.add_object("RadarError", py::handle(radar_error));
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::reinterpret_borrow<py::object>(radar_error)(py::str(e.what()));
            exc.attr("kind") = py::str(std::string(to_string(e.kind())));
            PyErr_SetObject(radar_error, exc.ptr());
        }
    });

    py::enum_<ErrorKind>(m, "ErrorKind")
        .value("MalformedLine", ErrorKind::MalformedLine)
        .value("MalformedCsv", ErrorKind::MalformedCsv)
        .value("MalformedJson", ErrorKind::MalformedJson)
        .value("Io", ErrorKind::Io)
        .value("InsufficientData", ErrorKind::InsufficientData)
        .value("DegenerateInput", ErrorKind::DegenerateInput)
        .value("EmptyRegion", ErrorKind::EmptyRegion)
        .value("EmptySeries", ErrorKind::EmptySeries)
        .value("NonMonotonic", ErrorKind::NonMonotonic)
        .value("NegativeTime", ErrorKind::NegativeTime)
        .value("BadConfig", ErrorKind::BadConfig);

    // ingest
    py::class_<RawReading>(m, "RawReading")
        .def(py::init([](double lambda_cm, std::uint64_t t_device_us, std::optional<std::string> wall_time) {
                 return RawReading{lambda_cm, t_device_us, std::move(wall_time)};
             }),
             py::arg("lambda_cm"), py::arg("t_device_us"), py::arg("wall_time") = py::none())
        .def_readwrite("lambda_cm", &RawReading::lambda_cm)
        .def_readwrite("t_device_us", &RawReading::t_device_us)
        .def_readwrite("wall_time", &RawReading::wall_time)
        .def("__eq__", [](const RawReading& a, const RawReading& b) { return a == b; })
        .def("__repr__", [](const RawReading& r) {
            return "RawReading(lambda_cm=" + formats::format_double(r.lambda_cm) +
                   ", t_device_us=" + std::to_string(r.t_device_us) + ")";
        });

    py::class_<Sample>(m, "Sample")
        .def(py::init([](double t_s, double x_cm) { return Sample{t_s, x_cm}; }), py::arg("t_s"), py::arg("x_cm"))
        .def_readwrite("t_s", &Sample::t_s)
        .def_readwrite("x_cm", &Sample::x_cm)
        .def("__eq__", [](const Sample& a, const Sample& b) { return a == b; });

    py::class_<TimeSeries>(m, "TimeSeries")
        .def(py::init<>())
        .def(py::init<std::vector<Sample>>(), py::arg("samples"))
        .def_static("from_columns",
                    [](const std::vector<double>& t, const std::vector<double>& x) { return TimeSeries::from_columns(t, x); },
                    py::arg("t_s"), py::arg("x_cm"))
        .def_property_readonly("samples", &TimeSeries::samples)
        .def("times", &TimeSeries::times)
        .def("values", &TimeSeries::values)
        .def("__len__", &TimeSeries::size)
        .def("__getitem__",
             [](const TimeSeries& s, std::ptrdiff_t i) {
                 const auto n = static_cast<std::ptrdiff_t>(s.size());
                 if (i < 0) i += n;
                 if (i < 0 || i >= n) throw py::index_error();
                 return s[static_cast<std::size_t>(i)];
             })
        .def("__eq__", [](const TimeSeries& a, const TimeSeries& b) { return a == b; });

    py::enum_<ParsePolicy>(m, "ParsePolicy").value("Strict", ParsePolicy::Strict).value("Skip", ParsePolicy::Skip);

    py::class_<ParsedLog>(m, "ParsedLog")
        .def_readonly("readings", &ParsedLog::readings)
        .def_readonly("skipped", &ParsedLog::skipped);

    m.attr("MICRO_SIGN") = py::str(std::string(kMicroSign));
    m.def("parse_line", [](const std::string& line) { return parse_line(line); }, py::arg("line"));
    m.def("format_line", &format_line, py::arg("reading"));
    m.def("parse_log", [](const std::string& text, ParsePolicy policy) { return parse_log_text(text, policy); },
          py::arg("text"), py::arg("policy") = ParsePolicy::Strict);
    m.def("to_series", [](const std::vector<RawReading>& r) { return to_series(r); }, py::arg("readings"));
    m.def("rebase", &rebase, py::arg("series"));
    m.def("readings_to_csv", [](const std::vector<RawReading>& r) { return to_csv(r); }, py::arg("readings"));
    m.def("readings_from_csv", [](const std::string& text) { return readings_from_csv(text); }, py::arg("text"));
    m.def("series_to_csv", &series_to_csv, py::arg("series"));
    m.def("series_from_csv", [](const std::string& text) { return series_from_csv(text); }, py::arg("text"));

    // calibration
    py::class_<CalibrationPair>(m, "CalibrationPair")
        .def(py::init([](double L_cm, double t_us) { return CalibrationPair{L_cm, t_us}; }), py::arg("L_cm"),
             py::arg("t_us"))
        .def_readwrite("L_cm", &CalibrationPair::L_cm)
        .def_readwrite("t_us", &CalibrationPair::t_us);

    py::class_<EvaluationPair>(m, "EvaluationPair")
        .def(py::init([](double L_cm, double lambda_cm) { return EvaluationPair{L_cm, lambda_cm}; }), py::arg("L_cm"),
             py::arg("lambda_cm"))
        .def_readwrite("L_cm", &EvaluationPair::L_cm)
        .def_readwrite("lambda_cm", &EvaluationPair::lambda_cm);

    py::class_<CalibrationModel>(m, "CalibrationModel")
        .def(py::init([](double slope, double intercept, double r) { return CalibrationModel{slope, intercept, r}; }),
             py::arg("slope"), py::arg("intercept"), py::arg("r") = 1.0)
        .def_readwrite("slope", &CalibrationModel::slope)
        .def_readwrite("intercept", &CalibrationModel::intercept)
        .def_readwrite("r", &CalibrationModel::r)
        .def("__repr__", &repr_model<CalibrationModel>);
    m.attr("FIRMWARE_MODEL") = kFirmwareModel;

    py::class_<Region>(m, "Region")
        .def_static("full", &Region::full)
        .def_static("below", &Region::below, py::arg("bound_cm"))
        .def_static("above", &Region::above, py::arg("bound_cm"))
        .def_static("parse", &Region::parse, py::arg("text"))
        .def("contains", &Region::contains, py::arg("L_cm"))
        .def_property_readonly("label", &Region::label)
        .def_readonly("bound_cm", &Region::bound_cm);

    py::class_<ErrorReport>(m, "ErrorReport")
        .def_readonly("mae_cm", &ErrorReport::mae_cm)
        .def_readonly("mse_cm2", &ErrorReport::mse_cm2)
        .def_readonly("n", &ErrorReport::n)
        .def_readonly("region", &ErrorReport::region);

    m.def("fit_linear", [](const std::vector<CalibrationPair>& p) { return fit_linear(p); }, py::arg("pairs"));
    m.def("predict", &predict, py::arg("model"), py::arg("t_us"));
    m.def("evaluate", [](const std::vector<EvaluationPair>& p) { return evaluate(p); }, py::arg("pairs"));
    m.def("evaluate_region", [](const std::vector<EvaluationPair>& p, const Region& r) { return evaluate_region(p, r); },
          py::arg("pairs"), py::arg("region"));
    m.def("fit_correction", [](const std::vector<EvaluationPair>& p) { return fit_correction(p); }, py::arg("pairs"));
    m.def("evaluate_corrected",
          [](const std::vector<EvaluationPair>& p, const CalibrationModel& model) { return evaluate_corrected(p, model); },
          py::arg("pairs"), py::arg("model"));

    // hampel
    py::class_<HampelConfig>(m, "HampelConfig")
        .def(py::init([](std::size_t window_size, double threshold, double scale) {
                 return HampelConfig{window_size, threshold, scale};
             }),
             py::arg("window_size") = 13, py::arg("threshold") = 0.0, py::arg("scale") = 1.4826)
        .def_readwrite("window_size", &HampelConfig::window_size)
        .def_readwrite("threshold", &HampelConfig::threshold)
        .def_readwrite("scale", &HampelConfig::scale)
        .def("validate", &HampelConfig::validate);

    py::class_<HampelResult>(m, "HampelResult")
        .def_readonly("series", &HampelResult::series)
        .def_readonly("replaced_indices", &HampelResult::replaced_indices);

    m.def("hampel_filter", &hampel_filter, py::arg("series"), py::arg("config") = HampelConfig{});

    // kinematics
    py::class_<Domain>(m, "Domain")
        .def(py::init([](double t_min, double t_max) { return Domain{t_min, t_max}; }), py::arg("t_min"), py::arg("t_max"))
        .def_readwrite("t_min", &Domain::t_min)
        .def_readwrite("t_max", &Domain::t_max)
        .def("contains", &Domain::contains, py::arg("t"));

    py::class_<FitStats>(m, "FitStats")
        .def_readonly("mae_cm", &FitStats::mae_cm)
        .def_readonly("mse_cm2", &FitStats::mse_cm2);

    py::class_<PolyModel>(m, "PolyModel")
        .def(py::init([](std::vector<double> coeffs, Domain domain) { return PolyModel{std::move(coeffs), domain, std::nullopt}; }),
             py::arg("coeffs"), py::arg("domain"))
        .def_readwrite("coeffs", &PolyModel::coeffs)
        .def_readwrite("domain", &PolyModel::domain)
        .def_readonly("fit", &PolyModel::fit)
        .def_property_readonly("degree", &PolyModel::degree);

    py::class_<Evaluation>(m, "Evaluation")
        .def_readonly("value", &Evaluation::value)
        .def_readonly("extrapolated", &Evaluation::extrapolated);

    py::class_<MotionSample>(m, "MotionSample")
        .def_readonly("t_s", &MotionSample::t_s)
        .def_readonly("x_cm", &MotionSample::x_cm)
        .def_readonly("v_cm_s", &MotionSample::v_cm_s)
        .def_readonly("a_cm_s2", &MotionSample::a_cm_s2)
        .def_readonly("extrapolated", &MotionSample::extrapolated);

    py::enum_<Sign>(m, "Sign").value("Negative", Sign::Negative).value("Zero", Sign::Zero).value("Positive", Sign::Positive);

    py::class_<SignInterval>(m, "SignInterval")
        .def_readonly("t_begin", &SignInterval::t_begin)
        .def_readonly("t_end", &SignInterval::t_end)
        .def_readonly("sign", &SignInterval::sign);

    py::class_<Extremum>(m, "Extremum").def_readonly("t_s", &Extremum::t_s).def_readonly("v_cm_s", &Extremum::v_cm_s);

    py::class_<MotionReport>(m, "MotionReport")
        .def_readonly("samples", &MotionReport::samples)
        .def_readonly("v_extremum", &MotionReport::v_extremum)
        .def_readonly("a_zero_crossings", &MotionReport::a_zero_crossings)
        .def_readonly("v_zero_crossings", &MotionReport::v_zero_crossings)
        .def_readonly("a_sign", &MotionReport::a_sign);

    m.def("fit_poly", &fit_poly, py::arg("series"), py::arg("degree") = 3, py::arg("domain") = py::none());
    m.def("differentiate", &differentiate, py::arg("model"));
    m.def("eval_poly", &eval_poly, py::arg("model"), py::arg("t"));
    m.def("roots_in", [](const std::vector<double>& c, double lo, double hi) { return roots_in(c, lo, hi); },
          py::arg("coeffs"), py::arg("lo"), py::arg("hi"));
    m.def("sample_motion", &sample_motion, py::arg("model"), py::arg("t_begin"), py::arg("t_end"), py::arg("n"));
    m.def("motion_report", &motion_report, py::arg("model"), py::arg("n_samples") = 200);

    // simulator
    py::class_<PolyProfile>(m, "PolyProfile")
        .def(py::init([](std::vector<double> coeffs) { return PolyProfile{std::move(coeffs)}; }), py::arg("coeffs"))
        .def_readwrite("coeffs", &PolyProfile::coeffs);

    py::class_<VelocitySegment>(m, "VelocitySegment")
        .def(py::init([](double d, double v) { return VelocitySegment{d, v}; }), py::arg("duration_s"),
             py::arg("velocity_cm_s"))
        .def_readwrite("duration_s", &VelocitySegment::duration_s)
        .def_readwrite("velocity_cm_s", &VelocitySegment::velocity_cm_s);

    py::class_<SegmentProfile>(m, "SegmentProfile")
        .def(py::init([](double x0, std::vector<VelocitySegment> segs) { return SegmentProfile{x0, std::move(segs)}; }),
             py::arg("x0_cm"), py::arg("segments"))
        .def_readwrite("x0_cm", &SegmentProfile::x0_cm)
        .def_readwrite("segments", &SegmentProfile::segments);

    m.def("position_at", &position_at, py::arg("profile"), py::arg("t_s"));

    py::class_<NoiseConfig>(m, "NoiseConfig")
        .def(py::init<>())
        .def_readwrite("jitter_sigma_cm", &NoiseConfig::jitter_sigma_cm)
        .def_readwrite("false_read_prob", &NoiseConfig::false_read_prob)
        .def_readwrite("false_read_value_cm", &NoiseConfig::false_read_value_cm)
        .def_readwrite("max_range_cm", &NoiseConfig::max_range_cm);

    py::class_<SimConfig>(m, "SimConfig")
        .def(py::init<>())
        .def_readwrite("profile", &SimConfig::profile)
        .def_readwrite("model", &SimConfig::model)
        .def_readwrite("period_s", &SimConfig::period_s)
        .def_readwrite("duration_s", &SimConfig::duration_s)
        .def_readwrite("start_offset_s", &SimConfig::start_offset_s)
        .def_readwrite("noise", &SimConfig::noise)
        .def_readwrite("seed", &SimConfig::seed)
        .def("validate", &SimConfig::validate)
        .def("to_json", [](const SimConfig& c) { return formats::sim_config_to_json(c); })
        .def_static("from_json", [](const std::string& text) { return formats::sim_config_from_json(text); },
                    py::arg("text"));

    m.def("distance_to_echo", &distance_to_echo, py::arg("model"), py::arg("d_cm"));
    m.def("simulate", &simulate, py::arg("config"));
    m.def("emit_log", [](const std::vector<RawReading>& r) { return emit_log(r); }, py::arg("readings"));

    // file formats
    m.def("calibration_table_from_csv", [](const std::string& t) { return formats::calibration_table_from_csv(t); },
          py::arg("text"));
    m.def("evaluation_table_from_csv", [](const std::string& t) { return formats::evaluation_table_from_csv(t); },
          py::arg("text"));
    m.def("model_to_json", &formats::model_to_json, py::arg("model"));
    m.def("model_from_json", [](const std::string& t) { return formats::model_from_json(t); }, py::arg("text"));
    m.def("error_report_to_json", &formats::error_report_to_json, py::arg("report"));
    m.def("poly_to_json", &formats::poly_to_json, py::arg("model"));
    m.def("poly_from_json", [](const std::string& t) { return formats::poly_from_json(t); }, py::arg("text"));
    m.def("motion_to_csv", &formats::motion_to_csv, py::arg("samples"));
    m.def("parse_profile", [](const std::string& t) { return formats::parse_profile(t); }, py::arg("text"));
}
