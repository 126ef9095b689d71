#include "radar/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace radar::svg {

namespace {

struct Axis {
    double lo{0.0};
    double hi{1.0};
    double step{0.2};
};

double nice_step(double span) {
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double f = raw / mag;
    if (f < 1.5) return mag;
    if (f < 3.5) return 2.0 * mag;
    if (f < 7.5) return 5.0 * mag;
    return 10.0 * mag;
}

Axis make_axis(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) return {};
    if (hi - lo <= 0.0) {
        const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
        lo -= pad;
        hi += pad;
    }
    Axis axis;
    axis.step = nice_step(hi - lo);
    axis.lo = std::floor(lo / axis.step) * axis.step;
    axis.hi = std::ceil(hi / axis.step) * axis.step;
    return axis;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick_label(double v, double step) {
    if (std::abs(v) < step * 1e-9) v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

std::string render(const Chart& chart) {
    constexpr double kLeft = 70.0;
    constexpr double kRight = 20.0;
    constexpr double kTop = 40.0;
    constexpr double kBottom = 55.0;

    double x_lo = std::numeric_limits<double>::infinity();
    double x_hi = -x_lo;
    double y_lo = x_lo;
    double y_hi = -x_lo;
    for (const auto& s : chart.series) {
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x_lo = std::min(x_lo, s.x[i]);
            x_hi = std::max(x_hi, s.x[i]);
            y_lo = std::min(y_lo, s.y[i]);
            y_hi = std::max(y_hi, s.y[i]);
        }
    }
    const Axis xa = make_axis(x_lo, x_hi);
    const Axis ya = make_axis(y_lo, y_hi);

    const double w = chart.width;
    const double h = chart.height;
    const double pw = w - kLeft - kRight;
    const double ph = h - kTop - kBottom;
    const auto px = [&](double x) { return kLeft + (x - xa.lo) / (xa.hi - xa.lo) * pw; };
    const auto py = [&](double y) { return kTop + ph - (y - ya.lo) / (ya.hi - ya.lo) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << chart.width << "\" height=\"" << chart.height
      << "\" viewBox=\"0 0 " << chart.width << ' ' << chart.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << num(w / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(chart.title)
      << "</text>\n";

    o << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
    for (double t = xa.lo; t <= xa.hi + xa.step * 1e-6; t += xa.step) {
        o << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(px(t)) << "\" y2=\""
          << num(kTop + ph) << "\"/>\n";
    }
    for (double t = ya.lo; t <= ya.hi + ya.step * 1e-6; t += ya.step) {
        o << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(kLeft + pw) << "\" y2=\""
          << num(py(t)) << "\"/>\n";
    }
    o << "</g>\n";

    o << "<g fill=\"#333333\">\n";
    for (double t = xa.lo; t <= xa.hi + xa.step * 1e-6; t += xa.step) {
        o << "<text x=\"" << num(px(t)) << "\" y=\"" << num(kTop + ph + 18) << "\" text-anchor=\"middle\">"
          << tick_label(t, xa.step) << "</text>\n";
    }
    for (double t = ya.lo; t <= ya.hi + ya.step * 1e-6; t += ya.step) {
        o << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(t) + 4) << "\" text-anchor=\"end\">"
          << tick_label(t, ya.step) << "</text>\n";
    }
    o << "</g>\n";
    o << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
      << "\" fill=\"none\" stroke=\"#333333\"/>\n";
    o << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(h - 12) << "\" text-anchor=\"middle\">"
      << escape(chart.x_label) << "</text>\n";
    o << "<text transform=\"translate(18 " << num(kTop + ph / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(chart.y_label) << "</text>\n";

    for (const auto& s : chart.series) {
        const std::size_t n = std::min(s.x.size(), s.y.size());
        if (s.markers) {
            o << "<g fill=\"" << escape(s.color) << "\" fill-opacity=\"0.7\">\n";
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                o << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i])) << "\" r=\"2\"/>\n";
            }
            o << "</g>\n";
        } else {
            o << "<polyline fill=\"none\" stroke=\"" << escape(s.color) << "\" stroke-width=\"2\" points=\"";
            for (std::size_t i = 0; i < n; ++i) {
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                o << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
            }
            o << "\"/>\n";
        }
    }

    double ly = kTop + 14;
    for (const auto& s : chart.series) {
        if (s.label.empty()) continue;
        const double lx = kLeft + pw - 150;
        if (s.markers) {
            o << "<circle cx=\"" << num(lx + 10) << "\" cy=\"" << num(ly - 4) << "\" r=\"3\" fill=\"" << escape(s.color)
              << "\"/>\n";
        } else {
            o << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly - 4) << "\" x2=\"" << num(lx + 20) << "\" y2=\""
              << num(ly - 4) << "\" stroke=\"" << escape(s.color) << "\" stroke-width=\"2\"/>\n";
        }
        o << "<text x=\"" << num(lx + 26) << "\" y=\"" << num(ly) << "\">" << escape(s.label) << "</text>\n";
        ly += 16;
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace radar::svg
