#include "radar/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "radar/error.hpp"

namespace radar {

namespace {

double horner(std::span<const double> coeffs, double t) {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
    return acc;
}

// In-place Cholesky solve of the symmetric positive definite system A x = b.
// Returns false when a pivot collapses relative to the matrix scale.
bool cholesky_solve(std::vector<double>& a, std::vector<double>& b, std::size_t m) {
    double scale = 0.0;
    for (std::size_t i = 0; i < m; ++i) scale = std::max(scale, a[i * m + i]);
    for (std::size_t j = 0; j < m; ++j) {
        double d = a[j * m + j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j * m + k] * a[j * m + k];
        if (!(d > 1e-13 * scale)) return false;
        d = std::sqrt(d);
        a[j * m + j] = d;
        for (std::size_t i = j + 1; i < m; ++i) {
            double s = a[i * m + j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i * m + k] * a[j * m + k];
            a[i * m + j] = s / d;
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= a[i * m + k] * b[k];
        b[i] = s / a[i * m + i];
    }
    for (std::size_t i = m; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < m; ++k) s -= a[k * m + i] * b[k];
        b[i] = s / a[i * m + i];
    }
    return true;
}

double binomial(std::size_t n, std::size_t k) {
    double r = 1.0;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

// Coefficients of sum_k b_k ((t - center) / half)^k re-expressed in powers of t.
std::vector<double> unscale(const std::vector<double>& b, double center, double half) {
    const std::size_t m = b.size();
    std::vector<double> out(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        const double bk = b[k] / std::pow(half, static_cast<double>(k));
        for (std::size_t j = 0; j <= k; ++j) {
            out[j] += bk * binomial(k, j) * std::pow(-center, static_cast<double>(k - j));
        }
    }
    return out;
}

std::vector<double> trimmed(std::span<const double> coeffs) {
    std::vector<double> c(coeffs.begin(), coeffs.end());
    while (c.size() > 1 && c.back() == 0.0) c.pop_back();
    return c;
}

Sign sign_of(double v) {
    if (v > 0.0) return Sign::Positive;
    if (v < 0.0) return Sign::Negative;
    return Sign::Zero;
}

}  // namespace

PolyModel fit_poly(const TimeSeries& series, std::size_t degree, std::optional<Domain> domain) {
    if (degree < 1) throw Error(ErrorKind::BadConfig, "degree must be >= 1");
    if (series.empty()) throw Error(ErrorKind::InsufficientData, "empty series");
    const Domain dom = domain.value_or(Domain{series[0].t_s, series[series.size() - 1].t_s});
    if (!(dom.t_min < dom.t_max)) throw Error(ErrorKind::BadConfig, "domain requires t_min < t_max");

    std::vector<Sample> used;
    for (const auto& s : series.samples()) {
        if (dom.contains(s.t_s)) used.push_back(s);
    }
    const std::size_t m = degree + 1;
    if (used.size() < m) {
        throw Error(ErrorKind::InsufficientData, std::to_string(used.size()) + " samples in domain, degree " +
                                                     std::to_string(degree) + " needs " + std::to_string(m));
    }

    const double lo = used.front().t_s;
    const double hi = used.back().t_s;
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    if (!(half > 0.0)) throw Error(ErrorKind::DegenerateInput, "too few distinct times");

    std::vector<double> normal(m * m, 0.0);
    std::vector<double> rhs(m, 0.0);
    std::vector<double> powers(2 * m - 1);
    for (const auto& s : used) {
        const double u = (s.t_s - center) / half;
        powers[0] = 1.0;
        for (std::size_t k = 1; k < powers.size(); ++k) powers[k] = powers[k - 1] * u;
        for (std::size_t j = 0; j < m; ++j) {
            rhs[j] += powers[j] * s.x_cm;
            for (std::size_t k = 0; k < m; ++k) normal[j * m + k] += powers[j + k];
        }
    }
    if (!cholesky_solve(normal, rhs, m)) {
        throw Error(ErrorKind::DegenerateInput, "normal equations are singular (too few distinct times)");
    }

    PolyModel model;
    model.coeffs = unscale(rhs, center, half);
    model.domain = dom;

    FitStats stats;
    for (const auto& s : used) {
        const double e = horner(model.coeffs, s.t_s) - s.x_cm;
        stats.mae_cm += std::abs(e);
        stats.mse_cm2 += e * e;
    }
    stats.mae_cm /= static_cast<double>(used.size());
    stats.mse_cm2 /= static_cast<double>(used.size());
    model.fit = stats;
    return model;
}

PolyModel differentiate(const PolyModel& model) {
    PolyModel out;
    out.domain = model.domain;
    if (model.coeffs.size() <= 1) {
        out.coeffs = {0.0};
        return out;
    }
    out.coeffs.resize(model.coeffs.size() - 1);
    for (std::size_t k = 1; k < model.coeffs.size(); ++k) {
        out.coeffs[k - 1] = static_cast<double>(k) * model.coeffs[k];
    }
    return out;
}

Evaluation eval_poly(const PolyModel& model, double t) {
    return {horner(model.coeffs, t), !model.domain.contains(t)};
}

std::vector<double> roots_in(std::span<const double> coeffs, double lo, double hi) {
    const auto c = trimmed(coeffs);
    std::vector<double> roots;
    const auto keep = [&](double r) {
        if (std::isfinite(r) && r >= lo && r <= hi) roots.push_back(r);
    };

    if (c.size() == 2) {
        keep(-c[0] / c[1]);
    } else if (c.size() == 3) {
        const double a = c[2];
        const double b = c[1];
        const double disc = b * b - 4.0 * a * c[0];
        if (disc == 0.0) {
            keep(-b / (2.0 * a));
        } else if (disc > 0.0) {
            const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
            keep(q / a);
            if (q != 0.0) keep(c[0] / q);
        }
    } else if (c.size() > 3) {
        constexpr int kSteps = 4096;
        const double step = (hi - lo) / kSteps;
        double t0 = lo;
        double f0 = horner(c, t0);
        for (int i = 1; i <= kSteps; ++i) {
            const double t1 = i == kSteps ? hi : lo + step * i;
            const double f1 = horner(c, t1);
            if (f0 == 0.0) {
                keep(t0);
            } else if ((f0 < 0.0) != (f1 < 0.0) && f1 != 0.0) {
                double a = t0;
                double b = t1;
                double fa = f0;
                for (int it = 0; it < 200 && b - a > 0.0; ++it) {
                    const double mid = 0.5 * (a + b);
                    if (mid == a || mid == b) break;
                    const double fm = horner(c, mid);
                    if ((fm < 0.0) == (fa < 0.0)) {
                        a = mid;
                        fa = fm;
                    } else {
                        b = mid;
                    }
                }
                keep(0.5 * (a + b));
            }
            t0 = t1;
            f0 = f1;
        }
        if (f0 == 0.0) keep(t0);
    }

    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

std::vector<MotionSample> sample_motion(const PolyModel& model, double t_begin, double t_end, std::size_t n) {
    if (n < 2) throw Error(ErrorKind::BadConfig, "need at least 2 samples");
    if (!(t_begin < t_end)) throw Error(ErrorKind::BadConfig, "sampling range requires begin < end");
    const PolyModel velocity = differentiate(model);
    const PolyModel acceleration = differentiate(velocity);

    std::vector<MotionSample> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = k + 1 == n ? t_end
                                    : t_begin + (t_end - t_begin) * static_cast<double>(k) / static_cast<double>(n - 1);
        out[k] = {t, horner(model.coeffs, t), horner(velocity.coeffs, t), horner(acceleration.coeffs, t),
                  !model.domain.contains(t)};
    }
    return out;
}

MotionReport motion_report(const PolyModel& model, std::size_t n_samples) {
    const Domain& dom = model.domain;
    const PolyModel velocity = differentiate(model);
    const PolyModel acceleration = differentiate(velocity);

    MotionReport report;
    report.samples = sample_motion(model, dom.t_min, dom.t_max, n_samples);
    report.a_zero_crossings = roots_in(acceleration.coeffs, dom.t_min, dom.t_max);
    report.v_zero_crossings = roots_in(velocity.coeffs, dom.t_min, dom.t_max);

    std::vector<double> candidates = report.a_zero_crossings;
    if (candidates.empty()) candidates = {dom.t_min, dom.t_max};
    report.v_extremum = {candidates.front(), horner(velocity.coeffs, candidates.front())};
    for (double t : candidates) {
        const double v = horner(velocity.coeffs, t);
        if (std::abs(v) > std::abs(report.v_extremum.v_cm_s)) report.v_extremum = {t, v};
    }

    std::vector<double> breaks{dom.t_min};
    for (double r : report.a_zero_crossings) {
        if (r > breaks.back() && r < dom.t_max) breaks.push_back(r);
    }
    breaks.push_back(dom.t_max);
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const Sign s = sign_of(horner(acceleration.coeffs, 0.5 * (breaks[i] + breaks[i + 1])));
        if (!report.a_sign.empty() && report.a_sign.back().sign == s) {
            report.a_sign.back().t_end = breaks[i + 1];
        } else {
            report.a_sign.push_back({breaks[i], breaks[i + 1], s});
        }
    }
    return report;
}

}  // namespace radar
