#include "trajpred/interp.hpp"

#include "trajpred/error.hpp"

#include <cmath>

namespace trajpred::interp {

namespace {

constexpr double kMinSpan = 1e-6;

void require_spread(const std::array<double, 3>& t) {
    if (t[2] - t[0] < kMinSpan) {
        throw DegenerateError("clustered timestamps: t2 - t0 < 1e-6 s");
    }
}

}  // namespace

Sample3::Sample3(std::array<double, 3> times, std::array<double, 3> values) : times_(times), values_(values) {
    for (int i = 0; i < 3; ++i) {
        if (!std::isfinite(times_[i]) || !std::isfinite(values_[i])) {
            throw ValidationError("Sample3 requires finite times and values");
        }
    }
    if (!(times_[0] < times_[1] && times_[1] < times_[2])) {
        throw ValidationError("Sample3 requires t0 < t1 < t2");
    }
}

void HorizonRule::validate() const {
    if (!(discovery_period >= 0.0) || !std::isfinite(discovery_period)) {
        throw ValidationError("discovery period must be non-negative");
    }
    if (kind == Kind::fixed_offset && !(offset > 0.0 && std::isfinite(offset))) {
        throw ValidationError("fixed horizon offset must be positive");
    }
}

double horizon_time(const std::array<double, 3>& times, const HorizonRule& rule) {
    switch (rule.kind) {
        case HorizonRule::Kind::mean_time_lead:
            return times[2] + (times[0] + times[1] + times[2]) / 3.0 + rule.discovery_period;
        case HorizonRule::Kind::fixed_offset:
            return times[2] + rule.offset;
    }
    return times[2];
}

double horizon_time(const Sample3& s, const HorizonRule& rule) { return horizon_time(s.times(), rule); }

double lagrange_eval(const Sample3& s, double t) {
    if (!std::isfinite(t)) throw ValidationError("lagrange_eval: non-finite query time");
    const auto& tt = s.times();
    const auto& p = s.values();
    require_spread(tt);

    for (int i = 0; i < 3; ++i) {
        if (t == tt[i]) return p[i];
    }
    // Barycentric weights w_j = 1 / prod_{k != j} (t_j - t_k).
    const double w0 = 1.0 / ((tt[0] - tt[1]) * (tt[0] - tt[2]));
    const double w1 = 1.0 / ((tt[1] - tt[0]) * (tt[1] - tt[2]));
    const double w2 = 1.0 / ((tt[2] - tt[0]) * (tt[2] - tt[1]));
    const double d0 = t - tt[0];
    const double d1 = t - tt[1];
    const double d2 = t - tt[2];
    // l(t) * sum_j w_j P_j / (t - t_j), expanded so no division by (t - t_j) is needed.
    return w0 * p[0] * d1 * d2 + w1 * p[1] * d0 * d2 + w2 * p[2] * d0 * d1;
}

DividedDifferences divided_differences(const Sample3& s) {
    const auto& t = s.times();
    const auto& p = s.values();
    require_spread(t);
    DividedDifferences dd;
    dd.first_lower = (p[1] - p[0]) / (t[1] - t[0]);
    dd.first_upper = (p[2] - p[1]) / (t[2] - t[1]);
    dd.second = (dd.first_upper - dd.first_lower) / (t[2] - t[0]);
    return dd;
}

double newton_correction(const Sample3& s, double t_pt) {
    const auto& t = s.times();
    return (t_pt - t[0]) * (t_pt - t[1]) * divided_differences(s).second;
}

double newton_predict(const Sample3& s, double prev_pred, const HorizonRule& rule) {
    if (!std::isfinite(prev_pred)) throw ValidationError("newton_predict: previous prediction must be finite");
    return prev_pred + newton_correction(s, horizon_time(s, rule));
}

PolyPrediction predict_position_poly(const Trajectory& traj, std::size_t at_index, PolyMethod method,
                                     const HorizonRule& rule, std::optional<Point2> prev_pred) {
    if (at_index < 2 || at_index >= traj.size()) {
        throw InsufficientHistoryError(3, std::min(at_index + 1, traj.size()));
    }
    const auto& a = traj[at_index - 2];
    const auto& b = traj[at_index - 1];
    const auto& c = traj[at_index];
    const std::array<double, 3> times{a.t, b.t, c.t};
    const Sample3 xs(times, {a.x, b.x, c.x});
    const Sample3 ys(times, {a.y, b.y, c.y});
    const double t_pred = horizon_time(times, rule);

    PolyPrediction out;
    out.t_pred = t_pred;
    if (method == PolyMethod::lagrange) {
        out.position = {lagrange_eval(xs, t_pred), lagrange_eval(ys, t_pred)};
        return out;
    }
    const Point2 anchor = prev_pred ? *prev_pred : Point2{lagrange_eval(xs, t_pred), lagrange_eval(ys, t_pred)};
    out.position = {newton_predict(xs, anchor.x, rule), newton_predict(ys, anchor.y, rule)};
    return out;
}

}  // namespace trajpred::interp
