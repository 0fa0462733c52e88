#include "trajpred/regress.hpp"

#include "trajpred/error.hpp"

#include <cmath>
#include <vector>

namespace trajpred::regress {

LinearFit fit_ols(std::span<const double> times, std::span<const double> values) {
    if (times.size() != values.size()) throw ValidationError("fit_ols: times and values differ in length");
    const std::size_t n = times.size();
    if (n < 2) throw ValidationError("fit_ols: need at least 2 samples");
    for (std::size_t i = 1; i < n; ++i) {
        if (!(times[i] >= times[i - 1])) throw ValidationError("fit_ols: times must be non-decreasing");
    }

    double mean_t = 0.0;
    double mean_v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_t += times[i];
        mean_v += values[i];
    }
    mean_t /= static_cast<double>(n);
    mean_v /= static_cast<double>(n);

    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = times[i] - mean_t;
        sxx += dt * dt;
        sxy += dt * (values[i] - mean_v);
    }
    if (sxx == 0.0) throw DegenerateError("fit_ols: all times equal");

    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.mean_t = mean_t;
    fit.mean_value = mean_v;
    fit.intercept = mean_v - fit.slope * mean_t;
    fit.first_t = times.front();
    fit.last_t = times.back();
    fit.n = n;
    return fit;
}

double sse(std::span<const double> times, std::span<const double> values, double slope, double intercept) {
    double total = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double r = values[i] - (slope * times[i] + intercept);
        total += r * r;
    }
    return total;
}

LrPrediction lr_predict_position(const Trajectory& traj, std::size_t at_index, std::size_t window_k,
                                 const interp::HorizonRule& rule) {
    if (window_k < 2) throw ValidationError("LR window must hold at least 2 points");
    if (at_index >= traj.size() || at_index + 1 < window_k) {
        throw InsufficientHistoryError(window_k, std::min(at_index + 1, traj.size()));
    }
    const std::size_t first = at_index + 1 - window_k;
    std::vector<double> t(window_k), x(window_k), y(window_k);
    for (std::size_t i = 0; i < window_k; ++i) {
        const auto& p = traj[first + i];
        t[i] = p.t;
        x[i] = p.x;
        y[i] = p.y;
    }
    // With a two-point window the oldest timestamp is repeated; only the mean-lead rule reads it.
    const std::array<double, 3> last3{t[window_k >= 3 ? window_k - 3 : 0], t[window_k - 2], t[window_k - 1]};
    const double t_pred = interp::horizon_time(last3, rule);
    const LinearFit fx = fit_ols(t, x);
    const LinearFit fy = fit_ols(t, y);
    return {t_pred, {fx.evaluate(t_pred), fy.evaluate(t_pred)}};
}

}  // namespace trajpred::regress
