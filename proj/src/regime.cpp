#include "trajpred/regime.hpp"

#include "trajpred/error.hpp"
#include "trajpred/regress.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace trajpred::svr {

std::string_view to_string(RegimeLabel label) {
    switch (label) {
        case RegimeLabel::svr1: return "SVR1";
        case RegimeLabel::svr2: return "SVR2";
        case RegimeLabel::svr3: return "SVR3";
        case RegimeLabel::svr4: return "SVR4";
    }
    return "?";
}

std::optional<RegimeLabel> parse_regime(std::string_view text) {
    if (text == "SVR1" || text == "svr1") return RegimeLabel::svr1;
    if (text == "SVR2" || text == "svr2") return RegimeLabel::svr2;
    if (text == "SVR3" || text == "svr3") return RegimeLabel::svr3;
    if (text == "SVR4" || text == "svr4") return RegimeLabel::svr4;
    return std::nullopt;
}

void RegimeThresholds::validate() const {
    if (!(stop_speed >= 0.0 && stop_speed < low_speed && low_speed < high_speed)) {
        throw ValidationError("regime thresholds must satisfy 0 <= stop < low < high");
    }
    if (!(slope_eps > 0.0)) throw ValidationError("regime slope_eps must be positive");
}

RegimeParams RegimeParams::defaults() {
    RegimeParams p;
    p[RegimeLabel::svr1] = SvrParams{100.0, 0.01, 0.1};
    p[RegimeLabel::svr2] = SvrParams{100.0, 0.01, 1.0};
    p[RegimeLabel::svr3] = SvrParams{10.0, 0.05, 1.0};
    p[RegimeLabel::svr4] = SvrParams{10.0, 0.05, 1.0};
    return p;
}

RegimeLabel classify_regime(std::span<const double> speeds, const RegimeThresholds& th, double dt) {
    const std::size_t n = speeds.size();
    if (n < 3) throw ValidationError("regime window needs at least 3 speeds");

    std::vector<double> t(n);
    std::iota(t.begin(), t.end(), 0.0);
    for (auto& v : t) v *= dt;
    const double slope = regress::fit_ols(t, speeds).slope;
    const double mean = std::accumulate(speeds.begin(), speeds.end(), 0.0) / static_cast<double>(n);
    const double first = speeds.front();
    const double last = speeds.back();

    if (mean >= th.high_speed && std::abs(slope) <= th.slope_eps) return RegimeLabel::svr1;
    if (last <= th.stop_speed && slope < -th.slope_eps) return RegimeLabel::svr3;
    if (first <= th.stop_speed && slope > th.slope_eps) return RegimeLabel::svr4;
    if (*std::max_element(speeds.begin(), speeds.end()) <= th.stop_speed) return RegimeLabel::svr3;

    const double interior_min = *std::min_element(speeds.begin() + 1, speeds.end() - 1);
    const double margin = th.slope_eps * dt;
    if (interior_min < first - margin && interior_min < last - margin) return RegimeLabel::svr2;
    return RegimeLabel::svr1;
}

SvrPrediction svr_predict_position(const Trajectory& traj, std::size_t at_index, std::size_t window_k,
                                   const RegimeParams& regime_params, const RegimeThresholds& thresholds,
                                   const interp::HorizonRule& rule) {
    if (window_k < 3) throw ValidationError("SVR window must hold at least 3 points");
    if (at_index >= traj.size() || at_index + 1 < window_k) {
        throw InsufficientHistoryError(window_k, std::min(at_index + 1, traj.size()));
    }
    const std::size_t first = at_index + 1 - window_k;
    // One extra leading point, when available, gives the window's first speed a backward difference.
    const std::size_t lead = first > 0 ? 1 : 0;
    const Trajectory window = derive_speeds(traj.slice(first - lead, at_index));

    std::vector<double> t(window_k), x(window_k), y(window_k), v(window_k);
    for (std::size_t i = 0; i < window_k; ++i) {
        const auto& p = window[i + lead];
        t[i] = p.t;
        x[i] = p.x;
        y[i] = p.y;
        v[i] = *p.speed;
    }

    SvrPrediction out;
    out.regime = classify_regime(v, thresholds, (t.back() - t.front()) / static_cast<double>(window_k - 1));
    const SvrParams& params = regime_params[out.regime];
    out.t_pred = interp::horizon_time({t[window_k - 3], t[window_k - 2], t[window_k - 1]}, rule);
    const SvrModel mx = svr_train(t, x, params);
    const SvrModel my = svr_train(t, y, params);
    out.position = {svr_predict(mx, out.t_pred), svr_predict(my, out.t_pred)};
    return out;
}

}  // namespace trajpred::svr
