#pragma once

#include "trajpred/interp.hpp"
#include "trajpred/svr.hpp"
#include "trajpred/trace.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace trajpred::svr {

/// Speed-profile class that selects an SVR hyperparameter set.
enum class RegimeLabel {
    svr1,  // high, constant speed
    svr2,  // slows down then speeds up again (turn)
    svr3,  // low speed decaying to a stop, or standing still
    svr4,  // pulling away from a stop
};

std::string_view to_string(RegimeLabel label);
std::optional<RegimeLabel> parse_regime(std::string_view text);

struct RegimeThresholds {
    double high_speed = 20.0;  // m/s
    double low_speed = 5.0;    // m/s
    double stop_speed = 0.5;   // m/s
    double slope_eps = 0.2;    // m/s^2

    /// Requires 0 <= stop < low < high and slope_eps > 0.
    void validate() const;
};

/// One SvrParams per regime, indexed by RegimeLabel.
struct RegimeParams {
    std::array<SvrParams, 4> by_label;

    const SvrParams& operator[](RegimeLabel label) const { return by_label[static_cast<std::size_t>(label)]; }
    SvrParams& operator[](RegimeLabel label) { return by_label[static_cast<std::size_t>(label)]; }

    /// SVR1 (C=100, eps=0.01, gamma=0.1), SVR2 (C=100, eps=0.01, gamma=1),
    /// SVR3 and SVR4 (C=10, eps=0.05, gamma=1).
    static RegimeParams defaults();
};

/// Decision tree over a window of speeds sampled `dt` seconds apart.
///
/// With m the OLS slope, v_mean the mean, v_first/v_last the end values, the
/// first matching rule wins:
///   1. v_mean >= high and |m| <= slope_eps                 -> SVR1
///   2. v_last <= stop and m < -slope_eps                   -> SVR3
///   3. v_first <= stop and m > +slope_eps                  -> SVR4
///   4. every speed <= stop (standing)                      -> SVR3
///   5. interior minimum below both ends by slope_eps * dt  -> SVR2
///   otherwise                                              -> SVR1
///
/// Throws ValidationError for windows shorter than 3.
RegimeLabel classify_regime(std::span<const double> speed_window, const RegimeThresholds& thresholds,
                            double dt = 1.0);

struct SvrPrediction {
    double t_pred = 0.0;
    Point2 position;
    RegimeLabel regime = RegimeLabel::svr1;
};

/// Classifies the window of window_k points ending at at_index, trains one
/// model per coordinate with that regime's parameters, and predicts both at
/// the horizon built from the window's last three timestamps. Missing speeds
/// are derived from positions.
SvrPrediction svr_predict_position(const Trajectory& traj, std::size_t at_index, std::size_t window_k,
                                   const RegimeParams& regime_params, const RegimeThresholds& thresholds,
                                   const interp::HorizonRule& rule);

}  // namespace trajpred::svr
