#pragma once

#include "trajpred/geometry.hpp"
#include "trajpred/predictor.hpp"
#include "trajpred/trace.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace trajpred::link {

enum class LinkState { up, down };

std::string_view to_string(LinkState state);

/// Unit-disk link model: up iff the distance is at most `range` (the
/// boundary counts as up). Compared on squared distances.
LinkState link_state(Point2 a, Point2 b, double range);

struct LinkForecast {
    std::string veh_a;
    std::string veh_b;
    double t_pred = 0.0;              // first horizon
    double predicted_distance = 0.0;  // at t_pred
    double range = 0.0;
    LinkState state = LinkState::up;  // at t_pred
    std::optional<double> break_eta;  // first rollout horizon at which the link is down
};

/// Forecasts the link between two vehicles from their history up to
/// `at_time`, rolling the predictor forward `lookahead_steps` times.
///
/// Each trajectory must have a sample within half its sampling period of
/// `at_time` (AlignmentError otherwise) and enough history before it for the
/// predictor (InsufficientHistoryError otherwise).
LinkForecast forecast_pair(const Trajectory& a, const Trajectory& b, double at_time, PredictorKind predictor,
                           const PredictorConfig& config, double range, std::size_t lookahead_steps);

}  // namespace trajpred::link
