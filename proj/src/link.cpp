#include "trajpred/link.hpp"

#include "trajpred/error.hpp"

#include <algorithm>
#include <cmath>

namespace trajpred::link {

namespace {

std::size_t aligned_index(const Trajectory& traj, double at_time) {
    const double tol = traj.size() > 1 ? 0.5 * traj.mean_sampling_period() : 1e-9;
    const auto& pts = traj.points();
    auto it = std::lower_bound(pts.begin(), pts.end(), at_time,
                               [](const TracePoint& p, double t) { return p.t < t; });
    std::optional<std::size_t> best;
    double best_gap = tol;
    for (auto cand : {it, it == pts.begin() ? pts.end() : std::prev(it)}) {
        if (cand == pts.end()) continue;
        const double gap = std::abs(cand->t - at_time);
        if (gap <= best_gap) {
            best_gap = gap;
            best = static_cast<std::size_t>(cand - pts.begin());
        }
    }
    if (!best) {
        throw AlignmentError("vehicle " + traj.vehicle_id() + " has no sample within half a period of t=" +
                             format_number(at_time));
    }
    return *best;
}

}  // namespace

std::string_view to_string(LinkState state) { return state == LinkState::up ? "up" : "down"; }

LinkState link_state(Point2 a, Point2 b, double range) {
    if (!(range > 0.0)) throw ValidationError("transmission range must be positive");
    return squared_distance(a, b) <= range * range ? LinkState::up : LinkState::down;
}

LinkForecast forecast_pair(const Trajectory& a, const Trajectory& b, double at_time, PredictorKind predictor,
                           const PredictorConfig& config, double range, std::size_t lookahead_steps) {
    if (!(range > 0.0)) throw ValidationError("transmission range must be positive");
    if (lookahead_steps == 0) throw ValidationError("lookahead must be at least one step");

    const std::size_t ia = aligned_index(a, at_time);
    const std::size_t ib = aligned_index(b, at_time);
    const auto path_a = rollout(a, ia, predictor, config, lookahead_steps);
    const auto path_b = rollout(b, ib, predictor, config, lookahead_steps);

    LinkForecast out;
    out.veh_a = a.vehicle_id();
    out.veh_b = b.vehicle_id();
    out.range = range;
    for (std::size_t s = 0; s < lookahead_steps; ++s) {
        const double t = std::max(path_a[s].t_pred, path_b[s].t_pred);
        const LinkState state = link_state(path_a[s].position, path_b[s].position, range);
        if (s == 0) {
            out.t_pred = t;
            out.predicted_distance = distance(path_a[s].position, path_b[s].position);
            out.state = state;
        }
        if (state == LinkState::down) {
            out.break_eta = t;
            break;
        }
    }
    return out;
}

}  // namespace trajpred::link
