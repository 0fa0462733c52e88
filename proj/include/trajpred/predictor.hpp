#pragma once

#include "trajpred/geometry.hpp"
#include "trajpred/interp.hpp"
#include "trajpred/regime.hpp"
#include "trajpred/trace.hpp"

#include <array>
#include <iosfwd>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace trajpred {

/// The four predictor families. The enumerator order is the report column
/// order: LR, SVR, Lagrange, then Newton.
enum class PredictorKind { lr, svr, lagrange, newton };

inline constexpr std::array<PredictorKind, 4> kAllPredictors{PredictorKind::lr, PredictorKind::svr,
                                                             PredictorKind::lagrange, PredictorKind::newton};

/// Lower-case identifier used on the command line and in CSV output.
std::string_view to_string(PredictorKind kind);
/// Display label used in report tables.
std::string_view display_name(PredictorKind kind);
std::optional<PredictorKind> parse_predictor(std::string_view text);

struct PredictorConfig {
    std::size_t window_k = 5;  // LR and SVR history; Lagrange/Newton always use 3
    interp::HorizonRule horizon = interp::HorizonRule::fixed(1.0);
    svr::RegimeParams regime_params = svr::RegimeParams::defaults();
    svr::RegimeThresholds thresholds;

    /// Points of history needed at the prediction instant.
    std::size_t required_history(PredictorKind kind) const;

    void validate() const;
};

struct Prediction {
    double t_pred = 0.0;
    Point2 position;
    std::optional<svr::RegimeLabel> regime;  // SVR only
};

/// One application of the single-step predictor at `at_index`. For Newton,
/// `newton_prev` is the previous Newton prediction of the same vehicle.
Prediction predict_next(const Trajectory& traj, std::size_t at_index, PredictorKind kind,
                        const PredictorConfig& config, std::optional<Point2> newton_prev = std::nullopt);

/// Recursive rollout: step 1 uses the trajectory up to `at_index`; each later
/// step appends the previous prediction to the history and predicts again.
std::vector<Prediction> rollout(const Trajectory& traj, std::size_t at_index, PredictorKind kind,
                                const PredictorConfig& config, std::size_t steps);

/// Reads `key = value` lines (`#` starts a comment) over `base`.
/// Known keys: window.k, horizon.kind (fixed|mean-lead), horizon.offset,
/// horizon.discovery_period, svrN.{c,epsilon,gamma,tolerance,max_passes}
/// for N in 1..4, regime.{high_speed,low_speed,stop_speed,slope_eps}.
/// Unknown keys and malformed values throw ParseError.
PredictorConfig load_config(std::istream& in, PredictorConfig base = {});
PredictorConfig load_config_file(const std::string& path, PredictorConfig base = {});

/// Every tunable as (key, value) in a fixed order, using the load_config keys.
std::vector<std::pair<std::string, std::string>> config_echo(const PredictorConfig& config);

}  // namespace trajpred
