#pragma once

#include "trajpred/geometry.hpp"
#include "trajpred/predictor.hpp"
#include "trajpred/trace.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace trajpred::metrics {

struct TimedPoint {
    double t = 0.0;
    Point2 position;
};

/// Per-instant Euclidean distance between real and predicted positions.
struct DeviationSeries {
    std::vector<double> times;
    std::vector<double> dist;
};

/// Matches every prediction to the real sample at the same timestamp (1e-9 s)
/// and returns the distances. Throws AlignmentError listing the unmatched times.
DeviationSeries deviation(const Trajectory& real, std::span<const TimedPoint> predicted);

enum class Metric { mse, mae, rmse, mape };

std::string_view to_string(Metric metric);

inline constexpr Metric kAllMetrics[] = {Metric::mse, Metric::mae, Metric::rmse, Metric::mape};

struct ErrorMetrics {
    double mse = 0.0;
    double mae = 0.0;
    double rmse = 0.0;
    std::optional<double> mape;  // absent when every instant was excluded
    std::size_t n = 0;
    std::size_t mape_excluded = 0;  // instants with |P_i| < 1e-6 m

    std::optional<double> get(Metric metric) const;
};

/// The residual of each instant is the Euclidean deviation d_i between the
/// real and predicted points: MSE = mean(d^2), MAE = mean(d), RMSE = sqrt(MSE),
/// MAPE = 100 * mean(d_i / |P_i|) over instants with |P_i| >= 1e-6 m.
/// Throws ValidationError on empty or unequal inputs.
ErrorMetrics error_metrics(std::span<const Point2> real, std::span<const Point2> predicted);

/// How build_report walks each trajectory.
struct EvaluationPolicy {
    /// All predictors start at the first instant where every selected predictor has enough history.
    bool common_start = true;
    /// Compare off-grid horizons against the linearly interpolated real trace.
    /// When false such instants are skipped.
    bool interpolate_off_grid = true;
};

struct DeviationRecord {
    std::string vehicle_id;
    double t = 0.0;
    PredictorKind predictor = PredictorKind::lr;
    double dist = 0.0;
    bool interpolated = false;
};

struct PredictorSummary {
    PredictorKind predictor = PredictorKind::lr;
    std::optional<ErrorMetrics> metrics;  // absent when nothing could be evaluated
    std::size_t evaluated = 0;
    std::size_t failed = 0;        // predictor errors, excluded from aggregation
    std::size_t nonconverged = 0;  // subset of `failed` caused by solver convergence
    std::size_t interpolated = 0;  // compared against an interpolated real position
    std::vector<std::string> failures;
};

struct EvalReport {
    std::string scenario;
    std::vector<PredictorSummary> predictors;  // LR, SVR, Lagrange, Newton order
    std::vector<std::pair<std::string, std::string>> config_echo;
    std::vector<DeviationRecord> deviations;  // vehicle id, then t, then predictor

    const PredictorSummary* find(PredictorKind kind) const;
};

/// Rolls a one-step-ahead prediction along every trajectory for every
/// selected predictor and aggregates the deviations per predictor, folding
/// vehicles in id order. MAPE norms are taken relative to the lower-left
/// corner of the scenario's bounding box.
EvalReport build_report(const TraceSet& traces, std::span<const PredictorKind> predictors,
                        const PredictorConfig& config, const EvaluationPolicy& policy = {});

/// `scenario,predictor,metric,value,n,excluded` rows preceded by `#` comment
/// lines carrying the configuration echo and interpolation notes.
void write_report_csv(std::ostream& out, std::span<const EvalReport> reports);

/// `vehicle_id,t,predictor,dist` rows.
void write_deviation_csv(std::ostream& out, const EvalReport& report);

/// Aligned text table: one row per scenario (City, Road, Intersection first),
/// one column group per metric, one column per predictor.
std::string format_table(std::span<const EvalReport> reports);

}  // namespace trajpred::metrics
