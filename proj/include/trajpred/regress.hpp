#pragma once

#include "trajpred/interp.hpp"
#include "trajpred/trace.hpp"

#include <cstddef>
#include <span>

namespace trajpred::regress {

/// Ordinary least-squares line value = slope * t + intercept.
struct LinearFit {
    double slope = 0.0;      // units per second
    double intercept = 0.0;  // value at t = 0
    double first_t = 0.0;
    double last_t = 0.0;
    std::size_t n = 0;
    double mean_t = 0.0;      // centering point of the fit
    double mean_value = 0.0;  // fitted value at mean_t

    /// Evaluated around the window mean rather than from the intercept.
    double evaluate(double t) const { return mean_value + slope * (t - mean_t); }
};

/// Closed-form OLS on centered times. Throws ValidationError on length
/// mismatch, n < 2 or non-increasing times and DegenerateError when var(t) = 0.
LinearFit fit_ols(std::span<const double> times, std::span<const double> values);

/// Sum of squared residuals of `slope * t + intercept` over the data.
double sse(std::span<const double> times, std::span<const double> values, double slope, double intercept);

struct LrPrediction {
    double t_pred = 0.0;
    Point2 position;
};

/// Fits x(t) and y(t) over the window_k points ending at at_index and evaluates
/// both at the horizon computed from the window's last three timestamps.
LrPrediction lr_predict_position(const Trajectory& traj, std::size_t at_index, std::size_t window_k,
                                 const interp::HorizonRule& rule);

}  // namespace trajpred::regress
