#pragma once

#include "trajpred/geometry.hpp"
#include "trajpred/trace.hpp"

#include <array>
#include <cstddef>
#include <optional>

namespace trajpred::interp {

/// Three samples of a scalar series at strictly increasing times.
class Sample3 {
public:
    /// Throws ValidationError unless t0 < t1 < t2 and everything is finite.
    Sample3(std::array<double, 3> times, std::array<double, 3> values);

    const std::array<double, 3>& times() const noexcept { return times_; }
    const std::array<double, 3>& values() const noexcept { return values_; }

private:
    std::array<double, 3> times_;
    std::array<double, 3> values_;
};

/// How far past the newest sample a prediction is made.
struct HorizonRule {
    enum class Kind {
        /// t = t2 + (t0 + t1 + t2) / 3 + discovery_period. Note that this adds
        /// the mean of the absolute times, so the lead grows with t.
        mean_time_lead,
        /// t = t2 + offset.
        fixed_offset,
    };

    Kind kind = Kind::fixed_offset;
    double discovery_period = 0.0;
    double offset = 1.0;

    static HorizonRule mean_lead(double discovery_period) { return {Kind::mean_time_lead, discovery_period, 0.0}; }
    static HorizonRule fixed(double offset) { return {Kind::fixed_offset, 0.0, offset}; }

    void validate() const;
};

/// Horizon computed from three timestamps (only their order matters to the caller).
double horizon_time(const std::array<double, 3>& times, const HorizonRule& rule);
double horizon_time(const Sample3& s, const HorizonRule& rule);

/// Value at t of the unique polynomial of degree <= 2 through the samples.
/// Evaluated in the first barycentric form; returns P_i exactly at t = t_i.
/// Throws DegenerateError when t2 - t0 < 1e-6 s.
double lagrange_eval(const Sample3& s, double t);

/// First and second divided differences f[t1,t2], f[t2,t3], f[t1,t2,t3].
struct DividedDifferences {
    double first_lower = 0.0;
    double first_upper = 0.0;
    double second = 0.0;
};

DividedDifferences divided_differences(const Sample3& s);

/// Newton correction (t_PT - t1)(t_PT - t2) f[t1,t2,t3] for the three
/// samples indexed t1, t2, t3.
double newton_correction(const Sample3& s, double t_pt);

/// P(t_PT) = P' + (t_PT - t1)(t_PT - t2) f[t1,t2,t3], with P' the previous
/// prediction and t_PT = horizon_time(s, rule).
double newton_predict(const Sample3& s, double prev_pred, const HorizonRule& rule);

enum class PolyMethod { lagrange, newton };

struct PolyPrediction {
    double t_pred = 0.0;
    Point2 position;
};

/// Applies the scalar predictor to x and y over samples at_index-2..at_index.
/// For Newton, `prev_pred` is the previous prediction; when absent it is
/// bootstrapped with the Lagrange value at the same horizon.
PolyPrediction predict_position_poly(const Trajectory& traj, std::size_t at_index, PolyMethod method,
                                     const HorizonRule& rule, std::optional<Point2> prev_pred = std::nullopt);

}  // namespace trajpred::interp
