#pragma once

#include "trajpred/geometry.hpp"

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace trajpred {

/// One time-stamped sample of a vehicle's position.
struct TracePoint {
    double t = 0.0;  // seconds
    double x = 0.0;  // meters
    double y = 0.0;  // meters
    std::optional<double> speed;  // m/s; absent when the source did not report it

    Point2 position() const { return {x, y}; }

    friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

/// Time-ordered samples of a single vehicle.
///
/// Construction validates the invariants: at least one point, finite
/// non-negative timestamps, finite coordinates, non-negative speeds and
/// strictly increasing time. A Trajectory is immutable afterwards.
class Trajectory {
public:
    Trajectory(std::string vehicle_id, std::vector<TracePoint> points);

    const std::string& vehicle_id() const noexcept { return vehicle_id_; }
    const std::vector<TracePoint>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    const TracePoint& operator[](std::size_t i) const { return points_[i]; }
    const TracePoint& front() const { return points_.front(); }
    const TracePoint& back() const { return points_.back(); }

    /// Mean spacing between consecutive timestamps; 0 for a single point.
    double mean_sampling_period() const;

    /// Index of the sample whose timestamp equals `t` within `tol`, if any.
    std::optional<std::size_t> index_at(double t, double tol = 1e-9) const;

    /// Sub-trajectory [first, last] inclusive.
    Trajectory slice(std::size_t first, std::size_t last) const;

    friend bool operator==(const Trajectory&, const Trajectory&) = default;

private:
    std::string vehicle_id_;
    std::vector<TracePoint> points_;
};

/// All trajectories of one scenario, keyed (and therefore ordered) by vehicle id.
struct TraceSet {
    std::string scenario_name;
    std::map<std::string, Trajectory> trajectories;

    void add(Trajectory traj);

    friend bool operator==(const TraceSet&, const TraceSet&) = default;
};

/// Value-level equality with an absolute tolerance on every numeric field.
bool approx_equal(const TraceSet& a, const TraceSet& b, double tol = 1e-9);

/// Parses `vehicle_id,t,x,y[,speed]` rows. The header line is optional; an
/// empty speed field means "absent". Throws ParseError on malformed rows and
/// ValidationError on duplicate (vehicle_id, t) pairs.
TraceSet parse_csv(std::istream& in, std::string scenario_name = {});
TraceSet parse_csv(std::string_view text, std::string scenario_name = {});

/// Parses the SUMO floating-car-data subset: `<timestep time=..>` elements
/// holding `<vehicle id=.. x=.. y=.. [speed=..]/>` children.
TraceSet parse_fcd_xml(std::istream& in, std::string scenario_name = {});
TraceSet parse_fcd_xml(std::string_view text, std::string scenario_name = {});

/// Deterministic CSV: vehicles by id, points by time, shortest round-trip decimals.
std::string emit_csv(const TraceSet& traces);
void emit_csv(const TraceSet& traces, std::ostream& out);

/// FCD XML with one `<timestep>` per distinct timestamp.
std::string emit_fcd_xml(const TraceSet& traces);

/// Fills in absent speeds by backward finite difference. Existing speeds are
/// kept; a first point without speed takes the second point's speed.
Trajectory derive_speeds(const Trajectory& traj);

/// Shortest decimal string that parses back to the same double.
std::string format_number(double value);

}  // namespace trajpred
