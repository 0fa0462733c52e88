#pragma once

#include "trajpred/geometry.hpp"
#include "trajpred/trace.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace trajpred::synth {

enum class ScenarioKind { straight_highway, intersection_turn, city_stop_and_go };

/// Short scenario name used in file names and report rows: road, intersection, city.
std::string_view scenario_name(ScenarioKind kind);

/// Accepts the short names plus the enum spellings (e.g. "road" or "straight_highway").
std::optional<ScenarioKind> parse_scenario_kind(std::string_view text);

struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::straight_highway;
    double duration = 60.0;    // seconds
    double dt = 1.0;           // sampling period, seconds
    std::uint64_t seed = 7;
    double noise_sigma = 0.0;  // meters, std-dev of isotropic positional jitter
    int vehicles = 3;

    /// Throws ValidationError unless dt > 0, duration >= dt, noise_sigma >= 0, vehicles >= 1.
    void validate() const;
};

/// Noise-free state of a vehicle at time t.
struct Kinematics {
    Point2 position;
    double speed = 0.0;
};

using PathFunction = std::function<Kinematics(double t)>;

struct SynthResult {
    TraceSet traces;
    /// Analytic ground truth per vehicle id. With noise_sigma = 0 every trace
    /// point lies exactly on its path.
    std::map<std::string, PathFunction> paths;
};

/// Deterministic scenario generator.
///
///  - straight_highway: constant speeds of 30, 32, 34, ... m/s along +x,
///    one lane (3.5 m) per vehicle. Vehicles start 40 m apart, the faster
///    ones ahead.
///  - intersection_turn: cruise at 22 m/s, brake at 2 m/s^2 to 6 m/s reached
///    at the midpoint of a 20 m radius left turn, accelerate back to 22 m/s.
///    Vehicle i runs the same profile delayed by 4 i seconds.
///  - city_stop_and_go: staircase route; each leg is cruise, brake to a full
///    stop, 4 s standstill, accelerate. Cruise speeds cycle 8, 11, 14 m/s.
///
/// Noise: one std::mt19937_64 stream seeded with `seed`; each sample draws two
/// standard normals by Box-Muller from 53-bit uniforms (x jitter then y jitter),
/// visiting vehicles in id order and samples in time order. Speeds are left
/// at their analytic values.
SynthResult generate(const ScenarioSpec& spec);

/// Samples `path` on t0, t0 + dt, ..., up to t0 + duration.
Trajectory sample_path(const std::string& vehicle_id, const PathFunction& path, double t0, double duration,
                       double dt);

}  // namespace trajpred::synth
