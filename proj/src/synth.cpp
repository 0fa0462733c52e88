#include "trajpred/synth.hpp"

#include "trajpred/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace trajpred::synth {

namespace {

constexpr double kPi = std::numbers::pi;

std::string vehicle_name(int index) {
    std::string digits = std::to_string(index);
    if (digits.size() < 2) digits.insert(0, 2 - digits.size(), '0');
    return "veh" + digits;
}

// --- road ---------------------------------------------------------------------

constexpr double kLaneWidth = 3.5;

PathFunction road_path(int index) {
    const double speed = 30.0 + 2.0 * index;
    const double start = 40.0 * index;
    const double lane = kLaneWidth * index;
    return [speed, start, lane](double t) { return Kinematics{{start + speed * t, lane}, speed}; };
}

// --- intersection ---------------------------------------------------------------

constexpr double kTurnCruise = 22.0;
constexpr double kTurnMin = 6.0;
constexpr double kTurnAccel = 2.0;
constexpr double kTurnBrakeAt = 10.0;
constexpr double kTurnRadius = 20.0;
constexpr double kTurnPhase = (kTurnCruise - kTurnMin) / kTurnAccel;  // braking duration

// Arc length and speed of the reference profile at time tau.
std::pair<double, double> turn_profile(double tau) {
    if (tau <= kTurnBrakeAt) return {kTurnCruise * tau, kTurnCruise};
    const double s_brake = kTurnCruise * kTurnBrakeAt;
    double u = tau - kTurnBrakeAt;
    if (u <= kTurnPhase) {
        return {s_brake + kTurnCruise * u - 0.5 * kTurnAccel * u * u, kTurnCruise - kTurnAccel * u};
    }
    const double s_min = s_brake + 0.5 * (kTurnCruise + kTurnMin) * kTurnPhase;
    u -= kTurnPhase;
    if (u <= kTurnPhase) return {s_min + kTurnMin * u + 0.5 * kTurnAccel * u * u, kTurnMin + kTurnAccel * u};
    const double s_exit = s_min + 0.5 * (kTurnCruise + kTurnMin) * kTurnPhase;
    u -= kTurnPhase;
    return {s_exit + kTurnCruise * u, kTurnCruise};
}

Point2 turn_position(double s) {
    // The slowest point of the profile sits at the arc midpoint.
    const double s_mid = kTurnCruise * kTurnBrakeAt + 0.5 * (kTurnCruise + kTurnMin) * kTurnPhase;
    const double arc_len = 0.5 * kPi * kTurnRadius;
    const double arc_start = s_mid - 0.5 * arc_len;
    if (s <= arc_start) return {s, 0.0};
    const double u = s - arc_start;
    if (u <= arc_len) {
        const double phi = u / kTurnRadius;
        return {arc_start + kTurnRadius * std::sin(phi), kTurnRadius * (1.0 - std::cos(phi))};
    }
    return {arc_start + kTurnRadius, kTurnRadius + (u - arc_len)};
}

PathFunction intersection_path(int index) {
    const double delay = 4.0 * index;
    return [delay](double t) {
        const auto [s, v] = turn_profile(t - delay);
        return Kinematics{turn_position(s), v};
    };
}

// --- city -----------------------------------------------------------------------

constexpr double kCityAccel = 2.0;
constexpr double kCityCruiseTime = 6.0;
constexpr double kCityStopTime = 4.0;

PathFunction city_path(int index) {
    const double v = 8.0 + 3.0 * (index % 3);
    const Point2 origin{0.0, 50.0 * index};
    return [v, origin](double t) {
        const double ramp = v / kCityAccel;
        const double leg_time = ramp + kCityCruiseTime + ramp + kCityStopTime;
        const double ramp_len = 0.5 * v * ramp;
        const double leg_len = 2.0 * ramp_len + v * kCityCruiseTime;

        // Legs alternate +x, +y. Time zero is the start of leg 0's cruise phase.
        const double tau = t + ramp;
        const double k = std::floor(tau / leg_time);
        const double u = tau - k * leg_time;
        const double legs_x = std::ceil(k / 2.0);   // completed +x legs
        const double legs_y = std::floor(k / 2.0);  // completed +y legs
        Point2 start{origin.x - ramp_len + legs_x * leg_len, origin.y + legs_y * leg_len};

        double along = 0.0;
        double speed = 0.0;
        if (u <= ramp) {
            along = 0.5 * kCityAccel * u * u;
            speed = kCityAccel * u;
        } else if (u <= ramp + kCityCruiseTime) {
            along = ramp_len + v * (u - ramp);
            speed = v;
        } else if (u <= 2.0 * ramp + kCityCruiseTime) {
            const double w = u - ramp - kCityCruiseTime;
            along = ramp_len + v * kCityCruiseTime + v * w - 0.5 * kCityAccel * w * w;
            speed = std::max(0.0, v - kCityAccel * w);
        } else {
            along = leg_len;
        }
        const bool along_x = static_cast<long long>(k) % 2 == 0;
        const Point2 pos = along_x ? Point2{start.x + along, start.y} : Point2{start.x, start.y + along};
        return Kinematics{pos, speed};
    };
}

PathFunction make_path(ScenarioKind kind, int index) {
    switch (kind) {
        case ScenarioKind::straight_highway: return road_path(index);
        case ScenarioKind::intersection_turn: return intersection_path(index);
        case ScenarioKind::city_stop_and_go: return city_path(index);
    }
    throw ValidationError("unknown scenario kind");
}

class GaussianNoise {
public:
    explicit GaussianNoise(std::uint64_t seed) : engine_(seed) {}

    std::pair<double, double> pair() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
    }

private:
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 engine_;
};

}  // namespace

std::string_view scenario_name(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::straight_highway: return "road";
        case ScenarioKind::intersection_turn: return "intersection";
        case ScenarioKind::city_stop_and_go: return "city";
    }
    return "unknown";
}

std::optional<ScenarioKind> parse_scenario_kind(std::string_view text) {
    if (text == "road" || text == "highway" || text == "straight_highway") return ScenarioKind::straight_highway;
    if (text == "intersection" || text == "intersection_turn") return ScenarioKind::intersection_turn;
    if (text == "city" || text == "city_stop_and_go") return ScenarioKind::city_stop_and_go;
    return std::nullopt;
}

void ScenarioSpec::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
    if (!(duration >= dt) || !std::isfinite(duration)) throw ValidationError("duration must be at least dt");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) throw ValidationError("noise_sigma must be non-negative");
    if (vehicles < 1) throw ValidationError("need at least one vehicle");
}

Trajectory sample_path(const std::string& vehicle_id, const PathFunction& path, double t0, double duration,
                       double dt) {
    const auto steps = static_cast<std::size_t>(std::floor(duration / dt + 1e-9));
    std::vector<TracePoint> points;
    points.reserve(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = t0 + static_cast<double>(k) * dt;
        const Kinematics state = path(t);
        points.push_back({t, state.position.x, state.position.y, state.speed});
    }
    return Trajectory(vehicle_id, std::move(points));
}

SynthResult generate(const ScenarioSpec& spec) {
    spec.validate();
    SynthResult result;
    result.traces.scenario_name = std::string(scenario_name(spec.kind));
    GaussianNoise noise(spec.seed);

    for (int i = 0; i < spec.vehicles; ++i) {
        const std::string id = vehicle_name(i);
        PathFunction path = make_path(spec.kind, i);
        Trajectory clean = sample_path(id, path, 0.0, spec.duration, spec.dt);
        if (spec.noise_sigma > 0.0) {
            std::vector<TracePoint> points = clean.points();
            for (auto& p : points) {
                const auto [nx, ny] = noise.pair();
                p.x += spec.noise_sigma * nx;
                p.y += spec.noise_sigma * ny;
            }
            clean = Trajectory(id, std::move(points));
        }
        result.traces.add(std::move(clean));
        result.paths.emplace(id, std::move(path));
    }
    return result;
}

}  // namespace trajpred::synth
