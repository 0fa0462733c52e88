#include "trajpred/predictor.hpp"

#include "trajpred/error.hpp"
#include "trajpred/regress.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

namespace trajpred {

std::string_view to_string(PredictorKind kind) {
    switch (kind) {
        case PredictorKind::lr: return "lr";
        case PredictorKind::svr: return "svr";
        case PredictorKind::lagrange: return "lagrange";
        case PredictorKind::newton: return "newton";
    }
    return "?";
}

std::string_view display_name(PredictorKind kind) {
    switch (kind) {
        case PredictorKind::lr: return "LR";
        case PredictorKind::svr: return "SVR";
        case PredictorKind::lagrange: return "Lagrange";
        case PredictorKind::newton: return "Newton";
    }
    return "?";
}

std::optional<PredictorKind> parse_predictor(std::string_view text) {
    for (const auto kind : kAllPredictors) {
        if (text == to_string(kind) || text == display_name(kind)) return kind;
    }
    return std::nullopt;
}

std::size_t PredictorConfig::required_history(PredictorKind kind) const {
    switch (kind) {
        case PredictorKind::lagrange:
        case PredictorKind::newton: return 3;
        case PredictorKind::lr:
        case PredictorKind::svr: return window_k;
    }
    return window_k;
}

void PredictorConfig::validate() const {
    if (window_k < 3) throw ValidationError("window.k must be at least 3");
    horizon.validate();
    thresholds.validate();
    for (const auto& p : regime_params.by_label) p.validate();
}

Prediction predict_next(const Trajectory& traj, std::size_t at_index, PredictorKind kind,
                        const PredictorConfig& config, std::optional<Point2> newton_prev) {
    switch (kind) {
        case PredictorKind::lagrange: {
            const auto p = interp::predict_position_poly(traj, at_index, interp::PolyMethod::lagrange, config.horizon);
            return {p.t_pred, p.position, std::nullopt};
        }
        case PredictorKind::newton: {
            const auto p = interp::predict_position_poly(traj, at_index, interp::PolyMethod::newton, config.horizon,
                                                         newton_prev);
            return {p.t_pred, p.position, std::nullopt};
        }
        case PredictorKind::lr: {
            const auto p = regress::lr_predict_position(traj, at_index, config.window_k, config.horizon);
            return {p.t_pred, p.position, std::nullopt};
        }
        case PredictorKind::svr: {
            const auto p = svr::svr_predict_position(traj, at_index, config.window_k, config.regime_params,
                                                     config.thresholds, config.horizon);
            return {p.t_pred, p.position, p.regime};
        }
    }
    throw ValidationError("unknown predictor");
}

std::vector<Prediction> rollout(const Trajectory& traj, std::size_t at_index, PredictorKind kind,
                                const PredictorConfig& config, std::size_t steps) {
    if (at_index >= traj.size()) throw ValidationError("rollout: index out of range");
    const std::size_t needed = config.required_history(kind);
    if (at_index + 1 < needed) throw InsufficientHistoryError(needed, at_index + 1);

    std::vector<TracePoint> history(traj.points().begin(),
                                    traj.points().begin() + static_cast<std::ptrdiff_t>(at_index) + 1);
    std::vector<Prediction> out;
    out.reserve(steps);
    std::optional<Point2> newton_prev;
    for (std::size_t s = 0; s < steps; ++s) {
        const Trajectory current(traj.vehicle_id(), history);
        const Prediction p = predict_next(current, current.size() - 1, kind, config, newton_prev);
        const TracePoint& last = history.back();
        if (!(p.t_pred > last.t)) throw ValidationError("rollout: horizon does not advance time");
        const double speed = distance(p.position, last.position()) / (p.t_pred - last.t);
        history.push_back({p.t_pred, p.position.x, p.position.y, speed});
        if (kind == PredictorKind::newton) newton_prev = p.position;
        out.push_back(p);
    }
    return out;
}

// --- config file ----------------------------------------------------------------

namespace {

std::string_view strip(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double number(std::string_view text, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw ParseError("expected a number, got '" + std::string(text) + "'", line);
    }
    return v;
}

std::size_t count(std::string_view text, std::size_t line) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError("expected a non-negative integer, got '" + std::string(text) + "'", line);
    }
    return v;
}

}  // namespace

PredictorConfig load_config(std::istream& in, PredictorConfig cfg) {
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view text = raw;
        if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
        text = strip(text);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected key = value", line);
        const std::string key(strip(text.substr(0, eq)));
        const std::string_view value = strip(text.substr(eq + 1));

        if (key == "window.k") {
            cfg.window_k = count(value, line);
        } else if (key == "horizon.kind") {
            if (value == "fixed" || value == "fixed_offset") {
                cfg.horizon.kind = interp::HorizonRule::Kind::fixed_offset;
            } else if (value == "mean-lead" || value == "mean_time_lead") {
                cfg.horizon.kind = interp::HorizonRule::Kind::mean_time_lead;
            } else {
                throw ParseError("horizon.kind must be fixed or mean-lead", line);
            }
        } else if (key == "horizon.offset") {
            cfg.horizon.offset = number(value, line);
        } else if (key == "horizon.discovery_period") {
            cfg.horizon.discovery_period = number(value, line);
        } else if (key.starts_with("regime.")) {
            const std::string field = key.substr(7);
            if (field == "high_speed") cfg.thresholds.high_speed = number(value, line);
            else if (field == "low_speed") cfg.thresholds.low_speed = number(value, line);
            else if (field == "stop_speed") cfg.thresholds.stop_speed = number(value, line);
            else if (field == "slope_eps") cfg.thresholds.slope_eps = number(value, line);
            else throw ParseError("unknown key '" + key + "'", line);
        } else if (key.size() > 5 && key.starts_with("svr") && key[4] == '.' && key[3] >= '1' && key[3] <= '4') {
            auto& p = cfg.regime_params.by_label[static_cast<std::size_t>(key[3] - '1')];
            const std::string field = key.substr(5);
            if (field == "c") p.c = number(value, line);
            else if (field == "epsilon") p.epsilon = number(value, line);
            else if (field == "gamma") p.gamma = number(value, line);
            else if (field == "tolerance") p.tolerance = number(value, line);
            else if (field == "max_passes") p.max_passes = count(value, line);
            else throw ParseError("unknown key '" + key + "'", line);
        } else {
            throw ParseError("unknown key '" + key + "'", line);
        }
    }
    cfg.validate();
    return cfg;
}

PredictorConfig load_config_file(const std::string& path, PredictorConfig base) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file " + path);
    return load_config(in, std::move(base));
}

std::vector<std::pair<std::string, std::string>> config_echo(const PredictorConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("window.k", std::to_string(cfg.window_k));
    out.emplace_back("horizon.kind",
                     cfg.horizon.kind == interp::HorizonRule::Kind::mean_time_lead ? "mean-lead" : "fixed");
    out.emplace_back("horizon.offset", format_number(cfg.horizon.offset));
    out.emplace_back("horizon.discovery_period", format_number(cfg.horizon.discovery_period));
    for (std::size_t i = 0; i < cfg.regime_params.by_label.size(); ++i) {
        const auto& p = cfg.regime_params.by_label[i];
        const std::string prefix = "svr" + std::to_string(i + 1) + ".";
        out.emplace_back(prefix + "c", format_number(p.c));
        out.emplace_back(prefix + "epsilon", format_number(p.epsilon));
        out.emplace_back(prefix + "gamma", format_number(p.gamma));
        out.emplace_back(prefix + "tolerance", format_number(p.tolerance));
        out.emplace_back(prefix + "max_passes", std::to_string(p.max_passes));
    }
    out.emplace_back("regime.high_speed", format_number(cfg.thresholds.high_speed));
    out.emplace_back("regime.low_speed", format_number(cfg.thresholds.low_speed));
    out.emplace_back("regime.stop_speed", format_number(cfg.thresholds.stop_speed));
    out.emplace_back("regime.slope_eps", format_number(cfg.thresholds.slope_eps));
    return out;
}

}  // namespace trajpred
