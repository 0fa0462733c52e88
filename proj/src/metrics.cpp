#include "trajpred/metrics.hpp"

#include "trajpred/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace trajpred::metrics {

namespace {

constexpr double kOriginEps = 1e-6;
constexpr double kGridTol = 1e-9;

// Real position at time t, interpolating linearly between samples.
std::optional<std::pair<Point2, bool>> real_position_at(const Trajectory& traj, double t) {
    if (const auto idx = traj.index_at(t, kGridTol)) return std::make_pair(traj[*idx].position(), false);
    const auto& pts = traj.points();
    if (t < pts.front().t || t > pts.back().t) return std::nullopt;
    const auto hi = std::lower_bound(pts.begin(), pts.end(), t, [](const TracePoint& p, double v) { return p.t < v; });
    const auto lo = std::prev(hi);
    const double w = (t - lo->t) / (hi->t - lo->t);
    return std::make_pair(lo->position() + w * (hi->position() - lo->position()), true);
}

int scenario_rank(const std::string& name) {
    std::string lower;
    for (char c : name) lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (lower == "city") return 0;
    if (lower == "road") return 1;
    if (lower == "intersection") return 2;
    return 3;
}

std::string capitalized(const std::string& name) {
    std::string out = name;
    if (!out.empty()) out.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(out.front())));
    return out;
}

std::vector<const EvalReport*> table_order(std::span<const EvalReport> reports) {
    std::vector<const EvalReport*> ordered;
    for (const auto& r : reports) ordered.push_back(&r);
    std::stable_sort(ordered.begin(), ordered.end(), [](const EvalReport* a, const EvalReport* b) {
        const int ra = scenario_rank(a->scenario);
        const int rb = scenario_rank(b->scenario);
        return ra != rb ? ra < rb : a->scenario < b->scenario;
    });
    return ordered;
}

}  // namespace

DeviationSeries deviation(const Trajectory& real, std::span<const TimedPoint> predicted) {
    DeviationSeries out;
    std::vector<std::string> offenders;
    for (const auto& p : predicted) {
        const auto idx = real.index_at(p.t, kGridTol);
        if (!idx) {
            offenders.push_back(format_number(p.t));
            continue;
        }
        out.times.push_back(p.t);
        out.dist.push_back(distance(real[*idx].position(), p.position));
    }
    if (!offenders.empty()) {
        std::string list;
        for (const auto& o : offenders) list += (list.empty() ? "" : ", ") + o;
        throw AlignmentError("vehicle " + real.vehicle_id() + ": no real sample at t = " + list);
    }
    return out;
}

std::string_view to_string(Metric metric) {
    switch (metric) {
        case Metric::mse: return "MSE";
        case Metric::mae: return "MAE";
        case Metric::rmse: return "RMSE";
        case Metric::mape: return "MAPE";
    }
    return "?";
}

std::optional<double> ErrorMetrics::get(Metric metric) const {
    switch (metric) {
        case Metric::mse: return mse;
        case Metric::mae: return mae;
        case Metric::rmse: return rmse;
        case Metric::mape: return mape;
    }
    return std::nullopt;
}

ErrorMetrics error_metrics(std::span<const Point2> real, std::span<const Point2> predicted) {
    if (real.size() != predicted.size()) throw ValidationError("error_metrics: length mismatch");
    if (real.empty()) throw ValidationError("error_metrics: empty input");

    ErrorMetrics m;
    m.n = real.size();
    double sum_sq = 0.0;
    double sum_abs = 0.0;
    double sum_pct = 0.0;
    std::size_t pct_count = 0;
    for (std::size_t i = 0; i < real.size(); ++i) {
        const double d = distance(real[i], predicted[i]);
        sum_sq += d * d;
        sum_abs += d;
        const double ref = norm(real[i]);
        if (ref < kOriginEps) {
            ++m.mape_excluded;
        } else {
            sum_pct += d / ref;
            ++pct_count;
        }
    }
    const double n = static_cast<double>(m.n);
    m.mse = sum_sq / n;
    m.mae = sum_abs / n;
    m.rmse = std::sqrt(m.mse);
    if (pct_count > 0) m.mape = 100.0 * sum_pct / static_cast<double>(pct_count);
    return m;
}

const PredictorSummary* EvalReport::find(PredictorKind kind) const {
    for (const auto& p : predictors) {
        if (p.predictor == kind) return &p;
    }
    return nullptr;
}

EvalReport build_report(const TraceSet& traces, std::span<const PredictorKind> predictors,
                        const PredictorConfig& config, const EvaluationPolicy& policy) {
    config.validate();
    if (predictors.empty()) throw ValidationError("no predictors selected");

    std::vector<PredictorKind> kinds;
    for (const auto k : kAllPredictors) {
        if (std::find(predictors.begin(), predictors.end(), k) != predictors.end()) kinds.push_back(k);
    }
    std::size_t common_start = 0;
    for (const auto k : kinds) common_start = std::max(common_start, config.required_history(k) - 1);

    // Scenario bounding-box origin for the MAPE denominators.
    Point2 origin{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (const auto& [id, traj] : traces.trajectories) {
        for (const auto& p : traj.points()) {
            origin.x = std::min(origin.x, p.x);
            origin.y = std::min(origin.y, p.y);
        }
    }

    EvalReport report;
    report.scenario = traces.scenario_name;
    report.config_echo = config_echo(config);

    struct Accumulator {
        std::vector<Point2> real;
        std::vector<Point2> predicted;
    };
    std::vector<Accumulator> acc(kinds.size());
    report.predictors.resize(kinds.size());
    for (std::size_t k = 0; k < kinds.size(); ++k) report.predictors[k].predictor = kinds[k];

    for (const auto& [id, traj] : traces.trajectories) {
        std::vector<std::optional<Point2>> newton_prev(kinds.size());
        for (std::size_t i = 0; i < traj.size(); ++i) {
            for (std::size_t k = 0; k < kinds.size(); ++k) {
                const std::size_t start = policy.common_start ? common_start : config.required_history(kinds[k]) - 1;
                if (i < start) continue;
                auto& summary = report.predictors[k];
                Prediction pred;
                try {
                    pred = predict_next(traj, i, kinds[k], config, newton_prev[k]);
                } catch (const Error& e) {
                    ++summary.failed;
                    if (e.kind() == ErrorKind::convergence) ++summary.nonconverged;
                    summary.failures.push_back(id + " t=" + format_number(traj[i].t) + ": " + e.what());
                    continue;
                }
                if (kinds[k] == PredictorKind::newton) newton_prev[k] = pred.position;

                const auto real = real_position_at(traj, pred.t_pred);
                if (!real || (real->second && !policy.interpolate_off_grid)) continue;
                ++summary.evaluated;
                if (real->second) ++summary.interpolated;
                acc[k].real.push_back(real->first - origin);
                acc[k].predicted.push_back(pred.position - origin);
                report.deviations.push_back(
                    {id, pred.t_pred, kinds[k], distance(real->first, pred.position), real->second});
            }
        }
    }
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        if (!acc[k].real.empty()) report.predictors[k].metrics = error_metrics(acc[k].real, acc[k].predicted);
    }
    return report;
}

void write_report_csv(std::ostream& out, std::span<const EvalReport> reports) {
    for (const auto* r : table_order(reports)) {
        out << "# scenario " << r->scenario << '\n';
        for (const auto& [key, value] : r->config_echo) out << "#   " << key << " = " << value << '\n';
        for (const auto& p : r->predictors) {
            out << "#   " << to_string(p.predictor) << ": evaluated=" << p.evaluated << " failed=" << p.failed
                << " interpolated=" << p.interpolated << '\n';
        }
    }
    out << "scenario,predictor,metric,value,n,excluded\n";
    for (const auto* r : table_order(reports)) {
        for (const auto metric : kAllMetrics) {
            for (const auto& p : r->predictors) {
                out << r->scenario << ',' << display_name(p.predictor) << ',' << to_string(metric) << ',';
                std::size_t used = 0;
                std::size_t excluded = p.failed;
                if (p.metrics) {
                    const auto v = p.metrics->get(metric);
                    if (v) out << format_number(*v);
                    used = p.metrics->n;
                    if (metric == Metric::mape) {
                        used -= p.metrics->mape_excluded;
                        excluded += p.metrics->mape_excluded;
                    }
                }
                out << ',' << used << ',' << excluded << '\n';
            }
        }
    }
}

void write_deviation_csv(std::ostream& out, const EvalReport& report) {
    out << "vehicle_id,t,predictor,dist\n";
    for (const auto& d : report.deviations) {
        out << d.vehicle_id << ',' << format_number(d.t) << ',' << to_string(d.predictor) << ','
            << format_number(d.dist) << '\n';
    }
}

std::string format_table(std::span<const EvalReport> reports) {
    const auto ordered = table_order(reports);
    std::vector<PredictorKind> columns;
    for (const auto k : kAllPredictors) {
        for (const auto* r : ordered) {
            if (r->find(k) != nullptr) {
                columns.push_back(k);
                break;
            }
        }
    }

    const auto cell = [](std::optional<double> v) {
        if (!v) return std::string("-");
        std::ostringstream s;
        const double a = std::abs(*v);
        if (a != 0.0 && (a < 1e-3 || a >= 1e5)) {
            s << std::scientific << std::setprecision(4) << *v;
        } else {
            s << std::fixed << std::setprecision(4) << *v;
        }
        return s.str();
    };

    constexpr int kLabel = 14;
    constexpr int kCell = 11;
    std::ostringstream out;
    out << std::left << std::setw(kLabel) << "";
    for (const auto metric : kAllMetrics) {
        std::string head(to_string(metric));
        const int width = kCell * static_cast<int>(columns.size());
        out << '|' << std::setw(width) << (std::string(static_cast<std::size_t>(std::max(0, (width - static_cast<int>(head.size())) / 2)), ' ') + head);
    }
    out << "\n" << std::setw(kLabel) << "Scenarios";
    for (std::size_t m = 0; m < std::size(kAllMetrics); ++m) {
        out << '|';
        for (const auto k : columns) out << std::right << std::setw(kCell) << display_name(k) << std::left;
    }
    out << '\n';
    for (const auto* r : ordered) {
        out << std::left << std::setw(kLabel) << capitalized(r->scenario);
        for (const auto metric : kAllMetrics) {
            out << '|';
            for (const auto k : columns) {
                const auto* p = r->find(k);
                const std::optional<double> v = (p && p->metrics) ? p->metrics->get(metric) : std::nullopt;
                out << std::right << std::setw(kCell) << cell(v) << std::left;
            }
        }
        out << '\n';
    }
    bool flagged = false;
    for (const auto k : columns) flagged = flagged || k == PredictorKind::newton;
    if (flagged) out << "(Newton: divided-difference variant, reported in addition to the LR/SVR/Lagrange comparison)\n";
    return out.str();
}

}  // namespace trajpred::metrics
