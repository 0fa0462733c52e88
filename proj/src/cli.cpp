#include "trajpred/cli.hpp"

#include "trajpred/error.hpp"
#include "trajpred/link.hpp"
#include "trajpred/metrics.hpp"
#include "trajpred/predictor.hpp"
#include "trajpred/synth.hpp"
#include "trajpred/trace.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace trajpred::cli {

namespace {

namespace fs = std::filesystem;

struct PredictorFlags {
    std::string config_path;
    std::size_t window_k = 5;
    std::string horizon = "fixed";
    double offset = 1.0;
    double discovery_period = 0.0;

    CLI::Option* window_opt = nullptr;
    CLI::Option* horizon_opt = nullptr;
    CLI::Option* offset_opt = nullptr;
    CLI::Option* discovery_opt = nullptr;

    void attach(CLI::App& cmd) {
        cmd.add_option("--config", config_path, "key = value file with SVR and regime parameters")
            ->check(CLI::ExistingFile);
        window_opt = cmd.add_option("--window", window_k, "history window for LR and SVR (points)");
        horizon_opt = cmd.add_option("--horizon", horizon, "horizon rule: fixed or mean-lead")
                          ->check(CLI::IsMember({"fixed", "mean-lead"}));
        offset_opt = cmd.add_option("--offset", offset, "fixed horizon offset (s)");
        discovery_opt = cmd.add_option("--discovery-period", discovery_period, "discovery period for mean-lead (s)");
    }

    PredictorConfig build() const {
        PredictorConfig cfg = config_path.empty() ? PredictorConfig{} : load_config_file(config_path);
        if (window_opt->count() > 0) cfg.window_k = window_k;
        if (horizon_opt->count() > 0) {
            cfg.horizon.kind = horizon == "mean-lead" ? interp::HorizonRule::Kind::mean_time_lead
                                                : interp::HorizonRule::Kind::fixed_offset;
        }
        if (offset_opt->count() > 0) cfg.horizon.offset = offset;
        if (discovery_opt->count() > 0) cfg.horizon.discovery_period = discovery_period;
        cfg.validate();
        return cfg;
    }
};

std::vector<PredictorKind> parse_predictor_list(const std::vector<std::string>& names) {
    std::vector<PredictorKind> kinds;
    for (const auto& name : names) {
        const auto k = parse_predictor(name);
        if (!k) throw ValidationError("unknown predictor '" + name + "'");
        if (std::find(kinds.begin(), kinds.end(), *k) == kinds.end()) kinds.push_back(*k);
    }
    if (kinds.empty()) throw ValidationError("no predictors selected");
    std::sort(kinds.begin(), kinds.end());
    return kinds;
}

TraceSet load_traces(const std::string& path, const std::string& scenario) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    const std::string name = scenario.empty() ? fs::path(path).stem().string() : scenario;
    const auto ext = fs::path(path).extension().string();
    if (ext == ".xml" || ext == ".fcd") return parse_fcd_xml(in, name);
    return parse_csv(in, name);
}

std::ofstream open_output(const std::string& path) {
    const fs::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + path);
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw ValidationError("failed writing " + path);
}

std::string sibling(const std::string& path, const std::string& suffix) {
    fs::path p(path);
    const auto stem = p.stem().string();
    return (p.parent_path() / (stem + suffix)).string();
}

// --- synth ------------------------------------------------------------------

struct SynthFlags {
    std::string kind;
    double duration = 60.0;
    double dt = 1.0;
    std::uint64_t seed = 7;
    double noise = 0.0;
    int vehicles = 3;
    std::string format = "csv";
    std::string output;
};

int cmd_synth(const SynthFlags& f, std::ostream& out) {
    std::vector<synth::ScenarioKind> kinds;
    if (f.kind == "all") {
        kinds = {synth::ScenarioKind::straight_highway, synth::ScenarioKind::intersection_turn,
                 synth::ScenarioKind::city_stop_and_go};
    } else {
        const auto k = synth::parse_scenario_kind(f.kind);
        if (!k) throw ValidationError("unknown scenario kind '" + f.kind + "'");
        kinds = {*k};
    }
    for (const auto kind : kinds) {
        synth::ScenarioSpec spec{kind, f.duration, f.dt, f.seed, f.noise, f.vehicles};
        const auto result = synth::generate(spec);
        const std::string ext = f.format == "fcd" ? ".xml" : ".csv";
        const std::string path =
            f.kind == "all" ? (fs::path(f.output) / (std::string(synth::scenario_name(kind)) + ext)).string() : f.output;
        auto file = open_output(path);
        file << (f.format == "fcd" ? emit_fcd_xml(result.traces) : emit_csv(result.traces));
        finish(file, path);
        out << "wrote " << path << " (" << result.traces.trajectories.size() << " vehicles)\n";
    }
    return kSuccess;
}

// --- predict ----------------------------------------------------------------

struct IoFlags {
    std::string input;
    std::string output;
    std::string scenario;
};

int cmd_predict(const IoFlags& io, const PredictorFlags& pf, const std::vector<std::string>& names,
                std::ostream& err) {
    const auto kinds = parse_predictor_list(names);
    const PredictorConfig cfg = pf.build();
    const TraceSet traces = load_traces(io.input, io.scenario);

    std::size_t start = 0;
    for (const auto k : kinds) start = std::max(start, cfg.required_history(k) - 1);

    std::ostringstream rows;
    std::ostringstream log;
    bool nonconverged = false;
    rows << "vehicle_id,t,x_pred,y_pred,predictor,regime\n";
    for (const auto& [id, traj] : traces.trajectories) {
        if (traj.size() <= start) {
            const std::string msg = "skipped vehicle " + id + ": " + std::to_string(traj.size()) +
                                    " points, need " + std::to_string(start + 1);
            err << "warning: " << msg << '\n';
            log << msg << '\n';
            continue;
        }
        std::vector<std::optional<Point2>> newton_prev(kinds.size());
        for (std::size_t i = start; i < traj.size(); ++i) {
            for (std::size_t k = 0; k < kinds.size(); ++k) {
                try {
                    const Prediction p = predict_next(traj, i, kinds[k], cfg, newton_prev[k]);
                    if (kinds[k] == PredictorKind::newton) newton_prev[k] = p.position;
                    rows << id << ',' << format_number(p.t_pred) << ',' << format_number(p.position.x) << ','
                         << format_number(p.position.y) << ',' << to_string(kinds[k]) << ','
                         << (p.regime ? svr::to_string(*p.regime) : std::string_view{}) << '\n';
                } catch (const Error& e) {
                    if (e.kind() == ErrorKind::convergence) nonconverged = true;
                    const std::string msg = "vehicle " + id + " t=" + format_number(traj[i].t) + " " +
                                            std::string(to_string(kinds[k])) + ": " + e.what();
                    err << "warning: " << msg << '\n';
                    log << msg << '\n';
                }
            }
        }
    }
    auto file = open_output(io.output);
    file << rows.str();
    finish(file, io.output);
    const std::string log_path = io.output + ".log";
    auto side = open_output(log_path);
    side << log.str();
    finish(side, log_path);
    return nonconverged ? kConvergence : kSuccess;
}

// --- evaluate / report ------------------------------------------------------

int report_exit(std::span<const metrics::EvalReport> reports, std::ostream& err) {
    bool nonconverged = false;
    for (const auto& r : reports) {
        for (const auto& p : r.predictors) {
            for (const auto& f : p.failures) err << "warning: " << r.scenario << ' ' << to_string(p.predictor) << ' ' << f << '\n';
            nonconverged = nonconverged || p.nonconverged > 0;
        }
    }
    return nonconverged ? kConvergence : kSuccess;
}

int cmd_evaluate(const IoFlags& io, const PredictorFlags& pf, const std::vector<std::string>& names,
                 const std::string& deviation_path, std::ostream& out, std::ostream& err) {
    const auto kinds = parse_predictor_list(names);
    const PredictorConfig cfg = pf.build();
    const TraceSet traces = load_traces(io.input, io.scenario);
    const auto report = metrics::build_report(traces, kinds, cfg);
    const std::span<const metrics::EvalReport> one(&report, 1);

    auto file = open_output(io.output);
    metrics::write_report_csv(file, one);
    finish(file, io.output);

    const std::string dev_path = deviation_path.empty() ? sibling(io.output, "_deviations.csv") : deviation_path;
    auto dev = open_output(dev_path);
    metrics::write_deviation_csv(dev, report);
    finish(dev, dev_path);

    out << metrics::format_table(one);
    for (const auto& [key, value] : report.config_echo) out << "  " << key << " = " << value << '\n';
    return report_exit(one, err);
}

struct ReportFlags {
    std::vector<std::string> inputs;
    std::string output;
    double duration = 60.0;
    double dt = 1.0;
    std::uint64_t seed = 7;
    double noise = 0.0;
    int vehicles = 3;
};

int cmd_report(const ReportFlags& rf, const PredictorFlags& pf, const std::vector<std::string>& names,
               std::ostream& out, std::ostream& err) {
    const auto kinds = parse_predictor_list(names);
    const PredictorConfig cfg = pf.build();
    std::vector<TraceSet> sets;
    if (rf.inputs.empty()) {
        for (const auto kind : {synth::ScenarioKind::city_stop_and_go, synth::ScenarioKind::straight_highway,
                                synth::ScenarioKind::intersection_turn}) {
            sets.push_back(synth::generate({kind, rf.duration, rf.dt, rf.seed, rf.noise, rf.vehicles}).traces);
        }
    } else {
        for (const auto& path : rf.inputs) sets.push_back(load_traces(path, {}));
    }
    std::vector<metrics::EvalReport> reports;
    for (const auto& s : sets) reports.push_back(metrics::build_report(s, kinds, cfg));

    if (!rf.output.empty()) {
        auto file = open_output(rf.output);
        metrics::write_report_csv(file, reports);
        finish(file, rf.output);
    }
    out << metrics::format_table(reports);
    return report_exit(reports, err);
}

// --- linkcheck --------------------------------------------------------------

int cmd_linkcheck(const IoFlags& io, const PredictorFlags& pf, const std::string& predictor_name, double range,
                  std::size_t lookahead, std::ostream& err) {
    const auto kinds = parse_predictor_list({predictor_name});
    const PredictorKind kind = kinds.front();
    const PredictorConfig cfg = pf.build();
    const TraceSet traces = load_traces(io.input, io.scenario);
    if (traces.trajectories.size() < 2) throw ValidationError("need >= 2 vehicles");
    if (!(range > 0.0)) throw ValidationError("range must be positive");
    if (lookahead == 0) throw ValidationError("lookahead must be at least 1");

    std::set<double> instants;
    for (const auto& [id, traj] : traces.trajectories) {
        for (const auto& p : traj.points()) instants.insert(p.t);
    }
    std::vector<const Trajectory*> vehicles;
    for (const auto& [id, traj] : traces.trajectories) vehicles.push_back(&traj);
    const std::size_t needed = cfg.required_history(kind);

    bool nonconverged = false;
    std::ostringstream rows;
    rows << "t,veh_a,veh_b,dist_pred,state,break_eta\n";
    for (const double t : instants) {
        for (std::size_t a = 0; a < vehicles.size(); ++a) {
            const auto ia = vehicles[a]->index_at(t);
            if (!ia || *ia + 1 < needed) continue;
            for (std::size_t b = a + 1; b < vehicles.size(); ++b) {
                const auto ib = vehicles[b]->index_at(t);
                if (!ib || *ib + 1 < needed) continue;
                try {
                    const auto f = link::forecast_pair(*vehicles[a], *vehicles[b], t, kind, cfg, range, lookahead);
                    rows << format_number(t) << ',' << f.veh_a << ',' << f.veh_b << ','
                         << format_number(f.predicted_distance) << ',' << link::to_string(f.state) << ','
                         << (f.break_eta ? format_number(*f.break_eta) : std::string{}) << '\n';
                } catch (const Error& e) {
                    if (e.kind() == ErrorKind::convergence) nonconverged = true;
                    err << "warning: t=" << format_number(t) << ' ' << vehicles[a]->vehicle_id() << '/'
                        << vehicles[b]->vehicle_id() << ": " << e.what() << '\n';
                }
            }
        }
    }
    auto file = open_output(io.output);
    file << rows.str();
    finish(file, io.output);
    return nonconverged ? kConvergence : kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Vehicle trajectory prediction and link-stability forecasting"};
    app.name("trajpred");
    app.require_subcommand(1);

    SynthFlags synth_flags;
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic mobility trace");
    synth_cmd->add_option("--kind", synth_flags.kind, "road | intersection | city | all")->required();
    synth_cmd->add_option("--duration", synth_flags.duration, "seconds");
    synth_cmd->add_option("--dt", synth_flags.dt, "sampling period (s)");
    synth_cmd->add_option("--seed", synth_flags.seed, "noise seed");
    synth_cmd->add_option("--noise", synth_flags.noise, "positional noise std-dev (m)");
    synth_cmd->add_option("--vehicles", synth_flags.vehicles, "vehicles per scenario");
    synth_cmd->add_option("--format", synth_flags.format, "csv or fcd")->check(CLI::IsMember({"csv", "fcd"}));
    synth_cmd->add_option("-o,--output", synth_flags.output, "output file (directory for --kind all)")->required();

    const std::vector<std::string> all_names{"lr", "svr", "lagrange", "newton"};

    IoFlags predict_io;
    PredictorFlags predict_pf;
    std::vector<std::string> predict_names = all_names;
    auto* predict_cmd = app.add_subcommand("predict", "write predicted traces for every vehicle");
    predict_cmd->add_option("-i,--input", predict_io.input, "trace file (.csv or FCD .xml)")->required()->check(CLI::ExistingFile);
    predict_cmd->add_option("-o,--output", predict_io.output, "predicted-trace CSV")->required();
    predict_cmd->add_option("--scenario", predict_io.scenario, "scenario name (default: input file stem)");
    predict_cmd->add_option("--predictors", predict_names, "subset of lr,svr,lagrange,newton")->delimiter(',');
    predict_pf.attach(*predict_cmd);

    IoFlags eval_io;
    PredictorFlags eval_pf;
    std::vector<std::string> eval_names = all_names;
    std::string deviation_path;
    auto* eval_cmd = app.add_subcommand("evaluate", "score predictors against the trace");
    eval_cmd->add_option("-i,--input", eval_io.input, "trace file (.csv or FCD .xml)")->required()->check(CLI::ExistingFile);
    eval_cmd->add_option("-o,--output", eval_io.output, "metric report CSV")->required();
    eval_cmd->add_option("--deviations", deviation_path, "per-instant deviation CSV (default <output>_deviations.csv)");
    eval_cmd->add_option("--scenario", eval_io.scenario, "scenario name (default: input file stem)");
    eval_cmd->add_option("--predictors", eval_names, "subset of lr,svr,lagrange,newton")->delimiter(',');
    eval_pf.attach(*eval_cmd);

    IoFlags link_io;
    PredictorFlags link_pf;
    std::string link_predictor = "lagrange";
    double range = 250.0;
    std::size_t lookahead = 10;
    auto* link_cmd = app.add_subcommand("linkcheck", "forecast pairwise link state and break times");
    link_cmd->add_option("-i,--input", link_io.input, "trace file (.csv or FCD .xml)")->required()->check(CLI::ExistingFile);
    link_cmd->add_option("-o,--output", link_io.output, "link forecast CSV")->required();
    link_cmd->add_option("--scenario", link_io.scenario, "scenario name (default: input file stem)");
    link_cmd->add_option("--predictor", link_predictor, "lr | svr | lagrange | newton");
    link_cmd->add_option("--range", range, "transmission range R (m)");
    link_cmd->add_option("--lookahead", lookahead, "rollout steps");
    link_pf.attach(*link_cmd);

    ReportFlags report_flags;
    PredictorFlags report_pf;
    std::vector<std::string> report_names = all_names;
    auto* report_cmd = app.add_subcommand("report", "metric table over several scenarios");
    report_cmd->add_option("-i,--input", report_flags.inputs, "trace files; default: synthetic city, road, intersection")
        ->check(CLI::ExistingFile);
    report_cmd->add_option("-o,--output", report_flags.output, "metric report CSV");
    report_cmd->add_option("--duration", report_flags.duration, "synthetic scenario length (s)");
    report_cmd->add_option("--dt", report_flags.dt, "synthetic sampling period (s)");
    report_cmd->add_option("--seed", report_flags.seed, "synthetic noise seed");
    report_cmd->add_option("--noise", report_flags.noise, "synthetic positional noise (m)");
    report_cmd->add_option("--vehicles", report_flags.vehicles, "synthetic vehicles per scenario");
    report_cmd->add_option("--predictors", report_names, "subset of lr,svr,lagrange,newton")->delimiter(',');
    report_pf.attach(*report_cmd);

    std::vector<std::string> argv_storage;
    argv_storage.reserve(args.size() + 1);
    argv_storage.push_back("trajpred");
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsage;
    }

    try {
        if (*synth_cmd) return cmd_synth(synth_flags, out);
        if (*predict_cmd) return cmd_predict(predict_io, predict_pf, predict_names, err);
        if (*eval_cmd) return cmd_evaluate(eval_io, eval_pf, eval_names, deviation_path, out, err);
        if (*link_cmd) return cmd_linkcheck(link_io, link_pf, link_predictor, range, lookahead, err);
        if (*report_cmd) return cmd_report(report_flags, report_pf, report_names, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::convergence ? kConvergence : kDataError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    }
    return kUsage;
}

}  // namespace trajpred::cli
