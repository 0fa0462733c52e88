#include "trajpred/error.hpp"
#include "trajpred/metrics.hpp"
#include "trajpred/synth.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace trajpred;
using namespace trajpred::metrics;

namespace {

Trajectory line_traj() { return Trajectory("v", {{0, 0, 0}, {1, 1, 0}, {2, 2, 0}, {3, 3, 0}}); }

}  // namespace

TEST(Deviation, PerfectPrediction) {
    const auto traj = line_traj();
    std::vector<TimedPoint> pred{{1, {1, 0}}, {2, {2, 0}}};
    const auto d = deviation(traj, pred);
    EXPECT_EQ(d.times, (std::vector<double>{1, 2}));
    EXPECT_EQ(d.dist, (std::vector<double>{0, 0}));
}

TEST(Deviation, UnitOffset) {
    const auto traj = line_traj();
    std::vector<TimedPoint> pred{{3, {3, 1}}};
    EXPECT_EQ(deviation(traj, pred).dist.front(), 1.0);
}

TEST(Deviation, MisalignedTimesAreListed) {
    const auto traj = line_traj();
    std::vector<TimedPoint> pred{{1.5, {0, 0}}, {2, {2, 0}}, {7, {0, 0}}};
    try {
        deviation(traj, pred);
        FAIL();
    } catch (const AlignmentError& e) {
        const std::string what = e.what();
        EXPECT_NE(what.find("1.5"), std::string::npos);
        EXPECT_NE(what.find("7"), std::string::npos);
    }
}

TEST(ErrorMetrics, HandWorked) {
    const std::vector<Point2> real{{10, 0}, {0, 10}};
    const std::vector<Point2> pred{{13, 0}, {0, 14}};
    const auto m = error_metrics(real, pred);
    EXPECT_EQ(m.mse, 12.5);
    EXPECT_EQ(m.mae, 3.5);
    EXPECT_EQ(m.rmse, std::sqrt(12.5));
    ASSERT_TRUE(m.mape.has_value());
    EXPECT_DOUBLE_EQ(*m.mape, 100.0 * (0.3 + 0.4) / 2.0);
}

TEST(ErrorMetrics, SingleInstantMape) {
    const std::vector<Point2> real{{2, 0}}, pred{{3, 0}};
    const auto m = error_metrics(real, pred);
    EXPECT_EQ(m.mse, 1.0);
    EXPECT_EQ(*m.mape, 50.0);
}

TEST(ErrorMetrics, OriginExclusion) {
    const std::vector<Point2> real{{0, 0}, {4, 0}}, pred{{1, 0}, {5, 0}};
    auto m = error_metrics(real, pred);
    EXPECT_EQ(m.mape_excluded, 1u);
    EXPECT_EQ(*m.mape, 25.0);
    const std::vector<Point2> zero{{0, 0}}, any{{1, 1}};
    m = error_metrics(zero, any);
    EXPECT_FALSE(m.mape.has_value());
    EXPECT_EQ(m.mape_excluded, 1u);
}

TEST(ErrorMetrics, Errors) {
    const std::vector<Point2> one{{1, 1}}, none;
    EXPECT_THROW(error_metrics(none, none), ValidationError);
    EXPECT_THROW(error_metrics(one, none), ValidationError);
}

TEST(BuildReport, AffineScenarioIsExactForLrAndLagrange) {
    const auto gen = synth::generate({synth::ScenarioKind::straight_highway, 18.0, 1.0, 7, 0.0, 3});
    const auto report = build_report(gen.traces, kAllPredictors, PredictorConfig{});
    ASSERT_EQ(report.predictors.size(), 4u);
    for (const auto kind : {PredictorKind::lr, PredictorKind::lagrange}) {
        const auto* p = report.find(kind);
        ASSERT_TRUE(p && p->metrics);
        EXPECT_LE(p->metrics->mse, 1e-9) << to_string(kind);
        EXPECT_LE(p->metrics->mae, 1e-9) << to_string(kind);
    }
    const auto* svr = report.find(PredictorKind::svr);
    ASSERT_TRUE(svr && svr->metrics);
    EXPECT_EQ(svr->failed, 0u);
}

TEST(BuildReport, IdentitiesAndCommonStart) {
    for (const auto kind : {synth::ScenarioKind::city_stop_and_go, synth::ScenarioKind::intersection_turn,
                            synth::ScenarioKind::straight_highway}) {
        const auto gen = synth::generate({kind, 40.0, 1.0, 7, 0.3, 2});
        const auto report = build_report(gen.traces, kAllPredictors, PredictorConfig{});
        std::size_t evaluated = 0;
        for (const auto& p : report.predictors) {
            ASSERT_TRUE(p.metrics.has_value());
            EXPECT_LE(p.metrics->mae, p.metrics->rmse * (1 + 1e-12));
            EXPECT_NEAR(p.metrics->rmse * p.metrics->rmse, p.metrics->mse, 1e-9 * p.metrics->mse);
            EXPECT_EQ(p.metrics->n, p.evaluated);
            if (evaluated == 0) evaluated = p.evaluated + p.failed;
            EXPECT_EQ(p.evaluated + p.failed, evaluated);
        }
    }
}

TEST(BuildReport, OffGridHorizonsAreInterpolatedAndCounted) {
    const auto gen = synth::generate({synth::ScenarioKind::straight_highway, 12.0, 1.0, 7, 0.0, 1});
    PredictorConfig cfg;
    cfg.horizon = interp::HorizonRule::fixed(0.5);
    const PredictorKind lag[] = {PredictorKind::lagrange};
    const auto report = build_report(gen.traces, lag, cfg);
    EXPECT_EQ(report.predictors[0].interpolated, report.predictors[0].evaluated);
    EXPECT_GT(report.predictors[0].evaluated, 0u);
    const auto skipped = build_report(gen.traces, lag, cfg, {true, false});
    EXPECT_EQ(skipped.predictors[0].evaluated, 0u);
    EXPECT_FALSE(skipped.predictors[0].metrics.has_value());
}

TEST(BuildReport, FailuresAreCounted) {
    // Tiny solver budget: SVR fits on curved data cannot converge.
    const auto gen = synth::generate({synth::ScenarioKind::intersection_turn, 40.0, 1.0, 7, 0.0, 1});
    PredictorConfig cfg;
    for (auto& p : cfg.regime_params.by_label) {
        p.max_passes = 1;
        p.tolerance = 1e-9;
    }
    const PredictorKind svr[] = {PredictorKind::svr};
    const auto report = build_report(gen.traces, svr, cfg);
    EXPECT_GT(report.predictors[0].failed, 0u);
    EXPECT_EQ(report.predictors[0].failed, report.predictors[0].nonconverged);
    EXPECT_EQ(report.predictors[0].failures.size(), report.predictors[0].failed);
}

TEST(ReportOutput, TableShapeAndCsvOrder) {
    std::vector<EvalReport> reports;
    for (const auto kind : {synth::ScenarioKind::straight_highway, synth::ScenarioKind::intersection_turn,
                            synth::ScenarioKind::city_stop_and_go}) {
        const auto gen = synth::generate({kind, 30.0, 1.0, 7, 0.0, 2});
        reports.push_back(build_report(gen.traces, kAllPredictors, PredictorConfig{}));
    }
    const auto table = format_table(reports);
    const auto city = table.find("City"), road = table.find("Road"), inter = table.find("Intersection");
    ASSERT_NE(city, std::string::npos);
    EXPECT_LT(city, road);
    EXPECT_LT(road, inter);
    EXPECT_NE(table.find("Newton"), std::string::npos);

    std::ostringstream csv;
    write_report_csv(csv, reports);
    std::istringstream in(csv.str());
    std::string line;
    std::vector<std::string> rows;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.starts_with("#")) continue;
        if (!header) {
            EXPECT_EQ(line, "scenario,predictor,metric,value,n,excluded");
            header = true;
            continue;
        }
        rows.push_back(line);
    }
    ASSERT_EQ(rows.size(), 3u * 4u * 4u);
    EXPECT_TRUE(rows[0].starts_with("city,LR,MSE,"));
    EXPECT_TRUE(rows[1].starts_with("city,SVR,MSE,"));
    EXPECT_TRUE(rows[3].starts_with("city,Newton,MSE,"));
    EXPECT_TRUE(rows[4].starts_with("city,LR,MAE,"));
    EXPECT_TRUE(rows[16].starts_with("road,LR,MSE,"));
    EXPECT_TRUE(rows[47].starts_with("intersection,Newton,MAPE,"));

    std::ostringstream again;
    write_report_csv(again, reports);
    EXPECT_EQ(csv.str(), again.str());
}

TEST(ReportOutput, DeviationCsv) {
    const auto gen = synth::generate({synth::ScenarioKind::straight_highway, 6.0, 1.0, 7, 0.0, 1});
    const PredictorKind lag[] = {PredictorKind::lagrange};
    const auto report = build_report(gen.traces, lag, PredictorConfig{});
    std::ostringstream out;
    write_deviation_csv(out, report);
    EXPECT_TRUE(out.str().starts_with("vehicle_id,t,predictor,dist\nveh00,3,lagrange,"));
}
