#include "trajpred/error.hpp"
#include "trajpred/synth.hpp"
#include "trajpred/trace.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace trajpred;

namespace {

int count_lines(const std::string& text) {
    int lines = 0;
    for (char c : text) lines += c == '\n';
    return lines;
}

}  // namespace

TEST(ParseCsv, MinimalInputWithoutHeader) {
    const auto set = parse_csv("v1,0,0,0\nv1,1,1,0");
    ASSERT_EQ(set.trajectories.size(), 1u);
    const auto& traj = set.trajectories.at("v1");
    ASSERT_EQ(traj.size(), 2u);
    EXPECT_EQ(traj[1].x, 1.0);
    EXPECT_FALSE(traj[0].speed.has_value());
}

TEST(ParseCsv, HeaderAndOptionalSpeed) {
    const auto set = parse_csv("vehicle_id,t,x,y,speed\nv1,1,2,3,\nv1,0,0,0,4.5\n");
    const auto& traj = set.trajectories.at("v1");
    EXPECT_EQ(traj[0].t, 0.0);
    EXPECT_EQ(traj[0].speed, 4.5);
    EXPECT_FALSE(traj[1].speed.has_value());
}

TEST(ParseCsv, DuplicateTimestampNamesVehicleAndTime) {
    try {
        parse_csv("v1,0,0,0\nv1,0,1,0");
        FAIL() << "expected a validation error";
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        EXPECT_NE(msg.find("v1"), std::string::npos);
        EXPECT_NE(msg.find("t=0"), std::string::npos);
    }
}

TEST(ParseCsv, MalformedRowsReportLineNumbers) {
    try {
        parse_csv("vehicle_id,t,x,y\nv1,0,0,0\nv1,1,abc,0\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    EXPECT_THROW(parse_csv("v1,0,0\n"), ParseError);
    EXPECT_THROW(parse_csv("v1,0,0,0,1,2\n"), ParseError);
    EXPECT_THROW(parse_csv("vehicle_id,t,x,y\nv1,0,0,0,5\n"), ParseError);
    EXPECT_THROW(parse_csv("v1,nan,0,0\n"), ParseError);
    EXPECT_THROW(parse_csv("v1,-1,0,0\n"), ValidationError);
}

TEST(ParseCsv, InterleavedSynthRoundTrip) {
    const auto gen = synth::generate({synth::ScenarioKind::city_stop_and_go, 99.0, 1.0, 3, 0.0, 3});
    const std::string csv = emit_csv(gen.traces);
    EXPECT_EQ(count_lines(csv), 301);

    // Interleave rows: time-major instead of vehicle-major, reversed.
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    std::vector<std::string> rows;
    for (std::string line; std::getline(in, line);) rows.push_back(line);
    std::vector<std::string> shuffled;
    for (std::size_t k = 0; k < 100; ++k) {
        for (std::size_t v = 0; v < 3; ++v) shuffled.push_back(rows[v * 100 + (99 - k)]);
    }
    std::string text = header + "\n";
    for (const auto& r : shuffled) text += r + "\n";

    const auto parsed = parse_csv(text, gen.traces.scenario_name);
    ASSERT_EQ(parsed.trajectories.size(), 3u);
    for (const auto& [id, traj] : parsed.trajectories) {
        ASSERT_EQ(traj.size(), 100u);
        for (std::size_t i = 1; i < traj.size(); ++i) EXPECT_LT(traj[i - 1].t, traj[i].t);
    }
    EXPECT_TRUE(approx_equal(parsed, gen.traces));
}

TEST(EmitCsv, EmptySetIsHeaderOnly) {
    EXPECT_EQ(emit_csv(TraceSet{}), "vehicle_id,t,x,y,speed\n");
}

TEST(EmitCsv, OneVehicleTwoPointsIsThreeLines) {
    const auto set = parse_csv("v1,0,0,0\nv1,1,1,0");
    EXPECT_EQ(count_lines(emit_csv(set)), 3);
}

TEST(EmitCsv, RoundTripPropertyOverRandomSets) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coord(-1e4, 1e4);
    std::uniform_real_distribution<double> step(1e-3, 5.0);
    for (int trial = 0; trial < 50; ++trial) {
        TraceSet set;
        set.scenario_name = "random";
        for (int v = 0; v < 5; ++v) {
            std::vector<TracePoint> pts;
            double t = step(rng);
            for (int k = 0; k < 20; ++k) {
                TracePoint p{t, coord(rng), coord(rng)};
                if (k % 3 != 0) p.speed = std::abs(coord(rng)) / 100.0;
                pts.push_back(p);
                t += step(rng);
            }
            set.add(Trajectory("veh" + std::to_string(v), pts));
        }
        // Shortest round-trip formatting makes the identity exact, not just within 1e-9.
        EXPECT_EQ(parse_csv(emit_csv(set), "random"), set);
    }
}

TEST(ParseCsv, FuzzedInputEitherFailsOrIsMonotone) {
    std::mt19937_64 rng(5);
    const std::string alphabet = "v1,0.5-e\n9x";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::uniform_int_distribution<int> len(0, 80);
    int parsed = 0;
    for (int trial = 0; trial < 3000; ++trial) {
        std::string text;
        // Seed half the inputs with valid rows so some parse successfully.
        if (trial % 2 == 0) text = "v1,3,0,0\nv1,1,1,1\n";
        const int n = len(rng);
        for (int i = 0; i < n; ++i) text += alphabet[pick(rng)];
        try {
            const auto set = parse_csv(text);
            ++parsed;
            for (const auto& [id, traj] : set.trajectories) {
                for (std::size_t i = 1; i < traj.size(); ++i) ASSERT_LT(traj[i - 1].t, traj[i].t);
            }
        } catch (const Error&) {
        }
    }
    EXPECT_GT(parsed, 0);
}

TEST(ParseFcd, SingleTimestepSingleVehicle) {
    const auto set = parse_fcd_xml(R"(<fcd-export><timestep time="2.5"><vehicle id="a" x="1" y="2" speed="3" lane="e0"/></timestep></fcd-export>)");
    ASSERT_EQ(set.trajectories.size(), 1u);
    const auto& p = set.trajectories.at("a")[0];
    EXPECT_EQ(p.t, 2.5);
    EXPECT_EQ(p.x, 1.0);
    EXPECT_EQ(p.y, 2.0);
    EXPECT_EQ(p.speed, 3.0);
}

TEST(ParseFcd, OutOfOrderTimestepsAreSorted) {
    const auto set = parse_fcd_xml(R"(<?xml version="1.0"?>
<fcd-export>
  <timestep time="2"><vehicle id="a" x="2" y="0"/></timestep>
  <timestep time="0"><vehicle id="a" x="0" y="0"/><person id="p" x="9" y="9"/></timestep>
  <timestep time="1"><vehicle id="a" x="1" y="0"/></timestep>
</fcd-export>)");
    const auto& traj = set.trajectories.at("a");
    ASSERT_EQ(traj.size(), 3u);
    EXPECT_EQ(traj[0].t, 0.0);
    EXPECT_EQ(traj[2].x, 2.0);
}

TEST(ParseFcd, SyntaxAndAttributeErrors) {
    EXPECT_THROW(parse_fcd_xml("<fcd-export><timestep time=\"0\">"), ParseError);
    EXPECT_THROW(parse_fcd_xml(R"(<fcd-export><timestep><vehicle id="a" x="0" y="0"/></timestep></fcd-export>)"),
                 ValidationError);
    EXPECT_THROW(parse_fcd_xml(R"(<fcd-export><timestep time="0"><vehicle id="a" y="0"/></timestep></fcd-export>)"),
                 ValidationError);
    EXPECT_THROW(parse_fcd_xml(R"(<fcd-export><timestep time="0"><vehicle x="0" y="0"/></timestep></fcd-export>)"),
                 ValidationError);
}

TEST(ParseFcd, MatchesEquivalentCsv) {
    for (const auto kind : {synth::ScenarioKind::straight_highway, synth::ScenarioKind::intersection_turn,
                            synth::ScenarioKind::city_stop_and_go}) {
        const auto gen = synth::generate({kind, 40.0, 0.5, 9, 0.3, 3});
        const auto from_fcd = parse_fcd_xml(emit_fcd_xml(gen.traces), "s");
        const auto from_csv = parse_csv(emit_csv(gen.traces), "s");
        EXPECT_EQ(from_fcd, from_csv);
    }
}

TEST(DeriveSpeeds, ThreeFourFiveTriangle) {
    const Trajectory traj("v", {{0, 0, 0}, {1, 3, 4}});
    const auto out = derive_speeds(traj);
    EXPECT_DOUBLE_EQ(*out[0].speed, 5.0);
    EXPECT_DOUBLE_EQ(*out[1].speed, 5.0);
}

TEST(DeriveSpeeds, StationaryAndSinglePoint) {
    const auto out = derive_speeds(Trajectory("v", {{0, 7, 7}, {1, 7, 7}, {2, 7, 7}}));
    for (const auto& p : out.points()) EXPECT_EQ(*p.speed, 0.0);
    EXPECT_EQ(*derive_speeds(Trajectory("v", {{0, 1, 1}}))[0].speed, 0.0);
}

TEST(DeriveSpeeds, PreservesExistingAndIsIdempotent) {
    const Trajectory traj("v", {{0, 0, 0, 9.0}, {1, 1, 0}, {3, 1, 4, 1.5}, {4, 1, 5}});
    const auto once = derive_speeds(traj);
    EXPECT_EQ(*once[0].speed, 9.0);
    EXPECT_EQ(*once[1].speed, 1.0);
    EXPECT_EQ(*once[2].speed, 1.5);
    EXPECT_EQ(*once[3].speed, 1.0);
    EXPECT_EQ(derive_speeds(once), once);
}

TEST(DeriveSpeeds, ConstantVelocitySynthTrace) {
    // Analytic path x = 2 t, y = 0 with speeds stripped.
    const synth::PathFunction path = [](double t) { return synth::Kinematics{{2.0 * t, 0.0}, 2.0}; };
    auto traj = synth::sample_path("v", path, 0.0, 20.0, 1.0);
    std::vector<TracePoint> pts = traj.points();
    for (auto& p : pts) p.speed.reset();
    const auto out = derive_speeds(Trajectory("v", pts));
    for (const auto& p : out.points()) EXPECT_NEAR(*p.speed, 2.0, 1e-12);
}

TEST(Trajectory, RejectsInvalidPoints) {
    EXPECT_THROW(Trajectory("v", {}), ValidationError);
    EXPECT_THROW(Trajectory("v", {{1, 0, 0}, {1, 0, 0}}), ValidationError);
    EXPECT_THROW(Trajectory("v", {{1, 0, 0}, {0.5, 0, 0}}), ValidationError);
    EXPECT_THROW(Trajectory("v", {{0, 0, 0, -1.0}}), ValidationError);
}
