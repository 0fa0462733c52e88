#include "trajpred/error.hpp"
#include "trajpred/regime.hpp"
#include "trajpred/synth.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace trajpred;
using synth::ScenarioKind;

TEST(Synth, StraightHighwayShortRunIsCollinearConstantSpeed) {
    const auto gen = synth::generate({ScenarioKind::straight_highway, 10.0, 1.0, 7, 0.0, 3});
    for (const auto& [id, traj] : gen.traces.trajectories) {
        ASSERT_EQ(traj.size(), 11u);
        const Point2 a = traj.front().position();
        const Point2 b = traj.back().position();
        for (const auto& p : traj.points()) {
            const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
            EXPECT_NEAR(cross, 0.0, 1e-9);
            EXPECT_EQ(*p.speed, *traj.front().speed);
        }
        EXPECT_GE(*traj.front().speed, 30.0);
    }
}

TEST(Synth, DeterministicUnderSeed) {
    for (const auto kind : {ScenarioKind::straight_highway, ScenarioKind::intersection_turn, ScenarioKind::city_stop_and_go}) {
        const synth::ScenarioSpec spec{kind, 50.0, 0.5, 42, 0.7, 4};
        EXPECT_EQ(synth::generate(spec).traces, synth::generate(spec).traces);
        synth::ScenarioSpec other = spec;
        other.seed = 43;
        EXPECT_NE(synth::generate(spec).traces, synth::generate(other).traces);
    }
}

TEST(Synth, NoiseFreeTracesLieOnAnalyticPath) {
    for (const auto kind : {ScenarioKind::straight_highway, ScenarioKind::intersection_turn, ScenarioKind::city_stop_and_go}) {
        const auto gen = synth::generate({kind, 80.0, 0.25, 1, 0.0, 5});
        for (const auto& [id, traj] : gen.traces.trajectories) {
            const auto& path = gen.paths.at(id);
            for (const auto& p : traj.points()) {
                const auto k = path(p.t);
                EXPECT_NEAR(p.x, k.position.x, 1e-12);
                EXPECT_NEAR(p.y, k.position.y, 1e-12);
                EXPECT_NEAR(*p.speed, k.speed, 1e-12);
            }
        }
    }
}

TEST(Synth, IntersectionSpeedDipsAtArcMidpoint) {
    const auto gen = synth::generate({ScenarioKind::intersection_turn, 60.0, 1.0, 7, 0.0, 1});
    const auto& traj = gen.traces.trajectories.begin()->second;
    std::size_t argmin = 0;
    for (std::size_t i = 1; i < traj.size(); ++i) {
        if (*traj[i].speed < *traj[argmin].speed) argmin = i;
    }
    // Strictly decreasing before the minimum's neighbourhood and increasing after, over the braking phase.
    for (std::size_t i = argmin; i > 0 && *traj[i - 1].speed < 22.0; --i) EXPECT_GT(*traj[i - 1].speed, *traj[i].speed);
    for (std::size_t i = argmin; i + 1 < traj.size() && *traj[i + 1].speed < 22.0; ++i) EXPECT_GT(*traj[i + 1].speed, *traj[i].speed);

    // The slowest point is the midpoint of the quarter turn: heading is 45 degrees there.
    const auto& path = gen.paths.begin()->second;
    const double t_min = traj[argmin].t;
    const Point2 before = path(t_min - 1e-4).position;
    const Point2 after = path(t_min + 1e-4).position;
    EXPECT_NEAR(std::atan2(after.y - before.y, after.x - before.x), M_PI / 4.0, 1e-4);
}

TEST(Synth, CityStopsRepeatPositions) {
    const auto gen = synth::generate({ScenarioKind::city_stop_and_go, 60.0, 1.0, 7, 0.0, 1});
    const auto& traj = gen.traces.trajectories.begin()->second;
    int standing = 0;
    for (std::size_t i = 1; i < traj.size(); ++i) {
        if (traj[i].position() == traj[i - 1].position()) {
            ++standing;
            EXPECT_EQ(*traj[i].speed, 0.0);
        }
    }
    EXPECT_GE(standing, 3);
}

TEST(Synth, SpecValidation) {
    EXPECT_THROW(synth::generate({ScenarioKind::city_stop_and_go, 10.0, 0.0, 1, 0.0, 1}), ValidationError);
    EXPECT_THROW(synth::generate({ScenarioKind::city_stop_and_go, 0.5, 1.0, 1, 0.0, 1}), ValidationError);
    EXPECT_THROW(synth::generate({ScenarioKind::city_stop_and_go, 10.0, 1.0, 1, -1.0, 1}), ValidationError);
}

TEST(Synth, NoiseHasRequestedSpread) {
    const double sigma = 2.0;
    const auto noisy = synth::generate({ScenarioKind::straight_highway, 2000.0, 1.0, 3, sigma, 2});
    double sum_sq = 0.0;
    std::size_t n = 0;
    for (const auto& [id, traj] : noisy.traces.trajectories) {
        for (const auto& p : traj.points()) {
            const auto clean = noisy.paths.at(id)(p.t).position;
            sum_sq += (p.x - clean.x) * (p.x - clean.x) + (p.y - clean.y) * (p.y - clean.y);
            n += 2;
        }
    }
    EXPECT_NEAR(std::sqrt(sum_sq / static_cast<double>(n)), sigma, 0.1);
}
