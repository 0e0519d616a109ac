#include <doctest.h>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "shiftbandit/covariate_sampler.hpp"
#include "shiftbandit/geometry.hpp"
#include "shiftbandit/noise.hpp"
#include "shiftbandit/reward_field.hpp"
#include "shiftbandit/shift_schedule.hpp"

using namespace shiftbandit;

TEST_CASE("gamma zero is plain uniform, draw for draw") {
    Rng a(10), b(10);
    const CovariateSampler s = CovariateSampler::radial_power(0.0);
    for (int i = 0; i < 100; ++i) {
        const auto x = s.sample(a);
        CHECK(x[0] == b.uniform01());
        CHECK(x[1] == b.uniform01());
    }
}

TEST_CASE("radial density matches its closed-form bin masses") {
    // Density for gamma = 2 is (x^2 + y^2) / (2/3); the mass of a box
    // [a1,b1]x[a2,b2] is 1.5 * ((b1^3-a1^3)/3*(b2-a2) + (b1-a1)*(b2^3-a2^3)/3).
    Rng rng(8675309);
    const CovariateSampler s = CovariateSampler::radial_power(2.0);
    const int depth = 2, side = 4;
    const std::size_t n = 200000;
    std::vector<std::size_t> hits(side * side, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = s.sample(rng);
        hits[coord_of(x[0], depth) * side + coord_of(x[1], depth)] += 1;
    }
    auto cube = [](double v) { return v * v * v; };
    for (int cx = 0; cx < side; ++cx)
        for (int cy = 0; cy < side; ++cy) {
            const double a1 = cx * 0.25, b1 = a1 + 0.25;
            const double a2 = cy * 0.25, b2 = a2 + 0.25;
            const double mass = 1.5 * ((cube(b1) - cube(a1)) / 3.0 * (b2 - a2) +
                                       (b1 - a1) * (cube(b2) - cube(a2)) / 3.0);
            const double emp =
                static_cast<double>(hits[cx * side + cy]) / static_cast<double>(n);
            const double tol =
                5.0 * std::sqrt(mass * (1.0 - mass) / static_cast<double>(n)) +
                1e-4;
            CHECK(std::abs(emp - mass) < tol);
        }
}

TEST_CASE("exponent bounds are enforced") {
    CHECK_THROWS_AS(CovariateSampler::radial_power(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(CovariateSampler::radial_power(10.5), std::invalid_argument);
    CHECK_NOTHROW(CovariateSampler::radial_power(10.0));
}

TEST_CASE("zero noise returns the means verbatim") {
    std::vector<Bump> bumps{{{0.5, 0.5}, 0.2}};
    std::vector<std::vector<std::int8_t>> signs{{1}, {-1}};
    std::vector<double> offsets{0.1, -0.2};
    const RewardField field(std::move(bumps), std::move(signs),
                            std::move(offsets));
    NoiseModel noiseless{0.0, false};
    Rng rng(1);
    std::array<double, 2> x{0.3, 0.8};
    std::vector<double> rewards(2), means(2);
    noiseless.sample_rewards(field, x, rng, rewards);
    field.means(x, means);
    CHECK(rewards[0] == means[0]);
    CHECK(rewards[1] == means[1]);
}

TEST_CASE("noise draws are per-arm and stream-stable") {
    std::vector<Bump> bumps{{{0.5, 0.5}, 0.2}};
    std::vector<std::vector<std::int8_t>> signs{{1}, {-1}};
    std::vector<double> offsets{0.0, 0.0};
    const RewardField field(std::move(bumps), std::move(signs),
                            std::move(offsets));
    NoiseModel noise{0.05, false};
    Rng r1(99), r2(99);
    const std::array<double, 2> x1{0.1, 0.1};
    const std::array<double, 2> x2{0.9, 0.9};
    std::vector<double> out1(2), out2(2), m1(2), m2(2);
    noise.sample_rewards(field, x1, r1, out1);
    noise.sample_rewards(field, x2, r2, out2);
    field.means(x1, m1);
    field.means(x2, m2);
    // Same rng state, different covariates: identical noise residuals.
    CHECK(out1[0] - m1[0] == out2[0] - m2[0]);
    CHECK(out1[1] - m1[1] == out2[1] - m2[1]);
}

TEST_CASE("clipping keeps rewards in the unit interval") {
    std::vector<Bump> bumps{{{0.5, 0.5}, 0.2}};
    std::vector<std::vector<std::int8_t>> signs{{1}};
    std::vector<double> offsets{0.3};
    const RewardField field(std::move(bumps), std::move(signs),
                            std::move(offsets));
    NoiseModel wild{5.0, true};
    Rng rng(4);
    const std::array<double, 2> x{0.5, 0.5};
    std::vector<double> out(1);
    for (int i = 0; i < 200; ++i) {
        wild.sample_rewards(field, x, rng, out);
        CHECK(out[0] >= 0.0);
        CHECK(out[0] <= 1.0);
    }
}

TEST_CASE("schedules stitch phases then a uniform tail") {
    const std::vector<Phase> phases{{0.0, 50000}, {4.0, 50000}};
    const ShiftSchedule sched(phases, 30000);
    CHECK(sched.n_p() == 100000);
    CHECK(sched.n_q() == 30000);
    CHECK(sched.total() == 130000);
    CHECK(sched.gamma_bar() == 2.0);
    CHECK(sched.phase_index(1) == 0);
    CHECK(sched.phase_index(50000) == 0);
    CHECK(sched.phase_index(50001) == 1);
    CHECK(sched.phase_index(100000) == 1);
    CHECK(sched.phase_index(100001) == 2);
    CHECK(sched.phase_index(130000) == 2);

    Rng rng(6);
    for (long t : {1L, 50001L, 100001L, 130000L}) {
        const auto x = sched.sample(t, rng);
        CHECK(x[0] >= 0.0);
        CHECK(x[0] < 1.0);
        CHECK(x[1] >= 0.0);
        CHECK(x[1] < 1.0);
    }
}

TEST_CASE("a past-free schedule has gamma_bar zero") {
    const ShiftSchedule sched({}, 1000);
    CHECK(sched.n_p() == 0);
    CHECK(sched.gamma_bar() == 0.0);
    CHECK(sched.phase_index(1) == 0);
}

TEST_CASE("degenerate schedules are rejected") {
    CHECK_THROWS_AS(ShiftSchedule({}, -1), std::invalid_argument);
    CHECK_THROWS_AS(ShiftSchedule({}, 0), std::invalid_argument);
    CHECK_THROWS_AS(ShiftSchedule({{2.0, -5}}, 100), std::invalid_argument);
    CHECK_NOTHROW(ShiftSchedule({{2.0, 5}}, 0));
}
