#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "shiftbandit/reward_field.hpp"
#include "shiftbandit/rng.hpp"

using namespace shiftbandit;

namespace {

RewardField two_arm_single_bump() {
    std::vector<Bump> bumps{{{0.5, 0.5}, 0.2}};
    std::vector<std::vector<std::int8_t>> signs{{1}, {-1}};
    std::vector<double> offsets{0.1, -0.2};
    return RewardField(std::move(bumps), std::move(signs), std::move(offsets));
}

}  // namespace

TEST_CASE("bump peak, taper, and plateau values are exact") {
    const RewardField field = two_arm_single_bump();
    const std::array<double, 2> center{0.5, 0.5};
    CHECK(field.mean(0, center) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(field.mean(1, center) == doctest::Approx(0.2).epsilon(1e-12));

    const std::array<double, 2> outside{0.9, 0.9};
    CHECK(field.mean(0, outside) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(field.mean(1, outside) == doctest::Approx(0.3).epsilon(1e-12));

    const std::array<double, 2> halfway{0.6, 0.5};  // distance 0.1, tent 0.5
    CHECK(field.mean(0, halfway) == doctest::Approx(0.5 + 0.3 * 0.5 + 0.1 * 0.5));
    CHECK(field.mean(1, halfway) == doctest::Approx(0.5 - 0.3 * 0.5 - 0.2 * 0.5));

    double first = 0.0, second = 0.0;
    field.top_two(center, first, second);
    CHECK(first == doctest::Approx(0.8));
    CHECK(second == doctest::Approx(0.2));
    CHECK(field.best_arm(center) == 0);
    CHECK(field.best_value(outside) == doctest::Approx(0.6));
    CHECK(field.lipschitz_bound() ==
          doctest::Approx(0.6 * std::sqrt(2.0) / 0.2));
}

TEST_CASE("best_arm breaks ties toward the lower index") {
    std::vector<Bump> bumps{{{0.5, 0.5}, 0.1}};
    std::vector<std::vector<std::int8_t>> signs{{1}, {1}, {-1}};
    std::vector<double> offsets{0.1, 0.1, 0.1};
    const RewardField field(std::move(bumps), std::move(signs), std::move(offsets));
    const std::array<double, 2> outside{0.9, 0.1};
    CHECK(field.best_arm(outside) == 0);  // all equal outside the bump
    const std::array<double, 2> inside{0.5, 0.5};
    CHECK(field.best_arm(inside) == 0);  // arms 0 and 1 tie at the peak
}

TEST_CASE("a lone generated bump takes the boundary-limited radius") {
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Rng rng(seed);
        const RewardField field =
            RewardField::generate(2, 1, CenterLaw::Uniform, rng, 0.01);
        const Bump& b = field.bumps()[0];
        const double boundary = std::min({b.center[0], 1.0 - b.center[0],
                                          b.center[1], 1.0 - b.center[1]});
        CHECK(b.radius == std::min(0.2, 0.99 * boundary));
        CHECK(b.radius >= 0.01);
    }
}

TEST_CASE("generated bumps are disjoint, interior, and sized in range") {
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        Rng rng(seed * 1000003);
        const RewardField field =
            RewardField::generate(3, 25, CenterLaw::Gaussian, rng, 0.01);
        const auto& bumps = field.bumps();
        REQUIRE(bumps.size() == 25);
        for (std::size_t i = 0; i < bumps.size(); ++i) {
            const Bump& a = bumps[i];
            CHECK(a.radius >= 0.01);
            CHECK(a.radius <= 0.2);
            CHECK(a.center[0] - a.radius >= 0.0);
            CHECK(a.center[0] + a.radius <= 1.0);
            CHECK(a.center[1] - a.radius >= 0.0);
            CHECK(a.center[1] + a.radius <= 1.0);
            for (std::size_t j = i + 1; j < bumps.size(); ++j) {
                const double d = std::hypot(a.center[0] - bumps[j].center[0],
                                            a.center[1] - bumps[j].center[1]);
                CHECK(d > a.radius + bumps[j].radius);
            }
        }
    }
}

TEST_CASE("field values stay inside [0.2, 0.8]") {
    Rng gen(424242);
    Rng probe(11);
    for (int f = 0; f < 10; ++f) {
        const RewardField field =
            RewardField::generate(4, 25, CenterLaw::Gaussian, gen, 0.01);
        for (int it = 0; it < 2000; ++it) {
            const std::array<double, 2> x{probe.uniform01(), probe.uniform01()};
            for (int arm = 0; arm < 4; ++arm) {
                const double v = field.mean(arm, x);
                CHECK(v >= 0.2 - 1e-12);
                CHECK(v <= 0.8 + 1e-12);
            }
        }
    }
}

TEST_CASE("the smoothness bound really bounds increments") {
    Rng gen(7);
    Rng probe(13);
    for (int f = 0; f < 5; ++f) {
        const RewardField field =
            RewardField::generate(3, 25, CenterLaw::Gaussian, gen, 0.01);
        const double lam = field.lipschitz_bound();
        for (int it = 0; it < 4000; ++it) {
            const std::array<double, 2> x{probe.uniform01(), probe.uniform01()};
            const std::array<double, 2> y{probe.uniform01(), probe.uniform01()};
            const double sup_dist =
                std::max(std::abs(x[0] - y[0]), std::abs(x[1] - y[1]));
            for (int arm = 0; arm < 3; ++arm) {
                const double dv = std::abs(field.mean(arm, x) - field.mean(arm, y));
                CHECK(dv <= lam * sup_dist + 1e-12);
            }
        }
    }
}

TEST_CASE("means are continuous across the bump boundary") {
    const RewardField field = two_arm_single_bump();
    const double eps = 1e-9;
    const std::array<double, 2> just_in{0.5 + (0.2 - eps), 0.5};
    const std::array<double, 2> just_out{0.5 + (0.2 + eps), 0.5};
    for (int arm = 0; arm < 2; ++arm)
        CHECK(std::abs(field.mean(arm, just_in) - field.mean(arm, just_out)) <
              1e-6);
}

TEST_CASE("impossible placement demands throw") {
    Rng rng(3);
    CHECK_THROWS(RewardField::generate(2, 5000, CenterLaw::Uniform, rng, 0.05,
                                       5));
}
