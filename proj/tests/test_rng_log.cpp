#include <doctest.h>

#include <array>
#include <cmath>

#include "shiftbandit/observation_log.hpp"
#include "shiftbandit/rng.hpp"

using namespace shiftbandit;

TEST_CASE("rng streams are reproducible and pinned") {
    Rng r(42);
    CHECK(r.next_u64() == 15021278609987233951ULL);
    CHECK(r.next_u64() == 5881210131331364753ULL);
    CHECK(r.next_u64() == 18149643915985481100ULL);

    Rng a(7), b(7), c(8);
    CHECK(a.next_u64() == b.next_u64());
    CHECK(a.next_u64() != c.next_u64());
}

TEST_CASE("seed derivation is pinned and counter-sensitive") {
    CHECK(derive_seed(1, 2, 3, 4) == 3914762511626411631ULL);
    CHECK(derive_seed(1, 2, 3, 5) == 8089497850021181120ULL);
    CHECK(tag_hash("env") == 14046746036577462228ULL);
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 2, 4));
    CHECK(derive_seed(1, 2) != derive_seed(2, 1));
    CHECK(tag_hash("env") != tag_hash("enw"));
}

TEST_CASE("uniform01 stays in the unit interval") {
    Rng r(3);
    for (int i = 0; i < 10000; ++i) {
        const double u = r.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("uniform_int is unbiased enough") {
    Rng r(11);
    int counts[3] = {0, 0, 0};
    const int n = 60000;
    for (int i = 0; i < n; ++i) counts[r.uniform_int(3)] += 1;
    for (int c : counts) {
        CHECK(c > n / 3 - 600);  // ~6 sigma
        CHECK(c < n / 3 + 600);
    }
}

TEST_CASE("normal moments are right") {
    Rng r(5);
    double sum = 0.0, sum2 = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        sum += z;
        sum2 += z * z;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("observation log stores rounds verbatim, 1-based") {
    ObservationLog log(2);
    const std::array<double, 2> x1{0.1, 0.9};
    const std::array<double, 2> x2{0.4, 0.2};
    log.append(x1, 2, 0.75);
    log.append(x2, 0, -1.5);
    CHECK(log.rounds() == 2);
    CHECK(log.dim() == 2);
    CHECK(log.x(1)[0] == 0.1);
    CHECK(log.x(1)[1] == 0.9);
    CHECK(log.arm(1) == 2);
    CHECK(log.reward(1) == 0.75);
    CHECK(log.x(2)[0] == 0.4);
    CHECK(log.arm(2) == 0);
    CHECK(log.reward(2) == -1.5);
}
