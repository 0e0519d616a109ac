#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "shiftbandit/rng.hpp"

namespace shiftbandit {

inline constexpr double kGammaMax = 10.0;

// Covariate laws on [0,1]^2: uniform, or density proportional to |x|_2^gamma
// (mass pushed toward the far corner as gamma grows). The radial law samples
// by rejection from the uniform proposal with acceptance (|u|_2/sqrt(2))^gamma,
// which is exact because that ratio is the density over its sup.
class CovariateSampler {
public:
    static CovariateSampler uniform() { return CovariateSampler(0.0); }
    static CovariateSampler radial_power(double gamma) {
        if (!(gamma >= 0.0) || gamma > kGammaMax)
            throw std::invalid_argument("sampler: gamma must lie in [0, 10]");
        return CovariateSampler(gamma);
    }

    double gamma() const { return gamma_; }

    std::array<double, 2> sample(Rng& rng) const {
        if (gamma_ == 0.0) return {rng.uniform01(), rng.uniform01()};
        for (;;) {
            const std::array<double, 2> u{rng.uniform01(), rng.uniform01()};
            const double ratio = std::hypot(u[0], u[1]) / std::sqrt(2.0);
            if (rng.uniform01() < std::pow(ratio, gamma_)) return u;
        }
    }

private:
    explicit CovariateSampler(double gamma) : gamma_(gamma) {}
    double gamma_;
};

}  // namespace shiftbandit
