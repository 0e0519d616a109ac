#pragma once

#include <algorithm>
#include <span>

#include "shiftbandit/reward_field.hpp"
#include "shiftbandit/rng.hpp"

namespace shiftbandit {

// Additive Gaussian observation noise, one independent draw per arm per
// round. The full reward vector is always sampled so that environment
// streams are identical regardless of which arm a policy plays.
struct NoiseModel {
    double sigma = 0.05;
    bool clip_to_unit = false;

    void sample_rewards(const RewardField& field, std::span<const double> x,
                        Rng& rng, std::span<double> out) const {
        field.means(x, out);
        if (sigma > 0.0)
            for (double& y : out) y += sigma * rng.normal();
        if (clip_to_unit)
            for (double& y : out) y = std::clamp(y, 0.0, 1.0);
    }
};

}  // namespace shiftbandit
