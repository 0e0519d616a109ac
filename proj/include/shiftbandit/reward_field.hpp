#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "shiftbandit/rng.hpp"

namespace shiftbandit {

enum class CenterLaw { Gaussian, Uniform };

struct Bump {
    std::array<double, 2> center{};
    double radius = 0.0;
};

// Mean reward surface on [0,1]^2: a base level of 0.5, per-arm offsets, and
// disjoint conical bumps with per-arm Rademacher signs. Inside bump k,
//   f_i(x) = 0.5 + 0.3 * sign_{i,k} * phi_k(x) + offset_i * (1 - phi_k(x)),
// with phi_k(x) = (1 - |x - z_k| / r_k)_+; outside every bump
//   f_i(x) = 0.5 + offset_i.
// The offset taper keeps each arm continuous across bump boundaries, and all
// values stay in [0.2, 0.8].
class RewardField {
public:
    RewardField(std::vector<Bump> bumps,
                std::vector<std::vector<std::int8_t>> signs,  // [arm][bump]
                std::vector<double> offsets);                 // [arm]

    // Random field: centers drawn from the law (rejected into the square),
    // radii assigned greedily in random order — each takes the largest value
    // that keeps its ball inside the square, clear of already-placed balls,
    // and leaves half the gap to each not-yet-placed center — capped at 0.2.
    // Fields whose smallest radius falls below min_radius are redrawn; after
    // max_retries the construction throws.
    static RewardField generate(int arms, int n_bumps, CenterLaw law, Rng& rng,
                                double min_radius = 0.01, int max_retries = 100);

    int arms() const { return static_cast<int>(offsets_.size()); }
    double mean(int arm, std::span<const double> x) const;
    void means(std::span<const double> x, std::span<double> out) const;
    int best_arm(std::span<const double> x) const;  // ties -> lowest index
    double best_value(std::span<const double> x) const;
    void top_two(std::span<const double> x, double& first, double& second) const;

    // max(1, 0.6*sqrt(2)/min_k r_k): sup-norm Lipschitz bound of the field.
    double lipschitz_bound() const { return lipschitz_; }

    const std::vector<Bump>& bumps() const { return bumps_; }
    std::int8_t sign(int arm, int bump) const { return signs_[arm][bump]; }
    double offset(int arm) const { return offsets_[arm]; }

private:
    // Index of the bump containing x, or -1; phi set to the tent value.
    int locate(std::span<const double> x, double& phi) const;

    std::vector<Bump> bumps_;
    std::vector<std::vector<std::int8_t>> signs_;
    std::vector<double> offsets_;
    double lipschitz_ = 1.0;
};

}  // namespace shiftbandit
