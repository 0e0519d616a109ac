#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "shiftbandit/geometry.hpp"
#include "shiftbandit/policy.hpp"
#include "shiftbandit/reward_field.hpp"
#include "shiftbandit/rng.hpp"

namespace shiftbandit {

// Grid resolution shared by the fixed-grid baselines:
// round(log2(n^(1/(2+D)))), floored at 0.
int grid_depth_for_horizon(long horizon, int dim);

// Plays the true argmax (lowest index on ties). Zero regret by construction.
class OraclePolicy : public Policy {
public:
    explicit OraclePolicy(const RewardField& field) : field_(&field) {}
    int choose_arm(std::span<const double> x) override {
        return field_->best_arm(x);
    }
    void update(std::span<const double>, int, double) override {}
    std::string_view name() const override { return "oracle"; }

private:
    const RewardField* field_;
};

class UniformPolicy : public Policy {
public:
    UniformPolicy(int arms, std::uint64_t seed) : arms_(arms), rng_(seed) {}
    int choose_arm(std::span<const double>) override {
        return rng_.uniform_int(arms_);
    }
    void update(std::span<const double>, int, double) override {}
    std::string_view name() const override { return "uniform"; }

private:
    int arms_;
    Rng rng_;
};

// One Exp3 learner per cell of a fixed dyadic grid sized from the horizon.
// Weights live in log space; sampling is the softmax of the cell's log
// weights (no separate exploration mixing), and the played arm's log weight
// moves by eta * clipped_reward / p_played.
class GridExp3Policy : public Policy {
public:
    GridExp3Policy(int arms, int dim, long horizon, std::uint64_t seed,
                   int grid_depth = -1);

    int choose_arm(std::span<const double> x) override;
    void update(std::span<const double> x, int arm, double reward) override;
    std::string_view name() const override { return "grid_exp3"; }

    int grid_depth() const { return depth_; }
    double eta() const { return eta_; }

    // Sampling distribution of the cell containing x (for tests).
    std::vector<double> cell_probabilities(std::span<const double> x) const;

private:
    std::size_t cell_of(std::span<const double> x) const;
    void probabilities(const double* logw, double* p) const;

    int arms_;
    int dim_;
    int depth_;
    double eta_;
    Rng rng_;
    std::vector<double> logw_;  // cells * arms
};

// Single Exp3 update in log space, exposed for direct testing: given the
// cell's log weights, the played arm, its sampling probability, and the
// reward (clipped to [0,1]), applies logw += eta * reward / p and renormalizes
// by the max so the entries stay bounded.
void exp3_step(std::span<double> logw, int arm, double p, double reward,
               double eta);

// Successive elimination on the same fixed grid: per cell, arms whose
// mean + radius falls below the best lower bound are dropped for good;
// among survivors the least-pulled arm is played (lowest index on ties).
// Radius is sqrt(2 ln(n) / pulls), infinite while an arm is unpulled.
class FixedGridSEPolicy : public Policy {
public:
    FixedGridSEPolicy(int arms, int dim, long horizon, int grid_depth = -1);

    int choose_arm(std::span<const double> x) override;
    void update(std::span<const double> x, int arm, double reward) override;
    std::string_view name() const override { return "fixed_grid_se"; }

    int grid_depth() const { return depth_; }
    std::uint64_t alive_mask(std::span<const double> x) const;

private:
    std::size_t cell_of(std::span<const double> x) const;

    int arms_;
    int dim_;
    int depth_;
    double log_horizon_;
    std::vector<std::uint32_t> pulls_;  // cells * arms
    std::vector<double> sums_;          // cells * arms
    std::vector<std::uint64_t> alive_;  // per cell
};

}  // namespace shiftbandit
