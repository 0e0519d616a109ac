#pragma once

#include <cassert>
#include <cstdint>
#include <span>
#include <vector>

namespace shiftbandit {

// Append-only record of (covariate, arm, reward) per round. Rounds are
// 1-based; round s lives at row s-1. The log is the ground truth that lazy
// tree nodes are backfilled from.
class ObservationLog {
public:
    explicit ObservationLog(int dim) : dim_(dim) {}

    void append(std::span<const double> x, int arm, double reward) {
        assert(static_cast<int>(x.size()) == dim_);
        xs_.insert(xs_.end(), x.begin(), x.end());
        arms_.push_back(arm);
        rewards_.push_back(reward);
    }

    std::span<const double> x(std::uint32_t round) const {
        return {xs_.data() + static_cast<std::size_t>(round - 1) * dim_,
                static_cast<std::size_t>(dim_)};
    }
    int arm(std::uint32_t round) const { return arms_[round - 1]; }
    double reward(std::uint32_t round) const { return rewards_[round - 1]; }

    std::uint32_t rounds() const { return static_cast<std::uint32_t>(arms_.size()); }
    int dim() const { return dim_; }

private:
    int dim_;
    std::vector<double> xs_;
    std::vector<int> arms_;
    std::vector<double> rewards_;
};

}  // namespace shiftbandit
