#pragma once

#include <span>
#include <string_view>

namespace shiftbandit {

// Common contract for every decision rule in the harness: see a covariate,
// pick an arm, then receive the reward of the played arm only.
class Policy {
public:
    virtual ~Policy() = default;
    virtual int choose_arm(std::span<const double> x) = 0;
    virtual void update(std::span<const double> x, int arm, double reward) = 0;
    virtual std::string_view name() const = 0;
};

}  // namespace shiftbandit
