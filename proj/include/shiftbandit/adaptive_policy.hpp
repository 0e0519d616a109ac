#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "shiftbandit/partition_tree.hpp"
#include "shiftbandit/policy.hpp"
#include "shiftbandit/rng.hpp"

namespace shiftbandit {

struct PolicyConfig {
    int arms = 3;            // K
    double delta = 0.05;     // confidence parameter, in (0,1)
    double lipschitz = 1.0;  // lambda >= 1, smoothness upper bound fed to the rule
    int dim = 2;             // covariate dimension D
    int max_depth = 30;      // deepest dyadic level the tree may materialize
    std::uint64_t seed = 1;

    void validate() const;  // throws std::invalid_argument
};

// ceil(8 K ln(K / delta)): rounds of pure uniform play before the level rule
// takes over.
int warmup_rounds(const PolicyConfig& cfg);

// Everything the harness or an invariant check may want to know about one
// post-warmup decision.
struct Decision {
    int arm = 0;
    BinId bin;                      // selected bin (root during warm-up)
    int depth = 0;                  // level index of r_t
    double r = 1.0;                 // r_t = 2^-depth
    std::uint64_t inherited = 0;    // candidate set after ancestor intersection
    std::uint64_t survivors = 0;    // candidate set after elimination
    std::uint32_t n_selected = 0;   // n_{r_t}(x) at decision time
    bool first_selection = false;   // bin selected for the first time
    bool warmup = false;
};

// Dyadic successive-elimination policy: per covariate, pick the finest level
// whose cell already holds enough history, inherit the surviving arm set from
// all ancestors, drop arms whose mean estimate trails the leader by more than
// 8*lambda*r_t, and play uniformly among the survivors.
class AdaptivePolicy : public Policy {
public:
    explicit AdaptivePolicy(const PolicyConfig& cfg);

    Decision choose(std::span<const double> x);
    int choose_arm(std::span<const double> x) override { return choose(x).arm; }
    void update(std::span<const double> x, int arm, double reward) override;
    std::string_view name() const override { return "adaptive"; }

    const PolicyConfig& config() const { return cfg_; }
    const PartitionTree& tree() const { return tree_; }
    PartitionTree& tree() { return tree_; }
    std::uint32_t round() const { return round_; }
    int warmup() const { return warmup_; }
    const Decision& last_decision() const { return last_; }

    std::uint64_t eliminations() const { return eliminations_; }
    std::uint64_t selections() const { return selections_; }
    std::uint64_t first_selections() const { return first_selections_; }
    std::uint64_t no_skip_violations() const { return no_skip_violations_; }

    // Smallest feasible level for x given current counts (Line 7 of the rule).
    int select_depth(std::span<const double> x);

private:
    PolicyConfig cfg_;
    PartitionTree tree_;
    Rng rng_;
    int warmup_;
    double threshold_base_;  // 8 K ln(K / delta)
    std::uint32_t round_ = 1;
    Decision last_;
    bool pending_ = false;
    std::array<double, kMaxDim> pending_x_{};

    std::uint64_t eliminations_ = 0;
    std::uint64_t selections_ = 0;
    std::uint64_t first_selections_ = 0;
    std::uint64_t no_skip_violations_ = 0;
};

// Pure elimination step, exposed for direct testing: drops every set bit i of
// `candidates` whose estimate is below best - threshold, where best is the
// maximum estimate over the candidate set. Estimates of unpulled arms enter
// as 0. Never empties the set (the leader always survives).
std::uint64_t eliminate_candidates(std::span<const double> estimates,
                                   std::uint64_t candidates, double threshold);

}  // namespace shiftbandit
