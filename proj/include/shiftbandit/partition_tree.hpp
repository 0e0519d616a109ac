#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "shiftbandit/geometry.hpp"
#include "shiftbandit/observation_log.hpp"

namespace shiftbandit {

struct Estimate {
    double value = 0.0;
    bool defined = false;  // false when the arm has no pulls in the bin
};

// One dyadic cell. Nodes are materialized lazily; statistics of a fresh node
// are reconstructed from the parent's member list and the observation log, so
// lazily and eagerly built trees agree exactly.
struct BinNode {
    BinId id;
    std::uint64_t candidates;            // surviving arm set, bit i = arm i
    std::vector<std::uint32_t> pull_count;  // per arm
    std::vector<double> reward_sum;         // per arm
    std::vector<std::uint32_t> members;     // rounds whose covariate lies here
    std::uint32_t first_selected = 0;       // round of first selection, 0 = never
    bool descendant_selected = false;       // any strict descendant ever selected
    std::vector<std::unique_ptr<BinNode>> children;  // size 2^D, entries null

    std::uint32_t covariate_count() const {
        return static_cast<std::uint32_t>(members.size());
    }
};

Estimate regression_estimate(const BinNode& node, int arm);

class PartitionTree {
public:
    PartitionTree(int dim, int arms, int max_depth);

    // Ingests one completed round: appends to the log, then updates pulls,
    // reward sums, and member lists at every materialized node containing x.
    // Rounds must arrive in order; the round index is implied by the log.
    void observe(std::span<const double> x, int arm, double reward);

    // Node containing x at the given depth; materializes the path when asked.
    // Returns null when not materialized and materialization is off.
    BinNode* node_at(std::span<const double> x, int depth, bool materialize);
    const BinNode* find(const BinId& id) const;

    // Child of `parent` containing x, materializing (with backfill) on demand.
    BinNode* child_for(BinNode* parent, std::span<const double> x, bool materialize);

    // n_r(x): number of logged rounds whose covariate lies in the depth-level
    // cell containing x. Materializes the path. Throws on depth out of range.
    std::uint32_t covariate_count_at(std::span<const double> x, int depth);

    BinNode& root() { return *root_; }
    const BinNode& root() const { return *root_; }
    const ObservationLog& log() const { return log_; }
    int dim() const { return dim_; }
    int arms() const { return arms_; }
    int max_depth() const { return max_depth_; }

    // All materialized nodes, in materialization order (root first).
    const std::vector<BinNode*>& nodes() const { return all_nodes_; }

private:
    BinNode* materialize_child(BinNode* parent, int child);
    std::unique_ptr<BinNode> make_node(const BinId& id);

    int dim_;
    int arms_;
    int max_depth_;
    std::uint64_t full_mask_;
    ObservationLog log_;
    std::unique_ptr<BinNode> root_;
    std::vector<BinNode*> all_nodes_;
};

}  // namespace shiftbandit
