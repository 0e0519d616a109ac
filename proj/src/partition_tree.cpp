#include "shiftbandit/partition_tree.hpp"

#include <cassert>
#include <stdexcept>

namespace shiftbandit {

Estimate regression_estimate(const BinNode& node, int arm) {
    const std::uint32_t pulls = node.pull_count[arm];
    if (pulls == 0) return {0.0, false};
    return {node.reward_sum[arm] / static_cast<double>(pulls), true};
}

PartitionTree::PartitionTree(int dim, int arms, int max_depth)
    : dim_(dim), arms_(arms), max_depth_(max_depth),
      full_mask_(arms >= 64 ? ~0ull : (1ull << arms) - 1ull), log_(dim) {
    BinId rid;
    rid.depth = 0;
    rid.dim = static_cast<std::uint32_t>(dim);
    root_ = make_node(rid);
    all_nodes_.push_back(root_.get());
}

std::unique_ptr<BinNode> PartitionTree::make_node(const BinId& id) {
    auto node = std::make_unique<BinNode>();
    node->id = id;
    node->candidates = full_mask_;
    node->pull_count.assign(arms_, 0);
    node->reward_sum.assign(arms_, 0.0);
    node->children.resize(std::size_t{1} << dim_);
    return node;
}

void PartitionTree::observe(std::span<const double> x, int arm, double reward) {
    log_.append(x, arm, reward);
    const std::uint32_t round = log_.rounds();
    BinNode* node = root_.get();
    while (node != nullptr) {
        node->pull_count[arm] += 1;
        node->reward_sum[arm] += reward;
        node->members.push_back(round);
        if (static_cast<int>(node->id.depth) >= max_depth_) break;
        node = node->children[child_index(node->id, x)].get();
    }
}

BinNode* PartitionTree::materialize_child(BinNode* parent, int child) {
    auto node = make_node(child_id(parent->id, child));
    // Backfill from the parent's member list in round order so that counts,
    // pulls, and reward sums match what eager maintenance would have produced
    // (bitwise, since additions happen in the same order).
    for (std::uint32_t round : parent->members) {
        if (child_index(parent->id, log_.x(round)) != child) continue;
        node->members.push_back(round);
        const int arm = log_.arm(round);
        node->pull_count[arm] += 1;
        node->reward_sum[arm] += log_.reward(round);
    }
    BinNode* raw = node.get();
    parent->children[child] = std::move(node);
    all_nodes_.push_back(raw);
    return raw;
}

BinNode* PartitionTree::child_for(BinNode* parent, std::span<const double> x,
                                  bool materialize) {
    const int child = child_index(parent->id, x);
    BinNode* node = parent->children[child].get();
    if (node == nullptr && materialize) node = materialize_child(parent, child);
    return node;
}

BinNode* PartitionTree::node_at(std::span<const double> x, int depth,
                                bool materialize) {
    if (depth < 0 || depth > max_depth_)
        throw std::out_of_range("partition tree: depth out of range");
    BinNode* node = root_.get();
    for (int d = 0; d < depth && node != nullptr; ++d)
        node = child_for(node, x, materialize);
    return node;
}

const BinNode* PartitionTree::find(const BinId& id) const {
    const BinNode* node = root_.get();
    for (std::uint32_t d = 1; d <= id.depth && node != nullptr; ++d) {
        int child = 0;
        for (std::uint32_t j = 0; j < id.dim; ++j)
            child |= static_cast<int>((id.coords[j] >> (id.depth - d)) & 1u) << j;
        node = node->children[child].get();
    }
    return node;
}

std::uint32_t PartitionTree::covariate_count_at(std::span<const double> x, int depth) {
    return node_at(x, depth, true)->covariate_count();
}

}  // namespace shiftbandit
