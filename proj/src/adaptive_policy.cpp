#include "shiftbandit/adaptive_policy.hpp"

#include <bit>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace shiftbandit {

void PolicyConfig::validate() const {
    if (arms < 2 || arms > 64)
        throw std::invalid_argument("policy: arms must be in [2, 64]");
    if (!(delta > 0.0) || !(delta < 1.0))
        throw std::invalid_argument("policy: delta must lie in (0, 1)");
    if (!(lipschitz >= 1.0))
        throw std::invalid_argument("policy: lipschitz must be >= 1");
    if (dim < 1 || dim > kMaxDim)
        throw std::invalid_argument("policy: dim must be in [1, 8]");
    if (max_depth < 1 || max_depth > kMaxDepthLimit)
        throw std::invalid_argument("policy: max_depth must be in [1, 40]");
}

int warmup_rounds(const PolicyConfig& cfg) {
    return static_cast<int>(
        std::ceil(8.0 * cfg.arms * std::log(cfg.arms / cfg.delta)));
}

std::uint64_t eliminate_candidates(std::span<const double> estimates,
                                   std::uint64_t candidates, double threshold) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::uint64_t m = candidates; m != 0; m &= m - 1) {
        const int i = std::countr_zero(m);
        if (estimates[i] > best) best = estimates[i];
    }
    std::uint64_t out = candidates;
    for (std::uint64_t m = candidates; m != 0; m &= m - 1) {
        const int i = std::countr_zero(m);
        if (estimates[i] < best - threshold) out &= ~(1ull << i);
    }
    assert(out != 0);
    return out;
}

AdaptivePolicy::AdaptivePolicy(const PolicyConfig& cfg)
    : cfg_(cfg), tree_(cfg.dim, cfg.arms, cfg.max_depth), rng_(cfg.seed),
      warmup_(warmup_rounds(cfg)),
      threshold_base_(8.0 * cfg.arms * std::log(cfg.arms / cfg.delta)) {
    cfg_.validate();
}

int AdaptivePolicy::select_depth(std::span<const double> x) {
    // Feasibility of level k is n_k(x) >= 8K ln(K/delta) * 4^k, and is
    // upward-closed in r, so the smallest feasible r is found by descending
    // while the next level still qualifies.
    BinNode* node = &tree_.root();
    int depth = 0;
    while (depth < cfg_.max_depth) {
        BinNode* child = tree_.child_for(node, x, true);
        const double need = threshold_base_ * std::ldexp(1.0, 2 * (depth + 1));
        if (static_cast<double>(child->covariate_count()) >= need) {
            node = child;
            ++depth;
        } else {
            break;
        }
    }
    return depth;
}

Decision AdaptivePolicy::choose(std::span<const double> x) {
    if (pending_)
        throw std::logic_error("adaptive: choose called with an update pending");
    Decision dec;
    if (round_ <= static_cast<std::uint32_t>(warmup_)) {
        dec.warmup = true;
        dec.arm = rng_.uniform_int(cfg_.arms);
        dec.bin = tree_.root().id;
        dec.inherited = dec.survivors =
            cfg_.arms >= 64 ? ~0ull : (1ull << cfg_.arms) - 1ull;
        dec.n_selected = tree_.root().covariate_count();
    } else {
        BinNode* path[kMaxDepthLimit + 1];
        BinNode* node = &tree_.root();
        path[0] = node;
        int depth = 0;
        assert(static_cast<double>(node->covariate_count()) >= threshold_base_);
        while (depth < cfg_.max_depth) {
            BinNode* child = tree_.child_for(node, x, true);
            const double need = threshold_base_ * std::ldexp(1.0, 2 * (depth + 1));
            if (static_cast<double>(child->covariate_count()) < need) break;
            node = child;
            path[++depth] = node;
        }

        ++selections_;
        dec.first_selection = node->first_selected == 0;
        if (dec.first_selection) {
            node->first_selected = round_;
            ++first_selections_;
            if (node->descendant_selected) ++no_skip_violations_;
        }
        for (int d = 0; d < depth; ++d) path[d]->descendant_selected = true;

        std::uint64_t mask = ~0ull;
        for (int d = 0; d <= depth; ++d) mask &= path[d]->candidates;

        double est[64];
        for (std::uint64_t m = mask; m != 0; m &= m - 1) {
            const int i = std::countr_zero(m);
            est[i] = regression_estimate(*node, i).value;
        }
        const double r = level_side(depth);
        const std::uint64_t survivors = eliminate_candidates(
            {est, static_cast<std::size_t>(cfg_.arms)}, mask,
            8.0 * cfg_.lipschitz * r);
        if (survivors != mask)
            eliminations_ += std::popcount(mask) - std::popcount(survivors);
        node->candidates = survivors;

        int alive[64];
        int count = 0;
        for (std::uint64_t m = survivors; m != 0; m &= m - 1)
            alive[count++] = std::countr_zero(m);
        dec.arm = alive[rng_.uniform_int(count)];
        dec.bin = node->id;
        dec.depth = depth;
        dec.r = r;
        dec.inherited = mask;
        dec.survivors = survivors;
        dec.n_selected = node->covariate_count();
    }

    last_ = dec;
    pending_ = true;
    for (int j = 0; j < cfg_.dim; ++j) pending_x_[j] = x[j];
    return dec;
}

void AdaptivePolicy::update(std::span<const double> x, int arm, double reward) {
    if (!pending_)
        throw std::logic_error("adaptive: update without a pending decision");
    if (arm != last_.arm)
        throw std::logic_error("adaptive: update arm differs from the decision");
    for (int j = 0; j < cfg_.dim; ++j)
        if (x[j] != pending_x_[j])
            throw std::logic_error("adaptive: update covariate differs from choose");
    tree_.observe(x, arm, reward);
    assert(tree_.log().rounds() == round_);
    ++round_;
    pending_ = false;
}

}  // namespace shiftbandit
