#include "shiftbandit/baselines.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace shiftbandit {

int grid_depth_for_horizon(long horizon, int dim) {
    if (horizon < 1) throw std::invalid_argument("grid: horizon must be >= 1");
    const double d = std::log2(static_cast<double>(horizon)) / (2.0 + dim);
    return std::max(0, static_cast<int>(std::lround(d)));
}

namespace {
std::size_t flat_cells(int dim, int depth) {
    const std::size_t cells = std::size_t{1} << (dim * depth);
    if (dim * depth > 22)
        throw std::invalid_argument("grid: resolution too fine to tabulate");
    return cells;
}

std::size_t flat_index(std::span<const double> x, int dim, int depth) {
    std::size_t idx = 0;
    for (int j = 0; j < dim; ++j)
        idx |= static_cast<std::size_t>(coord_of(x[j], depth)) << (j * depth);
    return idx;
}
}  // namespace

// ===== GridExp3Policy =======================================================

GridExp3Policy::GridExp3Policy(int arms, int dim, long horizon,
                               std::uint64_t seed, int grid_depth)
    : arms_(arms), dim_(dim),
      depth_(grid_depth >= 0 ? grid_depth : grid_depth_for_horizon(horizon, dim)),
      eta_(std::sqrt(std::log(static_cast<double>(arms)) /
                     (static_cast<double>(horizon) * arms))),
      rng_(seed) {
    logw_.assign(flat_cells(dim_, depth_) * arms_, 0.0);
}

std::size_t GridExp3Policy::cell_of(std::span<const double> x) const {
    return flat_index(x, dim_, depth_);
}

void GridExp3Policy::probabilities(const double* logw, double* p) const {
    double mx = logw[0];
    for (int i = 1; i < arms_; ++i) mx = std::max(mx, logw[i]);
    double sum = 0.0;
    for (int i = 0; i < arms_; ++i) {
        p[i] = std::exp(logw[i] - mx);
        sum += p[i];
    }
    for (int i = 0; i < arms_; ++i) p[i] /= sum;
}

int GridExp3Policy::choose_arm(std::span<const double> x) {
    const double* logw = &logw_[cell_of(x) * arms_];
    double p[64];
    probabilities(logw, p);
    const double u = rng_.uniform01();
    double acc = 0.0;
    for (int i = 0; i < arms_; ++i) {
        acc += p[i];
        if (u < acc) return i;
    }
    return arms_ - 1;
}

void GridExp3Policy::update(std::span<const double> x, int arm, double reward) {
    double* logw = &logw_[cell_of(x) * arms_];
    double p[64];
    probabilities(logw, p);
    exp3_step({logw, static_cast<std::size_t>(arms_)}, arm, p[arm], reward, eta_);
}

std::vector<double> GridExp3Policy::cell_probabilities(
    std::span<const double> x) const {
    std::vector<double> p(arms_);
    probabilities(&logw_[cell_of(x) * arms_], p.data());
    return p;
}

void exp3_step(std::span<double> logw, int arm, double p, double reward,
               double eta) {
    const double r = std::clamp(reward, 0.0, 1.0);
    logw[arm] += eta * r / p;
    double mx = logw[0];
    for (double w : logw) mx = std::max(mx, w);
    for (double& w : logw) w -= mx;
}

// ===== FixedGridSEPolicy ====================================================

FixedGridSEPolicy::FixedGridSEPolicy(int arms, int dim, long horizon,
                                     int grid_depth)
    : arms_(arms), dim_(dim),
      depth_(grid_depth >= 0 ? grid_depth : grid_depth_for_horizon(horizon, dim)),
      log_horizon_(std::log(static_cast<double>(horizon))) {
    const std::size_t cells = flat_cells(dim_, depth_);
    pulls_.assign(cells * arms_, 0);
    sums_.assign(cells * arms_, 0.0);
    alive_.assign(cells, arms >= 64 ? ~0ull : (1ull << arms) - 1ull);
}

std::size_t FixedGridSEPolicy::cell_of(std::span<const double> x) const {
    return flat_index(x, dim_, depth_);
}

int FixedGridSEPolicy::choose_arm(std::span<const double> x) {
    const std::size_t c = cell_of(x);
    const std::uint32_t* pulls = &pulls_[c * arms_];
    const double* sums = &sums_[c * arms_];
    std::uint64_t alive = alive_[c];

    double lo[64], hi[64];
    double best_lo = -std::numeric_limits<double>::infinity();
    for (std::uint64_t m = alive; m != 0; m &= m - 1) {
        const int i = std::countr_zero(m);
        if (pulls[i] == 0) {
            lo[i] = -std::numeric_limits<double>::infinity();
            hi[i] = std::numeric_limits<double>::infinity();
        } else {
            const double mean = sums[i] / pulls[i];
            const double rad = std::sqrt(2.0 * log_horizon_ / pulls[i]);
            lo[i] = mean - rad;
            hi[i] = mean + rad;
        }
        best_lo = std::max(best_lo, lo[i]);
    }
    for (std::uint64_t m = alive; m != 0; m &= m - 1) {
        const int i = std::countr_zero(m);
        if (hi[i] < best_lo) alive &= ~(1ull << i);
    }
    alive_[c] = alive;

    int pick = -1;
    for (std::uint64_t m = alive; m != 0; m &= m - 1) {
        const int i = std::countr_zero(m);
        if (pick < 0 || pulls[i] < pulls[pick]) pick = i;
    }
    return pick;
}

void FixedGridSEPolicy::update(std::span<const double> x, int arm,
                               double reward) {
    const std::size_t c = cell_of(x);
    pulls_[c * arms_ + arm] += 1;
    sums_[c * arms_ + arm] += reward;
}

std::uint64_t FixedGridSEPolicy::alive_mask(std::span<const double> x) const {
    return alive_[cell_of(x)];
}

}  // namespace shiftbandit
