#include "shiftbandit/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace shiftbandit {

namespace {

std::uint64_t pack_cell(const std::array<double, 2>& p, int depth) {
    return (static_cast<std::uint64_t>(coord_of(p[0], depth)) << 32) |
           coord_of(p[1], depth);
}

// Least squares slope/intercept of y against x.
std::pair<double, double> fit_line(std::span<const double> xs,
                                   std::span<const double> ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {slope, (sy - slope * sx) / n};
}

ShiftProfile finish_profile(std::vector<ShiftProfileRow> rows) {
    ShiftProfile prof;
    prof.rows = std::move(rows);
    std::vector<double> xs, ys;
    for (const auto& row : prof.rows) {
        if (row.degenerate || row.min_ratio <= 0.0) continue;
        xs.push_back(std::log(row.r));
        ys.push_back(std::log(row.min_ratio));
    }
    if (xs.size() < 2) {
        prof.infinite = true;
        prof.gamma_hat = std::numeric_limits<double>::infinity();
        return prof;
    }
    const auto [slope, intercept] = fit_line(xs, ys);
    prof.gamma_hat = slope;
    prof.c_gamma = std::exp(intercept);
    return prof;
}

}  // namespace

ShiftProfile estimate_transfer_exponent(
    std::span<const std::array<double, 2>> p_samples,
    std::span<const std::array<double, 2>> q_samples,
    std::span<const int> depths) {
    if (p_samples.empty() || q_samples.empty())
        throw std::invalid_argument("transfer: need samples from both laws");
    std::vector<ShiftProfileRow> rows;
    for (int depth : depths) {
        std::unordered_map<std::uint64_t, std::pair<std::size_t, std::size_t>> cnt;
        for (const auto& p : p_samples) cnt[pack_cell(p, depth)].first += 1;
        for (const auto& q : q_samples) cnt[pack_cell(q, depth)].second += 1;
        ShiftProfileRow row;
        row.depth = depth;
        row.r = level_side(depth);
        row.min_ratio = std::numeric_limits<double>::infinity();
        for (const auto& [cell, pq] : cnt) {
            if (pq.second == 0) continue;  // no Q mass: bin carries no evidence
            row.q_bins += 1;
            const double ratio =
                (static_cast<double>(pq.first) / p_samples.size()) /
                (static_cast<double>(pq.second) / q_samples.size());
            row.min_ratio = std::min(row.min_ratio, ratio);
        }
        row.degenerate = row.q_bins == 0 || row.min_ratio <= 0.0;
        rows.push_back(row);
    }
    return finish_profile(std::move(rows));
}

ShiftProfile transfer_profile_from_masses(
    const std::function<double(const BinId&)>& p_mass,
    const std::function<double(const BinId&)>& q_mass,
    std::span<const int> depths, int dim) {
    std::vector<ShiftProfileRow> rows;
    for (int depth : depths) {
        ShiftProfileRow row;
        row.depth = depth;
        row.r = level_side(depth);
        row.min_ratio = std::numeric_limits<double>::infinity();
        const std::uint32_t side = 1u << depth;
        BinId b;
        b.depth = static_cast<std::uint32_t>(depth);
        b.dim = static_cast<std::uint32_t>(dim);
        std::vector<std::uint32_t> idx(dim, 0);
        for (;;) {
            for (int j = 0; j < dim; ++j) b.coords[j] = idx[j];
            const double q = q_mass(b);
            if (q > 0.0) {
                row.q_bins += 1;
                const double p = p_mass(b);
                if (p <= 0.0)
                    row.degenerate = true;
                else
                    row.min_ratio = std::min(row.min_ratio, p / q);
            }
            int j = 0;
            while (j < dim && ++idx[j] == side) idx[j++] = 0;
            if (j == dim) break;
        }
        rows.push_back(row);
    }
    return finish_profile(std::move(rows));
}

MarginProfile empirical_margin_cdf(const RewardField& field,
                                   const CovariateSampler& sampler, Rng& rng,
                                   std::size_t samples,
                                   std::span<const double> thresholds) {
    MarginProfile prof;
    prof.thresholds.assign(thresholds.begin(), thresholds.end());
    std::vector<double> gaps;
    gaps.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const auto x = sampler.sample(rng);
        double first = 0.0, second = 0.0;
        field.top_two(x, first, second);
        gaps.push_back(first - second);
    }
    prof.cdf.resize(thresholds.size());
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
        std::size_t hit = 0;
        for (double g : gaps)
            if (g > 0.0 && g <= prof.thresholds[k]) ++hit;
        prof.cdf[k] = static_cast<double>(hit) / static_cast<double>(samples);
    }
    constexpr double kFitLo = 0.01;
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < prof.thresholds.size(); ++k) {
        const double t = prof.thresholds[k];
        if (t < kFitLo || t > prof.delta0 || prof.cdf[k] <= 0.0) continue;
        xs.push_back(std::log(t));
        ys.push_back(std::log(prof.cdf[k]));
    }
    if (xs.size() >= 2) {
        const auto [slope, intercept] = fit_line(xs, ys);
        prof.alpha_hat = slope;
        prof.c_alpha = std::exp(intercept);
    }
    return prof;
}

std::vector<std::pair<int, std::size_t>> box_counting(
    std::span<const std::array<double, 2>> points, std::span<const int> depths) {
    std::vector<std::pair<int, std::size_t>> out;
    for (int depth : depths) {
        std::unordered_set<std::uint64_t> cells;
        for (const auto& p : points) cells.insert(pack_cell(p, depth));
        out.emplace_back(depth, cells.size());
    }
    return out;
}

int oracle_level(long t, long n_p, int arms, double delta, double alpha,
                 double d, double gamma) {
    const long tau = t - n_p - 1;
    if (tau < 1)
        throw std::invalid_argument("oracle_level: needs t >= n_p + 2");
    const double num = arms * std::log(arms / delta);
    double target = std::pow(num / static_cast<double>(tau),
                             1.0 / (2.0 + alpha + d));
    if (n_p > 0)
        target = std::min(target, std::pow(num / static_cast<double>(n_p),
                                           1.0 / (2.0 + alpha + d + gamma)));
    if (target >= 1.0) return 0;
    int depth = static_cast<int>(std::floor(-std::log2(target)));
    while (level_side(depth) < target) --depth;
    while (level_side(depth + 1) >= target) ++depth;
    return std::max(0, depth);
}

double phi_score(std::uint32_t n_r, double r, int arms, double delta,
                 double lambda) {
    if (n_r == 0) return std::numeric_limits<double>::infinity();
    return std::sqrt(8.0 * arms * std::log(arms / delta) / n_r) + lambda * r;
}

}  // namespace shiftbandit
