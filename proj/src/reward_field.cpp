#include "shiftbandit/reward_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace shiftbandit {

namespace {
constexpr double kBase = 0.5;
constexpr double kAmplitude = 0.3;
constexpr double kOffsetRange = 0.3;
constexpr double kRadiusCap = 0.2;

double dist2d(const std::array<double, 2>& a, const std::array<double, 2>& b) {
    return std::hypot(a[0] - b[0], a[1] - b[1]);
}
}  // namespace

RewardField::RewardField(std::vector<Bump> bumps,
                         std::vector<std::vector<std::int8_t>> signs,
                         std::vector<double> offsets)
    : bumps_(std::move(bumps)), signs_(std::move(signs)),
      offsets_(std::move(offsets)) {
    double min_r = std::numeric_limits<double>::infinity();
    for (const Bump& b : bumps_) min_r = std::min(min_r, b.radius);
    lipschitz_ = bumps_.empty()
                     ? 1.0
                     : std::max(1.0, 0.6 * std::sqrt(2.0) / min_r);
}

int RewardField::locate(std::span<const double> x, double& phi) const {
    const std::array<double, 2> p{x[0], x[1]};
    for (std::size_t k = 0; k < bumps_.size(); ++k) {
        const double d = dist2d(p, bumps_[k].center);
        if (d < bumps_[k].radius) {
            phi = 1.0 - d / bumps_[k].radius;
            return static_cast<int>(k);
        }
    }
    phi = 0.0;
    return -1;
}

double RewardField::mean(int arm, std::span<const double> x) const {
    double phi = 0.0;
    const int k = locate(x, phi);
    if (k < 0) return kBase + offsets_[arm];
    return kBase + kAmplitude * signs_[arm][k] * phi + offsets_[arm] * (1.0 - phi);
}

void RewardField::means(std::span<const double> x, std::span<double> out) const {
    double phi = 0.0;
    const int k = locate(x, phi);
    const int n = arms();
    if (k < 0) {
        for (int i = 0; i < n; ++i) out[i] = kBase + offsets_[i];
        return;
    }
    for (int i = 0; i < n; ++i)
        out[i] = kBase + kAmplitude * signs_[i][k] * phi + offsets_[i] * (1.0 - phi);
}

int RewardField::best_arm(std::span<const double> x) const {
    double vals[64];
    means(x, {vals, static_cast<std::size_t>(arms())});
    int best = 0;
    for (int i = 1; i < arms(); ++i)
        if (vals[i] > vals[best]) best = i;
    return best;
}

double RewardField::best_value(std::span<const double> x) const {
    double vals[64];
    means(x, {vals, static_cast<std::size_t>(arms())});
    return *std::max_element(vals, vals + arms());
}

void RewardField::top_two(std::span<const double> x, double& first,
                          double& second) const {
    double vals[64];
    means(x, {vals, static_cast<std::size_t>(arms())});
    first = -std::numeric_limits<double>::infinity();
    second = first;
    for (int i = 0; i < arms(); ++i) {
        if (vals[i] > first) {
            second = first;
            first = vals[i];
        } else if (vals[i] > second) {
            second = vals[i];
        }
    }
}

RewardField RewardField::generate(int arms, int n_bumps, CenterLaw law, Rng& rng,
                                  double min_radius, int max_retries) {
    if (arms < 1) throw std::invalid_argument("field: arms must be >= 1");
    if (n_bumps < 1) throw std::invalid_argument("field: need at least one bump");

    for (int attempt = 0; attempt < max_retries; ++attempt) {
        std::vector<Bump> bumps(n_bumps);
        for (Bump& b : bumps) {
            for (;;) {
                std::array<double, 2> c;
                if (law == CenterLaw::Gaussian) {
                    c = {0.5 + std::sqrt(0.5) * rng.normal(),
                         0.5 + std::sqrt(0.5) * rng.normal()};
                } else {
                    c = {rng.uniform01(), rng.uniform01()};
                }
                if (c[0] > 0.0 && c[0] < 1.0 && c[1] > 0.0 && c[1] < 1.0) {
                    b.center = c;
                    break;
                }
            }
        }

        std::vector<int> order(n_bumps);
        std::iota(order.begin(), order.end(), 0);
        for (int i = n_bumps - 1; i > 0; --i)
            std::swap(order[i], order[rng.uniform_int(i + 1)]);

        std::vector<bool> placed(n_bumps, false);
        bool ok = true;
        for (int k : order) {
            const auto& z = bumps[k].center;
            double geo = std::min({z[0], 1.0 - z[0], z[1], 1.0 - z[1]});
            for (int j = 0; j < n_bumps; ++j) {
                if (j == k) continue;
                const double d = dist2d(z, bumps[j].center);
                geo = std::min(geo, placed[j] ? d - bumps[j].radius : d / 2.0);
            }
            const double r = std::min(kRadiusCap, 0.99 * geo);
            if (r < min_radius) {
                ok = false;
                break;
            }
            bumps[k].radius = r;
            placed[k] = true;
        }
        if (!ok) continue;

        std::vector<std::vector<std::int8_t>> signs(
            arms, std::vector<std::int8_t>(n_bumps));
        for (auto& row : signs)
            for (auto& s : row) s = rng.uniform01() < 0.5 ? -1 : 1;
        std::vector<double> offsets(arms);
        for (double& h : offsets) h = rng.uniform(-kOffsetRange, kOffsetRange);

        return RewardField(std::move(bumps), std::move(signs), std::move(offsets));
    }
    throw std::runtime_error("field: failed to place disjoint bumps");
}

}  // namespace shiftbandit
