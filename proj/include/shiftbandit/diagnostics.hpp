#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "shiftbandit/covariate_sampler.hpp"
#include "shiftbandit/geometry.hpp"
#include "shiftbandit/reward_field.hpp"
#include "shiftbandit/rng.hpp"

namespace shiftbandit {

// ============================================================================
// Environment diagnostics: how severe is a covariate shift, how hard is the
// reward landscape, and what level would an oracle tuner pick.
// ============================================================================

struct ShiftProfileRow {
    int depth = 0;
    double r = 1.0;
    double min_ratio = 0.0;  // min over Q-occupied bins of P(B)/Q(B)
    std::size_t q_bins = 0;  // bins with Q mass at this depth
    bool degenerate = false;  // some Q-occupied bin had zero P mass
};

struct ShiftProfile {
    std::vector<ShiftProfileRow> rows;
    double gamma_hat = 0.0;  // log-log slope of min_ratio against r
    double c_gamma = 0.0;    // exp(intercept) of the same fit
    bool infinite = false;   // too few usable depths: Q reaches where P does not
};

// Empirical profile from samples of the two laws.
ShiftProfile estimate_transfer_exponent(
    std::span<const std::array<double, 2>> p_samples,
    std::span<const std::array<double, 2>> q_samples,
    std::span<const int> depths);

// Exact profile from bin-mass functions (quadrature or closed form).
ShiftProfile transfer_profile_from_masses(
    const std::function<double(const BinId&)>& p_mass,
    const std::function<double(const BinId&)>& q_mass,
    std::span<const int> depths, int dim);

struct MarginProfile {
    std::vector<double> thresholds;
    std::vector<double> cdf;    // fraction of X with 0 < gap <= threshold
    double alpha_hat = 0.0;     // log-log slope of cdf against threshold
    double c_alpha = 0.0;
    double delta0 = 0.3;        // upper end of the fit window
};

// Gap = best minus second-best mean reward at X drawn from the sampler.
MarginProfile empirical_margin_cdf(const RewardField& field,
                                   const CovariateSampler& sampler, Rng& rng,
                                   std::size_t samples,
                                   std::span<const double> thresholds);

// Number of occupied dyadic cells per depth.
std::vector<std::pair<int, std::size_t>> box_counting(
    std::span<const std::array<double, 2>> points, std::span<const int> depths);

// Level a rate-optimal tuner with known problem parameters would choose at
// round t: the smallest r in R at or above
//   min( (K ln(K/delta)/n_p)^(1/(2+alpha+d+gamma)),
//        (K ln(K/delta)/tau)^(1/(2+alpha+d)) ),   tau = t - n_p - 1,
// where the first branch is dropped when n_p = 0. Requires tau >= 1.
// Returned as a level index (r = 2^-depth); targets above 1 clamp to level 0.
int oracle_level(long t, long n_p, int arms, double delta, double alpha,
                 double d, double gamma);

// sqrt(8K ln(K/delta) / n_r) + lambda * r; infinite when n_r = 0.
double phi_score(std::uint32_t n_r, double r, int arms, double delta,
                 double lambda);

}  // namespace shiftbandit
