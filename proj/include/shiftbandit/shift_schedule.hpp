#pragma once

#include <stdexcept>
#include <vector>

#include "shiftbandit/covariate_sampler.hpp"

namespace shiftbandit {

struct Phase {
    double gamma = 0.0;
    long rounds = 0;
};

// Piecewise-stationary covariate process: a sequence of radial-power phases
// (the "past"), followed by a final uniform phase of n_q rounds (the target
// period regret is measured on).
class ShiftSchedule {
public:
    ShiftSchedule(std::vector<Phase> pre_phases, long n_q)
        : phases_(std::move(pre_phases)), n_q_(n_q) {
        if (n_q_ < 0) throw std::invalid_argument("schedule: n_q must be >= 0");
        n_p_ = 0;
        for (const Phase& p : phases_) {
            if (p.rounds < 0)
                throw std::invalid_argument("schedule: phase length must be >= 0");
            samplers_.push_back(CovariateSampler::radial_power(p.gamma));
            n_p_ += p.rounds;
            boundaries_.push_back(n_p_);
        }
        if (n_p_ + n_q_ < 1)
            throw std::invalid_argument("schedule: total horizon must be >= 1");
    }

    long n_p() const { return n_p_; }
    long n_q() const { return n_q_; }
    long total() const { return n_p_ + n_q_; }

    // Length-weighted mean of the phase exponents; 0 when there is no past.
    double gamma_bar() const {
        if (n_p_ == 0) return 0.0;
        double acc = 0.0;
        for (const Phase& p : phases_) acc += p.gamma * static_cast<double>(p.rounds);
        return acc / static_cast<double>(n_p_);
    }

    // Phase index for round t (1-based); phases_.size() means the final
    // uniform phase.
    std::size_t phase_index(long t) const {
        for (std::size_t j = 0; j < boundaries_.size(); ++j)
            if (t <= boundaries_[j]) return j;
        return phases_.size();
    }

    std::array<double, 2> sample(long t, Rng& rng) const {
        const std::size_t j = phase_index(t);
        if (j == phases_.size()) return {rng.uniform01(), rng.uniform01()};
        return samplers_[j].sample(rng);
    }

    const std::vector<Phase>& phases() const { return phases_; }

private:
    std::vector<Phase> phases_;
    std::vector<CovariateSampler> samplers_;
    std::vector<long> boundaries_;
    long n_p_ = 0;
    long n_q_ = 0;
};

}  // namespace shiftbandit
