#pragma once

#include <numeric>
#include <vector>

namespace shiftbandit {

// Per-round instantaneous regret against the true mean surface, plus the
// derived quantities the experiments report. The target-period window is
// everything after the past phases, so R_Q = R_{1,n} - R_{1,n_p} exactly.
struct RegretCurve {
    long n_p = 0;
    std::vector<double> instantaneous;

    double cumulative_at(long t) const {
        return std::accumulate(instantaneous.begin(),
                               instantaneous.begin() + t, 0.0);
    }
    double total() const { return cumulative_at(static_cast<long>(instantaneous.size())); }
    double window_q() const {
        return std::accumulate(instantaneous.begin() + n_p,
                               instantaneous.end(), 0.0);
    }
};

}  // namespace shiftbandit
