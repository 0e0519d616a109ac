#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "shiftbandit/adaptive_policy.hpp"
#include "shiftbandit/noise.hpp"
#include "shiftbandit/regret.hpp"
#include "shiftbandit/reward_field.hpp"
#include "shiftbandit/shift_schedule.hpp"

namespace shiftbandit {

enum class PolicyKind { Adaptive, Oracle, Uniform, GridExp3, FixedGridSE };

std::string_view policy_name(PolicyKind kind);
PolicyKind policy_from_name(std::string_view name);  // throws on unknown

struct EnvironmentSpec {
    int arms = 3;
    int bumps = 25;
    CenterLaw center_law = CenterLaw::Gaussian;
    double noise_sigma = 0.05;
    bool clip_rewards = false;
    double min_bump_radius = 0.01;
};

// One point of the sweep: the covariate schedule it runs under and the labels
// the CSV reports for it (gamma is the length-weighted mean for multi-phase
// schedules).
struct SweepCell {
    std::vector<Phase> pre_phases;
    long n_q = 0;
    double gamma_label = 0.0;
    long n_p_label = 0;
};

struct ExperimentConfig {
    EnvironmentSpec env;
    std::vector<double> gammas{2.0};
    std::vector<long> n_ps{0};
    long n_q = 30000;
    std::vector<Phase> phases;  // non-empty: explicit schedule instead of sweep
    std::vector<PolicyKind> policies{PolicyKind::Adaptive};
    double delta = 0.05;
    double lambda = 0.0;  // <= 0: use max(1, field's Lipschitz bound)
    int max_depth = 30;
    int trials = 20;
    std::uint64_t seed = 1;
    int threads = 0;  // 0: hardware concurrency
    bool check_invariants = false;
    std::string out;

    long diag_samples = 100000;
    std::vector<int> diag_depths{1, 2, 3, 4};

    std::vector<SweepCell> cells() const;
    void validate() const;
};

// Counters from the structural checks that run when check_invariants is on.
struct InvariantTally {
    std::uint64_t level_rule_checks = 0;
    std::uint64_t level_rule_violations = 0;
    std::uint64_t no_skip_checks = 0;
    std::uint64_t no_skip_violations = 0;
    std::uint64_t balance_events = 0;
    std::uint64_t balance_violations = 0;
    std::uint64_t retention_checks = 0;
    std::uint64_t retention_violations = 0;
    std::uint64_t count_probes = 0;
    std::uint64_t count_mismatches = 0;

    void merge(const InvariantTally& o);
};

struct TrialResult {
    double regret_q = 0.0;
    double regret_total = 0.0;
    double runtime_ms = 0.0;
    std::uint64_t seed = 0;  // environment stream seed
    std::uint64_t eliminations = 0;
    InvariantTally invariants;
};

struct CellAggregate {
    double mean_q = 0.0;
    double std_q = 0.0;  // sample standard deviation; 0 for a single trial
};

struct ExperimentReport {
    std::vector<PolicyKind> policies;
    std::vector<SweepCell> cells;
    int trials = 0;
    // results[policy][cell][trial]
    std::vector<std::vector<std::vector<TrialResult>>> results;

    CellAggregate aggregate(std::size_t policy, std::size_t cell) const;
    InvariantTally invariant_total() const;
    std::uint64_t eliminations_total() const;
};

// Everything one trial needs; seeds are already derived.
struct TrialSpec {
    const RewardField* field = nullptr;
    const SweepCell* cell = nullptr;
    NoiseModel noise;
    PolicyKind kind = PolicyKind::Adaptive;
    PolicyConfig adaptive;  // seed field ignored (policy_seed wins)
    std::uint64_t env_seed = 0;
    std::uint64_t policy_seed = 0;
    std::uint64_t probe_seed = 0;
    bool checks = false;
};

TrialResult run_trial(const TrialSpec& spec, RegretCurve* curve_out = nullptr);
ExperimentReport run_experiment(const ExperimentConfig& config);

// Seed derivation used by run_experiment, exposed so tests can reproduce a
// single trial out of a sweep.
std::uint64_t cell_identity(const SweepCell& cell);
std::uint64_t trial_env_seed(std::uint64_t base, const SweepCell& cell, int trial);
std::uint64_t trial_policy_seed(std::uint64_t base, PolicyKind kind,
                                const SweepCell& cell, int trial);

}  // namespace shiftbandit
