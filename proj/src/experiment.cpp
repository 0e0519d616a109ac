#include "shiftbandit/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <thread>

#include "shiftbandit/baselines.hpp"

namespace shiftbandit {

std::string_view policy_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::Adaptive: return "adaptive";
        case PolicyKind::Oracle: return "oracle";
        case PolicyKind::Uniform: return "uniform";
        case PolicyKind::GridExp3: return "grid_exp3";
        case PolicyKind::FixedGridSE: return "fixed_grid_se";
    }
    return "?";
}

PolicyKind policy_from_name(std::string_view name) {
    if (name == "adaptive") return PolicyKind::Adaptive;
    if (name == "oracle") return PolicyKind::Oracle;
    if (name == "uniform") return PolicyKind::Uniform;
    if (name == "grid_exp3") return PolicyKind::GridExp3;
    if (name == "fixed_grid_se") return PolicyKind::FixedGridSE;
    throw std::invalid_argument("unknown policy: " + std::string(name));
}

std::vector<SweepCell> ExperimentConfig::cells() const {
    std::vector<SweepCell> out;
    if (!phases.empty()) {
        SweepCell cell;
        cell.pre_phases = phases;
        cell.n_q = n_q;
        ShiftSchedule sched(phases, n_q);
        cell.gamma_label = sched.gamma_bar();
        cell.n_p_label = sched.n_p();
        out.push_back(std::move(cell));
        return out;
    }
    for (double g : gammas)
        for (long np : n_ps) {
            SweepCell cell;
            if (np > 0) cell.pre_phases.push_back(Phase{g, np});
            cell.n_q = n_q;
            cell.gamma_label = g;
            cell.n_p_label = np;
            out.push_back(std::move(cell));
        }
    return out;
}

void ExperimentConfig::validate() const {
    if (env.arms < 2 || env.arms > 64)
        throw std::invalid_argument("config: arms must be in [2, 64]");
    if (env.bumps < 1) throw std::invalid_argument("config: bumps must be >= 1");
    if (env.noise_sigma < 0.0)
        throw std::invalid_argument("config: sigma must be >= 0");
    if (env.min_bump_radius <= 0.0)
        throw std::invalid_argument("config: min_bump_radius must be > 0");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("config: delta must be in (0, 1)");
    if (max_depth < 1 || max_depth > kMaxDepthLimit)
        throw std::invalid_argument("config: max_depth out of range");
    if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
    if (n_q < 0) throw std::invalid_argument("config: n_q must be >= 0");
    if (threads < 0) throw std::invalid_argument("config: threads must be >= 0");
    if (policies.empty())
        throw std::invalid_argument("config: at least one policy required");
    if (phases.empty() && (gammas.empty() || n_ps.empty()))
        throw std::invalid_argument("config: sweep needs gammas and n_ps");
    auto check_gamma = [](double g) {
        if (!(g >= 0.0 && g <= 10.0))
            throw std::invalid_argument("config: gamma must be in [0, 10]");
    };
    for (double g : gammas) check_gamma(g);
    for (const Phase& p : phases) {
        check_gamma(p.gamma);
        if (p.rounds < 0)
            throw std::invalid_argument("config: phase length must be >= 0");
    }
    for (long np : n_ps)
        if (np < 0) throw std::invalid_argument("config: n_p must be >= 0");
    for (const SweepCell& cell : cells())
        ShiftSchedule(cell.pre_phases, cell.n_q);  // throws on empty horizon
    if (diag_samples < 1)
        throw std::invalid_argument("config: diag_samples must be >= 1");
    for (int d : diag_depths)
        if (d < 1 || d > 12)
            throw std::invalid_argument("config: diag depths must be in [1, 12]");
}

void InvariantTally::merge(const InvariantTally& o) {
    level_rule_checks += o.level_rule_checks;
    level_rule_violations += o.level_rule_violations;
    no_skip_checks += o.no_skip_checks;
    no_skip_violations += o.no_skip_violations;
    balance_events += o.balance_events;
    balance_violations += o.balance_violations;
    retention_checks += o.retention_checks;
    retention_violations += o.retention_violations;
    count_probes += o.count_probes;
    count_mismatches += o.count_mismatches;
}

CellAggregate ExperimentReport::aggregate(std::size_t policy, std::size_t cell) const {
    const auto& rs = results.at(policy).at(cell);
    CellAggregate agg;
    if (rs.empty()) return agg;
    double sum = 0.0;
    for (const TrialResult& r : rs) sum += r.regret_q;
    agg.mean_q = sum / static_cast<double>(rs.size());
    if (rs.size() > 1) {
        double ss = 0.0;
        for (const TrialResult& r : rs) {
            const double d = r.regret_q - agg.mean_q;
            ss += d * d;
        }
        agg.std_q = std::sqrt(ss / static_cast<double>(rs.size() - 1));
    }
    return agg;
}

InvariantTally ExperimentReport::invariant_total() const {
    InvariantTally total;
    for (const auto& per_cell : results)
        for (const auto& per_trial : per_cell)
            for (const TrialResult& r : per_trial) total.merge(r.invariants);
    return total;
}

std::uint64_t ExperimentReport::eliminations_total() const {
    std::uint64_t total = 0;
    for (const auto& per_cell : results)
        for (const auto& per_trial : per_cell)
            for (const TrialResult& r : per_trial) total += r.eliminations;
    return total;
}

std::uint64_t cell_identity(const SweepCell& cell) {
    std::uint64_t h = derive_seed(tag_hash("cell"),
                                  std::bit_cast<std::uint64_t>(cell.gamma_label),
                                  static_cast<std::uint64_t>(cell.n_p_label),
                                  static_cast<std::uint64_t>(cell.n_q));
    for (std::size_t j = 0; j < cell.pre_phases.size(); ++j)
        h = derive_seed(h, std::bit_cast<std::uint64_t>(cell.pre_phases[j].gamma),
                        static_cast<std::uint64_t>(cell.pre_phases[j].rounds), j + 1);
    return h;
}

std::uint64_t trial_env_seed(std::uint64_t base, const SweepCell& cell, int trial) {
    return derive_seed(base, tag_hash("env"), cell_identity(cell),
                       static_cast<std::uint64_t>(trial));
}

std::uint64_t trial_policy_seed(std::uint64_t base, PolicyKind kind,
                                const SweepCell& cell, int trial) {
    return derive_seed(base, tag_hash("policy") + static_cast<std::uint64_t>(kind),
                       cell_identity(cell), static_cast<std::uint64_t>(trial));
}

namespace {

// min over levels r = 2^-d, d = 0..max_depth, of sqrt(C/n_r(x)) + lambda*r.
// The sqrt term is non-decreasing in depth (counts shrink along the path), so
// the scan stops once it alone reaches the best score seen; a zero count ends
// the scan (that level and all deeper are infinite).
double phi_minimum(AdaptivePolicy& policy, std::span<const double> x) {
    const PolicyConfig& cfg = policy.config();
    const double c = 8.0 * cfg.arms * std::log(cfg.arms / cfg.delta);
    double best = std::numeric_limits<double>::infinity();
    for (int depth = 0; depth <= cfg.max_depth; ++depth) {
        const std::uint32_t n = policy.tree().covariate_count_at(x, depth);
        if (n == 0) break;
        const double var = std::sqrt(c / static_cast<double>(n));
        best = std::min(best, var + cfg.lipschitz * level_side(depth));
        if (var >= best) break;
    }
    return best;
}

void check_balance(const AdaptivePolicy& policy, const Decision& d,
                   InvariantTally& tally) {
    tally.balance_events += 1;
    const BinNode* node = policy.tree().find(d.bin);
    if (node == nullptr) {
        tally.balance_violations += 1;  // selected bin must be materialized
        return;
    }
    const std::uint64_t k = static_cast<std::uint64_t>(policy.config().arms);
    for (int i = 0; i < policy.config().arms; ++i) {
        if (((d.inherited >> i) & 1ull) == 0) continue;
        const std::uint64_t pulls = node->pull_count[static_cast<std::size_t>(i)];
        if (4ull * k * pulls < d.n_selected) {
            tally.balance_violations += 1;
            return;
        }
    }
}

void count_probe(const AdaptivePolicy& policy, Rng& probe_rng,
                 InvariantTally& tally) {
    tally.count_probes += 1;
    const auto& nodes = policy.tree().nodes();
    const BinNode* node =
        nodes[static_cast<std::size_t>(probe_rng.uniform_int(static_cast<int>(nodes.size())))];
    const ObservationLog& log = policy.tree().log();
    const int arms = policy.config().arms;

    std::vector<std::uint32_t> members;
    std::vector<std::uint32_t> pulls(static_cast<std::size_t>(arms), 0);
    std::vector<double> sums(static_cast<std::size_t>(arms), 0.0);
    for (std::uint32_t s = 1; s <= log.rounds(); ++s) {
        if (!bin_contains(node->id, log.x(s))) continue;
        members.push_back(s);
        const int a = log.arm(s);
        pulls[static_cast<std::size_t>(a)] += 1;
        sums[static_cast<std::size_t>(a)] += log.reward(s);
    }
    bool ok = members == node->members;
    for (int a = 0; ok && a < arms; ++a) {
        const std::size_t ia = static_cast<std::size_t>(a);
        ok = pulls[ia] == node->pull_count[ia] && sums[ia] == node->reward_sum[ia];
    }
    if (!ok) tally.count_mismatches += 1;
}

std::unique_ptr<Policy> make_baseline(const TrialSpec& spec, long total) {
    const int arms = spec.adaptive.arms;
    switch (spec.kind) {
        case PolicyKind::Oracle:
            return std::make_unique<OraclePolicy>(*spec.field);
        case PolicyKind::Uniform:
            return std::make_unique<UniformPolicy>(arms, spec.policy_seed);
        case PolicyKind::GridExp3:
            return std::make_unique<GridExp3Policy>(arms, 2, total, spec.policy_seed);
        case PolicyKind::FixedGridSE:
            return std::make_unique<FixedGridSEPolicy>(arms, 2, total);
        case PolicyKind::Adaptive:
            break;
    }
    throw std::logic_error("make_baseline: adaptive handled separately");
}

}  // namespace

TrialResult run_trial(const TrialSpec& spec, RegretCurve* curve_out) {
    const ShiftSchedule schedule(spec.cell->pre_phases, spec.cell->n_q);
    const long total = schedule.total();
    const int arms = spec.adaptive.arms;

    Rng env_rng(spec.env_seed);
    Rng probe_rng(spec.probe_seed);

    std::unique_ptr<AdaptivePolicy> adaptive;
    std::unique_ptr<Policy> baseline;
    if (spec.kind == PolicyKind::Adaptive) {
        PolicyConfig cfg = spec.adaptive;
        cfg.seed = spec.policy_seed;
        adaptive = std::make_unique<AdaptivePolicy>(cfg);
    } else {
        baseline = make_baseline(spec, total);
    }

    // Probe rounds for the count-exactness oracle, drawn up front.
    std::vector<long> probe_rounds;
    const bool run_checks = spec.checks && adaptive != nullptr;
    if (run_checks) {
        probe_rounds.reserve(1000);
        for (int j = 0; j < 1000; ++j)
            probe_rounds.push_back(1 + static_cast<long>(probe_rng.uniform_int(
                                           static_cast<int>(total))));
        std::sort(probe_rounds.begin(), probe_rounds.end());
    }
    std::size_t next_probe = 0;

    RegretCurve curve;
    curve.n_p = schedule.n_p();
    curve.instantaneous.reserve(static_cast<std::size_t>(total));

    TrialResult result;
    result.seed = spec.env_seed;
    const bool retention_applies = run_checks && spec.noise.sigma == 0.0;
    std::array<double, 2> center{};

    const auto start = std::chrono::steady_clock::now();
    std::array<double, 2> x{};
    std::vector<double> mvals(static_cast<std::size_t>(arms));
    std::vector<double> rewards(static_cast<std::size_t>(arms));
    for (long t = 1; t <= total; ++t) {
        x = schedule.sample(t, env_rng);
        spec.noise.sample_rewards(*spec.field, x, env_rng, rewards);

        int arm;
        if (adaptive) {
            const Decision d = adaptive->choose(x);
            arm = d.arm;
            if (run_checks && !d.warmup) {
                result.invariants.level_rule_checks += 1;
                const double bound = 2.0 * phi_minimum(*adaptive, x) + 1e-9;
                if (d.r > bound) result.invariants.level_rule_violations += 1;
                if (d.first_selection) check_balance(*adaptive, d, result.invariants);
                if (retention_applies) {
                    result.invariants.retention_checks += 1;
                    bin_center(d.bin, center);
                    const int star = spec.field->best_arm(center);
                    if (((d.survivors >> star) & 1ull) == 0)
                        result.invariants.retention_violations += 1;
                }
            }
        } else {
            arm = baseline->choose_arm(x);
        }

        spec.field->means(x, mvals);
        double best = mvals[0];
        for (int a = 1; a < arms; ++a) best = std::max(best, mvals[static_cast<std::size_t>(a)]);
        curve.instantaneous.push_back(best - mvals[static_cast<std::size_t>(arm)]);

        if (adaptive)
            adaptive->update(x, arm, rewards[static_cast<std::size_t>(arm)]);
        else
            baseline->update(x, arm, rewards[static_cast<std::size_t>(arm)]);

        while (run_checks && next_probe < probe_rounds.size() &&
               probe_rounds[next_probe] == t) {
            count_probe(*adaptive, probe_rng, result.invariants);
            ++next_probe;
        }
    }
    const auto stop = std::chrono::steady_clock::now();

    if (adaptive) {
        result.eliminations = adaptive->eliminations();
        result.invariants.no_skip_checks = adaptive->selections();
        result.invariants.no_skip_violations = adaptive->no_skip_violations();
    }
    result.regret_q = curve.window_q();
    result.regret_total = curve.total();
    result.runtime_ms =
        std::chrono::duration<double, std::milli>(stop - start).count();
    if (curve_out != nullptr) *curve_out = std::move(curve);
    return result;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    config.validate();

    Rng field_rng(derive_seed(config.seed, tag_hash("field")));
    const RewardField field =
        RewardField::generate(config.env.arms, config.env.bumps,
                              config.env.center_law, field_rng,
                              config.env.min_bump_radius);
    const double lambda =
        config.lambda > 0.0 ? config.lambda : std::max(1.0, field.lipschitz_bound());

    ExperimentReport report;
    report.policies = config.policies;
    report.cells = config.cells();
    report.trials = config.trials;
    report.results.assign(
        report.policies.size(),
        std::vector<std::vector<TrialResult>>(
            report.cells.size(), std::vector<TrialResult>(
                                     static_cast<std::size_t>(config.trials))));

    struct Task {
        std::size_t policy;
        std::size_t cell;
        int trial;
    };
    std::vector<Task> tasks;
    for (std::size_t p = 0; p < report.policies.size(); ++p)
        for (std::size_t c = 0; c < report.cells.size(); ++c)
            for (int t = 0; t < config.trials; ++t) tasks.push_back({p, c, t});

    NoiseModel noise{config.env.noise_sigma, config.env.clip_rewards};
    PolicyConfig adaptive_cfg;
    adaptive_cfg.arms = config.env.arms;
    adaptive_cfg.delta = config.delta;
    adaptive_cfg.lipschitz = lambda;
    adaptive_cfg.dim = 2;
    adaptive_cfg.max_depth = config.max_depth;

    auto run_task = [&](const Task& task) {
        const SweepCell& cell = report.cells[task.cell];
        const PolicyKind kind = report.policies[task.policy];
        TrialSpec spec;
        spec.field = &field;
        spec.cell = &cell;
        spec.noise = noise;
        spec.kind = kind;
        spec.adaptive = adaptive_cfg;
        spec.env_seed = trial_env_seed(config.seed, cell, task.trial);
        spec.policy_seed = trial_policy_seed(config.seed, kind, cell, task.trial);
        spec.probe_seed = derive_seed(config.seed, tag_hash("probe"),
                                      cell_identity(cell),
                                      static_cast<std::uint64_t>(task.trial));
        spec.checks = config.check_invariants;
        report.results[task.policy][task.cell][static_cast<std::size_t>(task.trial)] =
            run_trial(spec);
    };

    unsigned workers = config.threads > 0
                           ? static_cast<unsigned>(config.threads)
                           : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(tasks.size()));
    if (workers <= 1) {
        for (const Task& task : tasks) run_task(task);
        return report;
    }

    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= tasks.size()) return;
                run_task(tasks[i]);
            }
        });
    for (std::thread& th : pool) th.join();
    return report;
}

}  // namespace shiftbandit
