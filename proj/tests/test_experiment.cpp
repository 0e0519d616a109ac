#include <doctest.h>

#include <cmath>

#include "shiftbandit/experiment.hpp"
#include "shiftbandit/csv.hpp"

using namespace shiftbandit;

namespace {

ExperimentConfig tiny_config() {
    ExperimentConfig cfg;
    cfg.env.arms = 3;
    cfg.env.bumps = 8;
    cfg.gammas = {2.0};
    cfg.n_ps = {500};
    cfg.n_q = 1500;
    cfg.policies = {PolicyKind::Adaptive};
    cfg.trials = 2;
    cfg.seed = 5;
    cfg.threads = 1;
    return cfg;
}

}  // namespace

TEST_CASE("policy names round-trip") {
    for (PolicyKind kind :
         {PolicyKind::Adaptive, PolicyKind::Oracle, PolicyKind::Uniform,
          PolicyKind::GridExp3, PolicyKind::FixedGridSE})
        CHECK(policy_from_name(policy_name(kind)) == kind);
    CHECK_THROWS(policy_from_name("thompson"));
}

TEST_CASE("environment seeds ignore the policy, trial seeds do not") {
    SweepCell cell;
    cell.pre_phases = {{2.0, 1000}};
    cell.n_q = 500;
    cell.gamma_label = 2.0;
    cell.n_p_label = 1000;
    const std::uint64_t base = 42;
    CHECK(trial_env_seed(base, cell, 0) == trial_env_seed(base, cell, 0));
    CHECK(trial_env_seed(base, cell, 0) != trial_env_seed(base, cell, 1));
    CHECK(trial_policy_seed(base, PolicyKind::Adaptive, cell, 0) !=
          trial_policy_seed(base, PolicyKind::Uniform, cell, 0));

    SweepCell other = cell;
    other.gamma_label = 4.0;
    other.pre_phases[0].gamma = 4.0;
    CHECK(cell_identity(cell) != cell_identity(other));
    CHECK(trial_env_seed(base, cell, 0) != trial_env_seed(base, other, 0));
}

TEST_CASE("single trials are reproducible and seed-sensitive") {
    Rng gen(1);
    const RewardField field =
        RewardField::generate(3, 10, CenterLaw::Gaussian, gen, 0.01);
    SweepCell cell;
    cell.n_q = 2000;
    TrialSpec spec;
    spec.field = &field;
    spec.cell = &cell;
    spec.noise = {0.05, false};
    spec.kind = PolicyKind::Adaptive;
    spec.adaptive.arms = 3;
    spec.adaptive.lipschitz = 2.0;
    spec.env_seed = 111;
    spec.policy_seed = 222;
    spec.probe_seed = 333;

    const TrialResult a = run_trial(spec);
    const TrialResult b = run_trial(spec);
    CHECK(a.regret_q == b.regret_q);
    CHECK(a.regret_total == b.regret_total);
    CHECK(a.eliminations == b.eliminations);

    spec.env_seed = 112;
    const TrialResult c = run_trial(spec);
    CHECK(a.regret_q != c.regret_q);
}

TEST_CASE("the oracle's measured regret is exactly zero") {
    Rng gen(2);
    const RewardField field =
        RewardField::generate(3, 10, CenterLaw::Gaussian, gen, 0.01);
    SweepCell cell;
    cell.pre_phases = {{3.0, 700}};
    cell.n_q = 700;
    cell.gamma_label = 3.0;
    cell.n_p_label = 700;
    TrialSpec spec;
    spec.field = &field;
    spec.cell = &cell;
    spec.noise = {0.05, false};
    spec.kind = PolicyKind::Oracle;
    spec.adaptive.arms = 3;
    spec.env_seed = 9;

    RegretCurve curve;
    const TrialResult r = run_trial(spec, &curve);
    CHECK(r.regret_q == 0.0);
    CHECK(r.regret_total == 0.0);
    REQUIRE(curve.instantaneous.size() == 1400);
    CHECK(curve.n_p == 700);
    for (double g : curve.instantaneous) CHECK(g == 0.0);
}

TEST_CASE("per-round regret is never negative") {
    Rng gen(3);
    const RewardField field =
        RewardField::generate(3, 10, CenterLaw::Gaussian, gen, 0.01);
    SweepCell cell;
    cell.n_q = 1000;
    TrialSpec spec;
    spec.field = &field;
    spec.cell = &cell;
    spec.noise = {0.05, false};
    spec.kind = PolicyKind::Uniform;
    spec.adaptive.arms = 3;
    spec.env_seed = 4;
    spec.policy_seed = 5;
    RegretCurve curve;
    run_trial(spec, &curve);
    for (double g : curve.instantaneous) CHECK(g >= 0.0);
}

TEST_CASE("structural checks run clean on a noiseless trial") {
    ExperimentConfig cfg = tiny_config();
    cfg.env.noise_sigma = 0.0;
    cfg.check_invariants = true;
    const ExperimentReport report = run_experiment(cfg);
    const InvariantTally t = report.invariant_total();
    CHECK(t.level_rule_checks > 0);
    CHECK(t.level_rule_violations == 0);
    CHECK(t.no_skip_checks > 0);
    CHECK(t.no_skip_violations == 0);
    CHECK(t.balance_events > 0);
    CHECK(t.balance_violations == 0);
    CHECK(t.retention_checks > 0);
    CHECK(t.retention_violations == 0);
    CHECK(t.count_probes == 2 * 1000);
    CHECK(t.count_mismatches == 0);
}

TEST_CASE("reports aggregate to the sample mean and deviation") {
    ExperimentConfig cfg = tiny_config();
    cfg.policies = {PolicyKind::Uniform};
    cfg.trials = 4;
    const ExperimentReport report = run_experiment(cfg);
    const auto& rs = report.results[0][0];
    REQUIRE(rs.size() == 4);
    double mean = 0.0;
    for (const TrialResult& r : rs) mean += r.regret_q;
    mean /= 4.0;
    double ss = 0.0;
    for (const TrialResult& r : rs)
        ss += (r.regret_q - mean) * (r.regret_q - mean);
    const CellAggregate agg = report.aggregate(0, 0);
    CHECK(agg.mean_q == doctest::Approx(mean).epsilon(1e-14));
    CHECK(agg.std_q == doctest::Approx(std::sqrt(ss / 3.0)).epsilon(1e-14));
}

TEST_CASE("a single trial reports zero spread") {
    ExperimentConfig cfg = tiny_config();
    cfg.policies = {PolicyKind::Uniform};
    cfg.trials = 1;
    const ExperimentReport report = run_experiment(cfg);
    CHECK(report.aggregate(0, 0).std_q == 0.0);
}

TEST_CASE("small horizons leave the candidate sets untouched") {
    // At these scales the finest selectable cells are far too coarse for the
    // 8*lambda*r threshold to bite, so the adaptive policy plays uniformly.
    ExperimentConfig cfg = tiny_config();
    const ExperimentReport report = run_experiment(cfg);
    CHECK(report.eliminations_total() == 0);
}
