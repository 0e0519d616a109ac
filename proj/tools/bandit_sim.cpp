#include <cstdio>
#include <fstream>
#include <iostream>
#include <vector>

#include <CLI11.hpp>

#include "shiftbandit/config_file.hpp"
#include "shiftbandit/csv.hpp"
#include "shiftbandit/diagnostics.hpp"
#include "shiftbandit/experiment.hpp"

namespace sb = shiftbandit;

namespace {

struct Overrides {
    int trials = 0;
    std::uint64_t seed = 0;
    std::string out;
    int threads = -1;
    bool check_invariants = false;

    bool has_trials = false;
    bool has_seed = false;
    bool has_out = false;
    bool has_threads = false;
    bool has_checks = false;
};

void add_common_flags(CLI::App* cmd, std::string& config_path, Overrides& ov) {
    cmd->add_option("config", config_path, "experiment config file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--trials", ov.trials, "override trial count")
        ->check(CLI::PositiveNumber)
        ->each([&](const std::string&) { ov.has_trials = true; });
    cmd->add_option("--seed", ov.seed, "override base seed")
        ->each([&](const std::string&) { ov.has_seed = true; });
    cmd->add_option("--out", ov.out, "output file (default: stdout)")
        ->each([&](const std::string&) { ov.has_out = true; });
    cmd->add_option("--threads", ov.threads, "worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber)
        ->each([&](const std::string&) { ov.has_threads = true; });
    cmd->add_flag("--check-invariants", ov.check_invariants,
                  "run per-round structural checks on the adaptive policy")
        ->each([&](const std::string&) { ov.has_checks = true; });
}

sb::ExperimentConfig load_with_overrides(const std::string& path,
                                         const Overrides& ov) {
    sb::ExperimentConfig cfg = sb::load_config(path);
    if (ov.has_trials) cfg.trials = ov.trials;
    if (ov.has_seed) cfg.seed = ov.seed;
    if (ov.has_out) cfg.out = ov.out;
    if (ov.has_threads) cfg.threads = ov.threads;
    if (ov.has_checks) cfg.check_invariants = ov.check_invariants;
    cfg.validate();
    return cfg;
}

int cmd_run(const std::string& config_path, const Overrides& ov) {
    const sb::ExperimentConfig cfg = load_with_overrides(config_path, ov);
    const sb::ExperimentReport report = sb::run_experiment(cfg);

    if (cfg.out.empty())
        sb::write_csv(report, std::cout);
    else
        sb::write_csv_file(report, cfg.out);

    for (std::size_t p = 0; p < report.policies.size(); ++p)
        for (std::size_t c = 0; c < report.cells.size(); ++c) {
            const sb::CellAggregate agg = report.aggregate(p, c);
            const sb::SweepCell& cell = report.cells[c];
            std::fprintf(stderr,
                         "%-14s gamma=%-4g n_p=%-7ld n_q=%-7ld "
                         "mean_regret_q=%.4f std=%.4f\n",
                         std::string(sb::policy_name(report.policies[p])).c_str(),
                         cell.gamma_label, cell.n_p_label, cell.n_q, agg.mean_q,
                         agg.std_q);
        }
    std::fprintf(stderr, "eliminations_total=%llu\n",
                 static_cast<unsigned long long>(report.eliminations_total()));
    if (cfg.check_invariants) {
        const sb::InvariantTally t = report.invariant_total();
        std::fprintf(stderr,
                     "invariants: level_rule %llu/%llu no_skip %llu/%llu "
                     "balance %llu/%llu retention %llu/%llu counts %llu/%llu "
                     "(violations/checks)\n",
                     static_cast<unsigned long long>(t.level_rule_violations),
                     static_cast<unsigned long long>(t.level_rule_checks),
                     static_cast<unsigned long long>(t.no_skip_violations),
                     static_cast<unsigned long long>(t.no_skip_checks),
                     static_cast<unsigned long long>(t.balance_violations),
                     static_cast<unsigned long long>(t.balance_events),
                     static_cast<unsigned long long>(t.retention_violations),
                     static_cast<unsigned long long>(t.retention_checks),
                     static_cast<unsigned long long>(t.count_mismatches),
                     static_cast<unsigned long long>(t.count_probes));
    }
    return 0;
}

int cmd_diagnose(const std::string& config_path, const Overrides& ov) {
    const sb::ExperimentConfig cfg = load_with_overrides(config_path, ov);

    std::ofstream file;
    std::ostream* sink = &std::cout;
    if (!cfg.out.empty()) {
        file.open(cfg.out);
        if (!file) {
            std::fprintf(stderr, "cannot open %s\n", cfg.out.c_str());
            return 1;
        }
        sink = &file;
    }
    std::ostream& out = *sink;

    sb::Rng field_rng(sb::derive_seed(cfg.seed, sb::tag_hash("field")));
    const sb::RewardField field =
        sb::RewardField::generate(cfg.env.arms, cfg.env.bumps, cfg.env.center_law,
                                  field_rng, cfg.env.min_bump_radius);

    out << "# field\n";
    out << "arms=" << cfg.env.arms << " bumps=" << field.bumps().size()
        << " lipschitz_bound=" << field.lipschitz_bound() << "\n";
    double min_radius = 1.0;
    for (const sb::Bump& b : field.bumps()) min_radius = std::min(min_radius, b.radius);
    out << "min_bump_radius=" << min_radius << "\n\n";

    const std::size_t n = static_cast<std::size_t>(cfg.diag_samples);
    std::vector<std::array<double, 2>> q_samples(n);
    {
        sb::Rng rng(sb::derive_seed(cfg.seed, sb::tag_hash("diag-q")));
        const sb::CovariateSampler q = sb::CovariateSampler::uniform();
        for (auto& x : q_samples) x = q.sample(rng);
    }

    std::vector<double> gammas = cfg.gammas;
    if (!cfg.phases.empty()) {
        gammas.clear();
        for (const sb::Phase& ph : cfg.phases) gammas.push_back(ph.gamma);
        const sb::ShiftSchedule sched(cfg.phases, cfg.n_q);
        out << "# schedule\n";
        out << "n_p=" << sched.n_p() << " n_q=" << sched.n_q()
            << " gamma_bar=" << sched.gamma_bar() << "\n\n";
    }

    std::vector<std::array<double, 2>> p_samples(n);
    for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
        sb::Rng rng(sb::derive_seed(cfg.seed, sb::tag_hash("diag-p"), gi));
        const sb::CovariateSampler p = sb::CovariateSampler::radial_power(gammas[gi]);
        for (auto& x : p_samples) x = p.sample(rng);

        const sb::ShiftProfile prof = sb::estimate_transfer_exponent(
            p_samples, q_samples, cfg.diag_depths);
        out << "# transfer gamma=" << gammas[gi] << "\n";
        out << "depth r min_ratio q_bins\n";
        for (const sb::ShiftProfileRow& row : prof.rows)
            out << row.depth << " " << row.r << " " << row.min_ratio << " "
                << row.q_bins << "\n";
        if (prof.infinite)
            out << "gamma_hat=inf\n\n";
        else
            out << "gamma_hat=" << prof.gamma_hat << " c_gamma=" << prof.c_gamma
                << "\n\n";

        const auto boxes = sb::box_counting(p_samples, cfg.diag_depths);
        out << "# box_count gamma=" << gammas[gi] << "\n";
        out << "depth occupied\n";
        for (const auto& [depth, cells] : boxes)
            out << depth << " " << cells << "\n";
        out << "\n";
    }

    {
        sb::Rng rng(sb::derive_seed(cfg.seed, sb::tag_hash("diag-margin")));
        const std::vector<double> thresholds{0.01, 0.02, 0.03, 0.05, 0.08, 0.1,
                                             0.15, 0.2,  0.3,  0.4,  0.5};
        const sb::MarginProfile margin = sb::empirical_margin_cdf(
            field, sb::CovariateSampler::uniform(), rng, n, thresholds);
        out << "# margin\n";
        out << "threshold cdf\n";
        for (std::size_t j = 0; j < margin.thresholds.size(); ++j)
            out << margin.thresholds[j] << " " << margin.cdf[j] << "\n";
        out << "alpha_hat=" << margin.alpha_hat << " c_alpha=" << margin.c_alpha
            << "\n\n";

        out << "# oracle_level alpha=" << margin.alpha_hat << " d=2\n";
        out << "gamma t_minus_np level r\n";
        for (double g : gammas)
            for (long tau : {100L, 1000L, 10000L, 30000L}) {
                const long n_p = cfg.n_ps.empty() ? 0 : cfg.n_ps.back();
                const int level =
                    sb::oracle_level(n_p + tau + 1, n_p, cfg.env.arms, cfg.delta,
                                     margin.alpha_hat, 2.0, g);
                out << g << " " << tau << " " << level << " "
                    << sb::level_side(level) << "\n";
            }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"contextual bandit simulator: adaptive dyadic elimination vs "
                 "baselines under covariate shift"};
    app.require_subcommand(1);

    std::string run_config, diag_config;
    Overrides run_ov, diag_ov;
    CLI::App* run = app.add_subcommand("run", "run an experiment sweep, emit CSV");
    add_common_flags(run, run_config, run_ov);
    CLI::App* diag =
        app.add_subcommand("diagnose", "profile the environment only");
    add_common_flags(diag, diag_config, diag_ov);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_config, run_ov);
        return cmd_diagnose(diag_config, diag_ov);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
