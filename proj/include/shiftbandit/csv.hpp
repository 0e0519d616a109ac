#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "shiftbandit/experiment.hpp"

namespace shiftbandit {

// Row layout, one line per trial then one aggregate line per (policy, cell):
//   policy,gamma,n_p,n_q,trial,seed,regret_q,regret_total,runtime_ms
//   policy,gamma,n_p,n_q,AGG,mean_regret_q,std_regret_q,trials
// Trials are 0-based; doubles are printed with %.12g so parsed values
// round-trip; row order is (policy, cell, trial) in report order.

struct CsvTrialRow {
    std::string policy;
    double gamma = 0.0;
    long n_p = 0;
    long n_q = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    double regret_q = 0.0;
    double regret_total = 0.0;
    double runtime_ms = 0.0;
};

struct CsvAggregateRow {
    std::string policy;
    double gamma = 0.0;
    long n_p = 0;
    long n_q = 0;
    double mean_regret_q = 0.0;
    double std_regret_q = 0.0;
    int trials = 0;
};

struct CsvDocument {
    std::vector<CsvTrialRow> trials;
    std::vector<CsvAggregateRow> aggregates;
};

void write_csv(const ExperimentReport& report, std::ostream& out);
std::string csv_string(const ExperimentReport& report);
void write_csv_file(const ExperimentReport& report, const std::string& path);

CsvDocument parse_csv(std::istream& in);  // throws std::runtime_error on malformed input
CsvDocument parse_csv_string(const std::string& text);

}  // namespace shiftbandit
