#include "shiftbandit/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace shiftbandit {

namespace {

constexpr const char* kHeader =
    "policy,gamma,n_p,n_q,trial,seed,regret_q,regret_total,runtime_ms";

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

double to_double(const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw std::runtime_error("csv: bad number: " + s);
}

long to_long(const std::string& s) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(s, &pos);
        if (pos == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw std::runtime_error("csv: bad integer: " + s);
}

std::uint64_t to_u64(const std::string& s) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(s, &pos);
        if (pos == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw std::runtime_error("csv: bad seed: " + s);
}

}  // namespace

void write_csv(const ExperimentReport& report, std::ostream& out) {
    out << kHeader << '\n';
    for (std::size_t p = 0; p < report.policies.size(); ++p)
        for (std::size_t c = 0; c < report.cells.size(); ++c) {
            const SweepCell& cell = report.cells[c];
            const auto& rs = report.results[p][c];
            for (std::size_t t = 0; t < rs.size(); ++t) {
                const TrialResult& r = rs[t];
                out << policy_name(report.policies[p]) << ','
                    << fmt_double(cell.gamma_label) << ',' << cell.n_p_label << ','
                    << cell.n_q << ',' << t << ',' << r.seed << ','
                    << fmt_double(r.regret_q) << ',' << fmt_double(r.regret_total)
                    << ',' << fmt_double(r.runtime_ms) << '\n';
            }
        }
    for (std::size_t p = 0; p < report.policies.size(); ++p)
        for (std::size_t c = 0; c < report.cells.size(); ++c) {
            const SweepCell& cell = report.cells[c];
            const CellAggregate agg = report.aggregate(p, c);
            out << policy_name(report.policies[p]) << ','
                << fmt_double(cell.gamma_label) << ',' << cell.n_p_label << ','
                << cell.n_q << ",AGG," << fmt_double(agg.mean_q) << ','
                << fmt_double(agg.std_q) << ',' << report.results[p][c].size()
                << '\n';
        }
}

std::string csv_string(const ExperimentReport& report) {
    std::ostringstream out;
    write_csv(report, out);
    return out.str();
}

void write_csv_file(const ExperimentReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("csv: cannot open " + path);
    write_csv(report, out);
}

CsvDocument parse_csv(std::istream& in) {
    CsvDocument doc;
    std::string line;
    bool saw_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!saw_header) {
            if (line != kHeader) throw std::runtime_error("csv: bad header");
            saw_header = true;
            continue;
        }
        const std::vector<std::string> f = split_fields(line);
        if (f.size() < 5) throw std::runtime_error("csv: short row: " + line);
        if (f[4] == "AGG") {
            if (f.size() != 8) throw std::runtime_error("csv: bad aggregate row");
            CsvAggregateRow row;
            row.policy = f[0];
            row.gamma = to_double(f[1]);
            row.n_p = to_long(f[2]);
            row.n_q = to_long(f[3]);
            row.mean_regret_q = to_double(f[5]);
            row.std_regret_q = to_double(f[6]);
            row.trials = static_cast<int>(to_long(f[7]));
            doc.aggregates.push_back(std::move(row));
        } else {
            if (f.size() != 9) throw std::runtime_error("csv: bad trial row");
            CsvTrialRow row;
            row.policy = f[0];
            row.gamma = to_double(f[1]);
            row.n_p = to_long(f[2]);
            row.n_q = to_long(f[3]);
            row.trial = static_cast<int>(to_long(f[4]));
            row.seed = to_u64(f[5]);
            row.regret_q = to_double(f[6]);
            row.regret_total = to_double(f[7]);
            row.runtime_ms = to_double(f[8]);
            doc.trials.push_back(std::move(row));
        }
    }
    if (!saw_header) throw std::runtime_error("csv: empty input");
    return doc;
}

CsvDocument parse_csv_string(const std::string& text) {
    std::istringstream in(text);
    return parse_csv(in);
}

}  // namespace shiftbandit
