#include "shiftbandit/config_file.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace shiftbandit {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::string cur;
    std::istringstream in(value);
    while (std::getline(in, cur, ',')) {
        cur = trim(cur);
        if (cur.empty()) throw std::runtime_error("config: empty list item");
        items.push_back(cur);
    }
    if (items.empty()) throw std::runtime_error("config: empty list");
    return items;
}

double parse_double(const std::string& key, const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != s.size())
        throw std::runtime_error("config: bad number for " + key + ": " + s);
    return v;
}

long parse_long(const std::string& key, const std::string& s) {
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(s, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != s.size())
        throw std::runtime_error("config: bad integer for " + key + ": " + s);
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& s) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != s.size())
        throw std::runtime_error("config: bad integer for " + key + ": " + s);
    return v;
}

bool parse_bool(const std::string& key, const std::string& s) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw std::runtime_error("config: bad boolean for " + key + ": " + s);
}

Phase parse_phase(const std::string& item) {
    const std::size_t colon = item.find(':');
    if (colon == std::string::npos)
        throw std::runtime_error("config: phase must be gamma:rounds, got " + item);
    Phase p;
    p.gamma = parse_double("phases", trim(item.substr(0, colon)));
    p.rounds = parse_long("phases", trim(item.substr(colon + 1)));
    return p;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig cfg;
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: line " + std::to_string(lineno) +
                                     ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::runtime_error("config: line " + std::to_string(lineno) +
                                     ": empty key or value");
        if (!seen.insert(key).second)
            throw std::runtime_error("config: repeated key: " + key);

        if (key == "arms") {
            cfg.env.arms = static_cast<int>(parse_long(key, value));
        } else if (key == "bumps") {
            cfg.env.bumps = static_cast<int>(parse_long(key, value));
        } else if (key == "center_law") {
            if (value == "gaussian") cfg.env.center_law = CenterLaw::Gaussian;
            else if (value == "uniform") cfg.env.center_law = CenterLaw::Uniform;
            else throw std::runtime_error("config: center_law must be gaussian or uniform");
        } else if (key == "sigma") {
            cfg.env.noise_sigma = parse_double(key, value);
        } else if (key == "clip_rewards") {
            cfg.env.clip_rewards = parse_bool(key, value);
        } else if (key == "min_bump_radius") {
            cfg.env.min_bump_radius = parse_double(key, value);
        } else if (key == "gammas") {
            cfg.gammas.clear();
            for (const std::string& item : split_list(value))
                cfg.gammas.push_back(parse_double(key, item));
        } else if (key == "n_ps") {
            cfg.n_ps.clear();
            for (const std::string& item : split_list(value))
                cfg.n_ps.push_back(parse_long(key, item));
        } else if (key == "n_q") {
            cfg.n_q = parse_long(key, value);
        } else if (key == "phases") {
            cfg.phases.clear();
            for (const std::string& item : split_list(value))
                cfg.phases.push_back(parse_phase(item));
        } else if (key == "policies") {
            cfg.policies.clear();
            for (const std::string& item : split_list(value))
                cfg.policies.push_back(policy_from_name(item));
        } else if (key == "delta") {
            cfg.delta = parse_double(key, value);
        } else if (key == "lambda") {
            cfg.lambda = value == "auto" ? 0.0 : parse_double(key, value);
            if (value != "auto" && cfg.lambda <= 0.0)
                throw std::runtime_error("config: lambda must be positive or auto");
        } else if (key == "max_depth") {
            cfg.max_depth = static_cast<int>(parse_long(key, value));
        } else if (key == "trials") {
            cfg.trials = static_cast<int>(parse_long(key, value));
        } else if (key == "seed") {
            cfg.seed = parse_u64(key, value);
        } else if (key == "threads") {
            cfg.threads = static_cast<int>(parse_long(key, value));
        } else if (key == "check_invariants") {
            cfg.check_invariants = parse_bool(key, value);
        } else if (key == "out") {
            cfg.out = value;
        } else if (key == "diag_samples") {
            cfg.diag_samples = parse_long(key, value);
        } else if (key == "diag_depths") {
            cfg.diag_depths.clear();
            for (const std::string& item : split_list(value))
                cfg.diag_depths.push_back(static_cast<int>(parse_long(key, item)));
        } else {
            throw std::runtime_error("config: unknown key: " + key);
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig parse_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    return parse_config(in);
}

}  // namespace shiftbandit
