/**
 * @file bench.hpp
 * @brief Timing probes, the break-even speedup model and C/E comparison.
 *
 * Speedup of a trained network over direct simulation for n evaluations:
 *
 *     S(n) = n T_C / (T_train + n T_eval + N_train T_C)
 */
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "snfsurrogate/errors.hpp"
#include "snfsurrogate/io.hpp"

namespace snf::bench {

struct TimeConstants {
    double t_oracle = 0.0;  ///< seconds per simulation
    double t_train = 0.0;   ///< seconds to train the network
    double t_eval = 0.0;    ///< seconds per network prediction
    double n_train = 0.0;   ///< simulations spent on training data
    double t_oracle_std = 0.0;
    double t_train_std = 0.0;
    double t_eval_std = 0.0;

    void validate() const {
        for (double v : {t_oracle, t_train, t_eval, n_train})
            if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("time constants must be positive");
    }
};

/// Constants reported for the reference workstation.
inline TimeConstants reference_constants() {
    TimeConstants c;
    c.t_oracle = 58.0;
    c.t_train = 105.0;
    c.t_eval = 5e-4;
    c.n_train = 500.0;
    c.t_oracle_std = 11.0;
    c.t_train_std = 0.6;
    c.t_eval_std = 0.4e-4;
    return c;
}

inline double speedup(double n, const TimeConstants& c) {
    if (!(n >= 1.0)) throw ConfigError("speedup needs n >= 1");
    c.validate();
    return n * c.t_oracle / (c.t_train + n * c.t_eval + c.n_train * c.t_oracle);
}

/// Evaluation count at which S(n) = 1; infinite when the network never pays off.
inline double break_even(const TimeConstants& c) {
    c.validate();
    const double slope = c.t_oracle - c.t_eval;
    if (slope <= 0.0) return std::numeric_limits<double>::infinity();
    return (c.t_train + c.n_train * c.t_oracle) / slope;
}

struct Timing {
    double mean = 0.0;
    double std = 0.0;
};

/// Wall time of `fn` over `probes` calls after `warmup` discarded calls.
inline Timing time_calls(const std::function<void()>& fn, std::size_t probes, std::size_t warmup = 3) {
    if (probes < 1) throw ConfigError("need at least one timing probe");
    for (std::size_t i = 0; i < warmup; ++i) fn();
    std::vector<double> t(probes);
    for (auto& s : t) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    Timing r;
    for (double s : t) r.mean += s;
    r.mean /= static_cast<double>(probes);
    if (probes > 1) {
        double ss = 0.0;
        for (double s : t) ss += (s - r.mean) * (s - r.mean);
        r.std = std::sqrt(ss / static_cast<double>(probes - 1));
    }
    return r;
}

/// Per-call oracle and network times; training time and size are taken from the model record.
inline TimeConstants measure_times(const std::function<void()>& oracle_call, const std::function<void()>& model_call,
                                   std::size_t probes, double t_train, double n_train) {
    const Timing o = time_calls(oracle_call, probes);
    const Timing m = time_calls(model_call, probes);
    TimeConstants c;
    c.t_oracle = o.mean;
    c.t_oracle_std = o.std;
    c.t_eval = m.mean;
    c.t_eval_std = m.std;
    c.t_train = t_train;
    c.n_train = n_train;
    return c;
}

// ---------------------------------------------------------------------------
// C/E comparison

struct MeasurementRecord {
    std::string assembly_id;
    std::string group;
    double cooling_years = 0.0;
    double decay_heat = 0.0;  ///< W/tU
};

inline std::vector<MeasurementRecord> parse_measurements(const std::string& text) {
    std::vector<MeasurementRecord> out;
    std::size_t line_no = 0;
    bool header = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        const std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.empty() || line == "\r" || line.front() == '#') continue;
        const auto f = split_fields(line);
        if (!header) {
            if (f != std::vector<std::string>{"assembly_id", "group", "cooling_years", "decay_heat_W_per_tU"})
                throw ParseError("expected header 'assembly_id,group,cooling_years,decay_heat_W_per_tU'", line_no);
            header = true;
            continue;
        }
        if (f.size() != 4) throw ParseError("expected 4 fields, got " + std::to_string(f.size()), line_no);
        MeasurementRecord r{f[0], f[1], parse_double(f[2], line_no), parse_double(f[3], line_no)};
        if (r.assembly_id.empty()) throw ParseError("empty assembly id", line_no);
        if (!(r.cooling_years > 0.0) || !(r.decay_heat > 0.0))
            throw ParseError("cooling time and decay heat must be positive", line_no);
        out.push_back(std::move(r));
    }
    if (!header) throw ParseError("measurement file has no header", line_no);
    return out;
}

inline std::vector<MeasurementRecord> load_measurements(const std::string& path) {
    return parse_measurements(read_file(path));
}

struct CeRecord {
    std::string assembly_id;
    std::string group;
    double calculated = 0.0;
    double measured = 0.0;
    double ratio = 0.0;
};

struct CeReport {
    std::vector<CeRecord> records;
    std::map<std::string, double> group_bias_pct;  ///< mean(C/E - 1) * 100 per group
};

inline CeReport ce_compare(const std::map<std::string, double>& predictions,
                           const std::vector<MeasurementRecord>& measurements) {
    std::set<std::string> missing;
    for (const auto& m : measurements)
        if (!predictions.contains(m.assembly_id)) missing.insert(m.assembly_id);
    if (!missing.empty()) {
        std::string ids;
        for (const auto& id : missing) ids += (ids.empty() ? "" : ", ") + id;
        throw DataError("no prediction for assembly ids: " + ids);
    }
    CeReport rep;
    std::map<std::string, std::pair<double, std::size_t>> acc;
    for (const auto& m : measurements) {
        const double c = predictions.at(m.assembly_id);
        if (!(c > 0.0)) throw DataError("prediction for '" + m.assembly_id + "' must be positive");
        const double ratio = c / m.decay_heat;
        rep.records.push_back({m.assembly_id, m.group, c, m.decay_heat, ratio});
        auto& [sum, count] = acc[m.group];
        sum += ratio - 1.0;
        ++count;
    }
    for (const auto& [g, a] : acc) rep.group_bias_pct[g] = 100.0 * a.first / static_cast<double>(a.second);
    return rep;
}

/// Predictions file: `assembly_id, decay_heat_W_per_tU`.
inline std::map<std::string, double> parse_predictions(const std::string& text) {
    std::map<std::string, double> out;
    std::size_t line_no = 0;
    bool header = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        const std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.empty() || line == "\r" || line.front() == '#') continue;
        const auto f = split_fields(line);
        if (!header) {
            if (f != std::vector<std::string>{"assembly_id", "decay_heat_W_per_tU"})
                throw ParseError("expected header 'assembly_id,decay_heat_W_per_tU'", line_no);
            header = true;
            continue;
        }
        if (f.size() != 2) throw ParseError("expected 2 fields, got " + std::to_string(f.size()), line_no);
        if (!out.emplace(f[0], parse_double(f[1], line_no)).second)
            throw ParseError("duplicate assembly id '" + f[0] + "'", line_no);
    }
    if (!header) throw ParseError("prediction file has no header", line_no);
    return out;
}

}  // namespace snf::bench
