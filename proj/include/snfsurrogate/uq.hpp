/**
 * @file uq.hpp
 * @brief Monte-Carlo uncertainty propagation with normal input perturbations.
 */
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "snfsurrogate/errors.hpp"
#include "snfsurrogate/history.hpp"
#include "snfsurrogate/seeding.hpp"

namespace snf::analysis {

/// Maps an N x 5 matrix of raw inputs to an N x K matrix of outputs.
using Evaluator = std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>;

struct UqSpec {
    oracle::AssemblyInput center;
    double rel_std = 0.05;
    std::size_t n_samples = 1000;
    std::uint64_t seed = 0;

    void validate() const {
        center.validate();
        if (!(rel_std > 0.0) || !std::isfinite(rel_std)) throw ConfigError("relative std must be positive");
        if (n_samples < 2) throw ConfigError("UQ needs at least 2 samples");
    }
};

/// Independent normal draws per input with mean = center and std = rel_std * center.
/// Non-positive draws are rejected and redrawn.
inline Eigen::MatrixXd sample_normal(const UqSpec& spec) {
    spec.validate();
    const auto c = spec.center.to_array();
    std::mt19937_64 rng(spec.seed);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(spec.n_samples), static_cast<Eigen::Index>(c.size()));
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < c.size(); ++j) {
            std::normal_distribution<double> dist(c[j], spec.rel_std * c[j]);
            double v = dist(rng);
            while (!(v > 0.0)) v = dist(rng);
            x(i, static_cast<Eigen::Index>(j)) = v;
        }
    return x;
}

inline double sample_std(const Eigen::Ref<const Eigen::VectorXd>& v) {
    const double mean = v.mean();
    return std::sqrt((v.array() - mean).square().sum() / static_cast<double>(v.size() - 1));
}

struct BootstrapSummary {
    double mean_of_std = 0.0;
    double var_of_std = 0.0;
};

/// Resamples the columns' rows with replacement `resamples` times and summarises
/// the distribution of the sample standard deviation of every column. The same
/// resampled row sets are shared by all columns.
inline std::vector<BootstrapSummary> bootstrap_std(const Eigen::MatrixXd& samples, std::size_t resamples,
                                                   std::uint64_t seed) {
    if (samples.rows() < 2) throw SizeError("bootstrap needs at least 2 samples");
    if (resamples < 1) throw ConfigError("bootstrap needs at least 1 resample");
    const auto n = samples.rows();
    const auto k = samples.cols();
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
    // Shifting by the column mean leaves the std unchanged and avoids cancellation.
    const Eigen::MatrixXd centred = samples.rowwise() - samples.colwise().mean();
    const Eigen::MatrixXd centred_sq = centred.array().square().matrix();
    Eigen::VectorXd weight(n);
    Eigen::MatrixXd stats(static_cast<Eigen::Index>(resamples), k);
    for (std::size_t r = 0; r < resamples; ++r) {
        weight.setZero();
        for (Eigen::Index i = 0; i < n; ++i) weight(pick(rng)) += 1.0;
        const Eigen::ArrayXd mean = (centred.transpose() * weight).array() / static_cast<double>(n);
        const Eigen::ArrayXd s2 = (centred_sq.transpose() * weight).array();
        const Eigen::ArrayXd var = ((s2 - static_cast<double>(n) * mean.square()) / static_cast<double>(n - 1)).max(0.0);
        stats.row(static_cast<Eigen::Index>(r)) = var.sqrt().transpose();
    }
    std::vector<BootstrapSummary> out(static_cast<std::size_t>(k));
    for (Eigen::Index j = 0; j < k; ++j) {
        const Eigen::VectorXd col = stats.col(j);
        out[static_cast<std::size_t>(j)].mean_of_std = col.mean();
        out[static_cast<std::size_t>(j)].var_of_std =
            resamples > 1 ? (col.array() - col.mean()).square().sum() / static_cast<double>(resamples - 1) : 0.0;
    }
    return out;
}

inline BootstrapSummary bootstrap_std(const Eigen::VectorXd& samples, std::size_t resamples, std::uint64_t seed) {
    return bootstrap_std(Eigen::MatrixXd(samples), resamples, seed).front();
}

/// Per-output statistics of one evaluator on one sample set.
struct UqResult {
    Eigen::MatrixXd outputs;  ///< N x K evaluations
    Eigen::VectorXd mean;
    Eigen::VectorXd std;      ///< sample standard deviation (N - 1)
    Eigen::VectorXd rel_std;  ///< std / |mean|, 0 when std is 0
    std::vector<BootstrapSummary> bootstrap;
};

struct UqOptions {
    std::size_t bootstrap_resamples = 10000;
};

/// Evaluates `inputs` and summarises every output column.
inline UqResult run_uq(const Evaluator& evaluator, const Eigen::MatrixXd& inputs, std::uint64_t seed,
                       const UqOptions& opt = {}) {
    if (inputs.rows() < 2) throw SizeError("UQ needs at least 2 samples");
    UqResult r;
    r.outputs = evaluator(inputs);
    if (r.outputs.rows() != inputs.rows()) throw SizeError("evaluator returned the wrong number of rows");
    for (Eigen::Index i = 0; i < r.outputs.rows(); ++i)
        if (!r.outputs.row(i).allFinite())
            throw DataError("evaluator returned a non-finite value for sample " + std::to_string(i));
    const auto k = r.outputs.cols();
    r.mean.resize(k);
    r.std.resize(k);
    r.rel_std.resize(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        r.mean(j) = r.outputs.col(j).mean();
        r.std(j) = sample_std(r.outputs.col(j));
        r.rel_std(j) = r.std(j) == 0.0 ? 0.0 : r.std(j) / std::abs(r.mean(j));
    }
    r.bootstrap = bootstrap_std(r.outputs, opt.bootstrap_resamples, derive_seed(seed, 11));
    return r;
}

inline UqResult run_uq(const Evaluator& evaluator, const UqSpec& spec, const UqOptions& opt = {}) {
    return run_uq(evaluator, sample_normal(spec), spec.seed, opt);
}

// ---------------------------------------------------------------------------
// Histograms

/// Shared bin edges for one output across several evaluators.
struct Histogram {
    std::vector<double> edges;                       ///< bins + 1 edges
    std::vector<std::vector<std::size_t>> counts;    ///< one row per evaluator
};

/// Type-7 (linear interpolation) sample quantile of sorted data.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// Freedman-Diaconis binning on the pooled samples of every evaluator.
inline Histogram histogram(const std::vector<Eigen::VectorXd>& series, std::size_t max_bins = 200) {
    if (series.empty()) throw SizeError("histogram needs at least one series");
    std::vector<double> pooled;
    for (const auto& s : series) pooled.insert(pooled.end(), s.data(), s.data() + s.size());
    if (pooled.empty()) throw SizeError("histogram of empty data");
    std::sort(pooled.begin(), pooled.end());
    const double lo = pooled.front();
    const double hi = pooled.back();
    const double iqr = quantile_sorted(pooled, 0.75) - quantile_sorted(pooled, 0.25);
    std::size_t bins = 1;
    if (hi > lo && iqr > 0.0) {
        const double width = 2.0 * iqr / std::cbrt(static_cast<double>(pooled.size()));
        bins = std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil((hi - lo) / width)), 1, max_bins);
    }
    Histogram h;
    h.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
    h.edges.back() = hi;
    for (const auto& s : series) {
        std::vector<std::size_t> c(bins, 0);
        for (Eigen::Index i = 0; i < s.size(); ++i) {
            std::size_t b = hi > lo ? static_cast<std::size_t>((s(i) - lo) / (hi - lo) * static_cast<double>(bins)) : 0;
            ++c[std::min(b, bins - 1)];
        }
        h.counts.push_back(std::move(c));
    }
    return h;
}

}  // namespace snf::analysis
