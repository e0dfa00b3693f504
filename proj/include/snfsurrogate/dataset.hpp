/**
 * @file dataset.hpp
 * @brief Uniform input sampling, labelled data generation, splitting and normalisation.
 *
 * Dataset files are comma-separated text: a provenance comment, a header row
 * (five input columns then the 53 output columns, in kInputNames/output_names()
 * order) and one row per sample. A JSON sidecar `<path>.meta.json` stores the
 * seed, sampling ranges, oracle chain version and row count.
 */
#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdint>
#include <filesystem>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "snfsurrogate/errors.hpp"
#include "snfsurrogate/io.hpp"
#include "snfsurrogate/oracle.hpp"
#include "snfsurrogate/parallel.hpp"

namespace snf::dataset {

using oracle::AssemblyInput;

inline constexpr std::size_t kInputDim = AssemblyInput::kDim;
inline constexpr std::size_t kOutputDim = oracle::kOutputCount;

struct Range {
    double lo = 0.0;
    double hi = 0.0;
    bool operator==(const Range&) const = default;
};
using RangeSpec = std::array<Range, kInputDim>;

/// Uniform sampling ranges of the training data.
inline constexpr RangeSpec kTrainingRanges = {
    Range{1.5, 5.5}, Range{5.0, 70.0}, Range{750.0, 950.0}, Range{100.0, 1000.0}, Range{50.0, 3200.0}};

struct Dataset {
    Eigen::MatrixXd inputs;   ///< N x 5
    Eigen::MatrixXd outputs;  ///< N x 53
    std::uint64_t seed = 0;
    RangeSpec ranges = kTrainingRanges;
    std::string oracle_version;

    Eigen::Index rows() const noexcept { return inputs.rows(); }
    bool operator==(const Dataset& o) const {
        return inputs.rows() == o.inputs.rows() && outputs.rows() == o.outputs.rows() &&
               inputs == o.inputs && outputs == o.outputs && seed == o.seed && ranges == o.ranges &&
               oracle_version == o.oracle_version;
    }
};

/// Rows of a dataset selected by index.
inline Eigen::MatrixXd take_rows(const Eigen::MatrixXd& m, const std::vector<std::size_t>& idx) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), m.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(idx[i]));
    return out;
}

inline Eigen::MatrixXd sample_inputs(std::size_t n, const RangeSpec& ranges, std::uint64_t seed) {
    if (n == 0) throw ConfigError("sample count must be positive");
    for (const auto& r : ranges)
        if (!(r.lo < r.hi)) throw ConfigError("sampling range must satisfy lo < hi");
    std::mt19937_64 rng(seed);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(kInputDim));
    for (Eigen::Index i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < kInputDim; ++j) {
            std::uniform_real_distribution<double> u(ranges[j].lo, ranges[j].hi);
            x(i, static_cast<Eigen::Index>(j)) = u(rng);
        }
    return x;
}

/// Labels every input row with the oracle. Rows may be evaluated concurrently;
/// the result order always matches the input order.
inline Eigen::MatrixXd label(const Eigen::MatrixXd& inputs, const oracle::Oracle& model,
                             std::size_t workers = worker_count()) {
    if (inputs.cols() != static_cast<Eigen::Index>(kInputDim)) throw SizeError("inputs must have 5 columns");
    Eigen::MatrixXd out(inputs.rows(), static_cast<Eigen::Index>(kOutputDim));
    try {
        parallel_for(static_cast<std::size_t>(inputs.rows()), workers, [&](std::size_t i) {
            const auto r = static_cast<Eigen::Index>(i);
            std::array<double, kInputDim> a{};
            for (std::size_t j = 0; j < kInputDim; ++j) a[j] = inputs(r, static_cast<Eigen::Index>(j));
            const auto y = model.simulate(AssemblyInput::from_array(a)).to_array();
            for (std::size_t k = 0; k < kOutputDim; ++k) out(r, static_cast<Eigen::Index>(k)) = y[k];
        });
    } catch (const IndexedFailure& f) {
        throw DataError("oracle failed on row " + std::to_string(f.index()) + ": " + f.what());
    }
    return out;
}

inline Dataset generate(std::size_t n, std::uint64_t seed, const RangeSpec& ranges = kTrainingRanges,
                        const oracle::Oracle& model = oracle::default_oracle(),
                        std::size_t workers = worker_count()) {
    Dataset ds;
    ds.inputs = sample_inputs(n, ranges, seed);
    ds.outputs = label(ds.inputs, model, workers);
    ds.seed = seed;
    ds.ranges = ranges;
    ds.oracle_version = model.chain().version();
    return ds;
}

// ---------------------------------------------------------------------------
// Splitting

struct SplitSpec {
    std::size_t test_count = 200;
    double val_fraction = 0.2;
    std::uint64_t seed = 0;
};

struct Splits {
    std::vector<std::size_t> train;
    std::vector<std::size_t> val;
    std::vector<std::size_t> test;
    bool operator==(const Splits&) const = default;
};

/// Seeded shuffle of [0, n); the test block is taken first, then the remainder
/// is divided train/val with round(val_fraction * remainder) validation rows.
inline Splits split(std::size_t n, const SplitSpec& spec) {
    if (n <= spec.test_count + 50)
        throw SizeError("dataset has " + std::to_string(n) + " rows; need more than " +
                        std::to_string(spec.test_count + 50));
    if (!(spec.val_fraction > 0.0 && spec.val_fraction < 1.0))
        throw ConfigError("validation fraction must lie in (0, 1)");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::mt19937_64 rng(spec.seed);
    std::shuffle(perm.begin(), perm.end(), rng);

    const std::size_t rest = n - spec.test_count;
    const auto n_val = static_cast<std::size_t>(std::llround(spec.val_fraction * static_cast<double>(rest)));
    Splits s;
    s.test.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(spec.test_count));
    s.val.assign(perm.begin() + static_cast<std::ptrdiff_t>(spec.test_count),
                 perm.begin() + static_cast<std::ptrdiff_t>(spec.test_count + n_val));
    s.train.assign(perm.begin() + static_cast<std::ptrdiff_t>(spec.test_count + n_val), perm.end());
    return s;
}

inline Splits split(const Dataset& ds, const SplitSpec& spec) {
    return split(static_cast<std::size_t>(ds.rows()), spec);
}

// ---------------------------------------------------------------------------
// Normalisation

/// Per-column mean and population standard deviation.
struct ColumnStats {
    Eigen::VectorXd mean;
    Eigen::VectorXd std;

    static ColumnStats fit(const Eigen::MatrixXd& x) {
        if (x.rows() == 0) throw SizeError("cannot fit normalisation on zero rows");
        ColumnStats s;
        s.mean = x.colwise().mean().transpose();
        const Eigen::MatrixXd centred = x.rowwise() - s.mean.transpose();
        s.std = (centred.array().square().colwise().sum() / static_cast<double>(x.rows())).sqrt().transpose();
        for (Eigen::Index j = 0; j < s.std.size(); ++j)
            if (!(s.std(j) > 0.0)) s.std(j) = 1.0;
        return s;
    }

    Eigen::MatrixXd normalize(const Eigen::MatrixXd& x) const {
        check(x);
        return (x.rowwise() - mean.transpose()).array().rowwise() / std.transpose().array();
    }
    Eigen::MatrixXd denormalize(const Eigen::MatrixXd& z) const {
        check(z);
        return (z.array().rowwise() * std.transpose().array()).matrix().rowwise() + mean.transpose();
    }

    bool operator==(const ColumnStats& o) const { return mean == o.mean && std == o.std; }

private:
    void check(const Eigen::MatrixXd& x) const {
        if (x.cols() != mean.size())
            throw SizeError("normalisation expects " + std::to_string(mean.size()) + " columns, got " +
                            std::to_string(x.cols()));
    }
};

struct NormStats {
    ColumnStats input;
    ColumnStats output;
    bool operator==(const NormStats&) const = default;
};

/// Statistics of the training rows only.
inline NormStats fit_norm(const Dataset& ds, const std::vector<std::size_t>& train) {
    if (train.empty()) throw SizeError("training index set is empty");
    return {ColumnStats::fit(take_rows(ds.inputs, train)), ColumnStats::fit(take_rows(ds.outputs, train))};
}

// ---------------------------------------------------------------------------
// Persistence

inline std::vector<std::string> column_names() {
    std::vector<std::string> names(oracle::kInputNames.begin(), oracle::kInputNames.end());
    for (auto& n : oracle::output_names()) names.push_back(std::move(n));
    return names;
}

inline std::string sidecar_path(const std::string& path) { return path + ".meta.json"; }

inline void save(const Dataset& ds, const std::string& path) {
    if (ds.inputs.rows() != ds.outputs.rows()) throw SizeError("input and output row counts differ");
    std::string text = provenance_line(ds.seed);
    const auto names = column_names();
    for (std::size_t i = 0; i < names.size(); ++i) text += (i ? "," : "") + names[i];
    text += '\n';
    for (Eigen::Index r = 0; r < ds.rows(); ++r) {
        for (Eigen::Index c = 0; c < ds.inputs.cols(); ++c) {
            if (c) text += ',';
            text += format_double(ds.inputs(r, c));
        }
        for (Eigen::Index c = 0; c < ds.outputs.cols(); ++c) {
            text += ',';
            text += format_double(ds.outputs(r, c));
        }
        text += '\n';
    }
    write_file(path, text);

    nlohmann::ordered_json meta;
    meta["format"] = "snf-dataset";
    meta["format_version"] = 1;
    meta["tool_version"] = kToolVersion;
    meta["seed"] = ds.seed;
    meta["rows"] = ds.rows();
    meta["oracle_version"] = ds.oracle_version;
    for (std::size_t j = 0; j < kInputDim; ++j)
        meta["ranges"][oracle::kInputNames[j]] = {ds.ranges[j].lo, ds.ranges[j].hi};
    write_file(sidecar_path(path), meta.dump(2) + "\n");
}

inline Dataset load(const std::string& path) {
    const std::string text = read_file(path);
    Dataset ds;
    std::vector<std::array<double, kInputDim + kOutputDim>> rows;
    const auto names = column_names();
    bool have_header = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        const bool terminated = end != std::string::npos;
        if (!terminated) end = text.size();
        std::string_view line(text.data() + pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        const auto fields = split_fields(line);
        if (!have_header) {
            if (fields != names) throw ParseError("dataset header does not match the documented column order", line_no);
            have_header = true;
            continue;
        }
        if (fields.size() != names.size())
            throw ParseError("expected " + std::to_string(names.size()) + " fields, found " +
                             std::to_string(fields.size()), line_no);
        if (!terminated) throw ParseError("truncated final row", line_no);
        std::array<double, kInputDim + kOutputDim> row{};
        for (std::size_t i = 0; i < row.size(); ++i) row[i] = parse_double(fields[i], line_no);
        rows.push_back(row);
    }
    if (!have_header) throw ParseError("dataset file has no header row", line_no);

    ds.inputs.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(kInputDim));
    ds.outputs.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(kOutputDim));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t j = 0; j < kInputDim; ++j)
            ds.inputs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = rows[r][j];
        for (std::size_t k = 0; k < kOutputDim; ++k)
            ds.outputs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = rows[r][kInputDim + k];
    }

    const auto meta_path = sidecar_path(path);
    if (!std::filesystem::exists(meta_path)) throw ParseError("missing dataset sidecar '" + meta_path + "'");
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(read_file(meta_path));
        if (meta.at("format") != "snf-dataset" || meta.at("format_version") != 1)
            throw ParseError("unsupported dataset sidecar format");
        ds.seed = meta.at("seed").get<std::uint64_t>();
        ds.oracle_version = meta.at("oracle_version").get<std::string>();
        for (std::size_t j = 0; j < kInputDim; ++j) {
            const auto& r = meta.at("ranges").at(oracle::kInputNames[j]);
            ds.ranges[j] = {r.at(0).get<double>(), r.at(1).get<double>()};
        }
        if (meta.at("rows").get<std::size_t>() != rows.size())
            throw ParseError("dataset has " + std::to_string(rows.size()) + " rows but sidecar records " +
                             std::to_string(meta.at("rows").get<std::size_t>()));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed dataset sidecar: ") + e.what());
    }
    return ds;
}

}  // namespace snf::dataset
