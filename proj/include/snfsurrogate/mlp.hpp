/**
 * @file mlp.hpp
 * @brief Fully connected ReLU network with a linear output layer.
 *
 * Layer l maps a_{l-1} to z_l = W_l a_{l-1} + b_l, with W_l stored as an
 * (out x in) matrix. Hidden layers apply ReLU, the output layer is affine.
 * Public entry points take row-per-sample matrices; internally samples are
 * columns.
 */
#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "snfsurrogate/dataset.hpp"
#include "snfsurrogate/errors.hpp"
#include "snfsurrogate/io.hpp"
#include "snfsurrogate/oracle.hpp"

namespace snf::surrogate {

struct MlpArchitecture {
    std::size_t input_dim = dataset::kInputDim;
    std::size_t output_dim = dataset::kOutputDim;
    std::size_t hidden_layers = 1;
    std::size_t hidden_dim = 64;

    void validate() const {
        if (input_dim == 0 || output_dim == 0 || hidden_dim == 0)
            throw ConfigError("network dimensions must be positive");
        if (hidden_layers < 1) throw ConfigError("network needs at least one hidden layer");
    }

    /// Widths from input to output: {in, h, ..., h, out}.
    std::vector<std::size_t> widths() const {
        std::vector<std::size_t> w{input_dim};
        w.insert(w.end(), hidden_layers, hidden_dim);
        w.push_back(output_dim);
        return w;
    }

    bool operator==(const MlpArchitecture&) const = default;
};

struct Layer {
    Eigen::MatrixXd weight;  ///< out x in
    Eigen::VectorXd bias;    ///< out
    bool operator==(const Layer& o) const { return weight == o.weight && bias == o.bias; }
};

struct MlpModel {
    MlpArchitecture arch;
    std::vector<Layer> layers;
    dataset::NormStats norm;
    std::uint64_t train_seed = 0;
    bool trained = false;
    double train_seconds = 0.0;       ///< wall time of the training run
    std::size_t train_samples = 0;    ///< rows used for training + validation

    std::size_t parameter_count() const {
        std::size_t n = 0;
        for (const auto& l : layers) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
        return n;
    }
    bool operator==(const MlpModel&) const = default;
};

/// Kaiming-uniform weights, U(-sqrt(6/fan_in), sqrt(6/fan_in)); zero biases.
inline MlpModel init(const MlpArchitecture& arch, std::uint64_t seed) {
    arch.validate();
    MlpModel m;
    m.arch = arch;
    m.train_seed = seed;
    std::mt19937_64 rng(seed);
    const auto w = arch.widths();
    for (std::size_t l = 0; l + 1 < w.size(); ++l) {
        const auto fan_in = static_cast<Eigen::Index>(w[l]);
        const auto fan_out = static_cast<Eigen::Index>(w[l + 1]);
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
        std::uniform_real_distribution<double> u(-bound, bound);
        Layer layer{Eigen::MatrixXd(fan_out, fan_in), Eigen::VectorXd::Zero(fan_out)};
        for (Eigen::Index r = 0; r < fan_out; ++r)
            for (Eigen::Index c = 0; c < fan_in; ++c) layer.weight(r, c) = u(rng);
        m.layers.push_back(std::move(layer));
    }
    return m;
}

namespace detail {

/// Forward pass on column-major samples, keeping every activation (a_0 .. a_L).
inline std::vector<Eigen::MatrixXd> forward_trace(const MlpModel& m, const Eigen::MatrixXd& x_cols) {
    std::vector<Eigen::MatrixXd> acts;
    acts.reserve(m.layers.size() + 1);
    acts.push_back(x_cols);
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        Eigen::MatrixXd z = m.layers[l].weight * acts.back();
        z.colwise() += m.layers[l].bias;
        if (l + 1 < m.layers.size()) z = z.cwiseMax(0.0);
        acts.push_back(std::move(z));
    }
    return acts;
}

inline Eigen::MatrixXd forward_cols(const MlpModel& m, const Eigen::MatrixXd& x_cols) {
    Eigen::MatrixXd a = x_cols;
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        Eigen::MatrixXd z = m.layers[l].weight * a;
        z.colwise() += m.layers[l].bias;
        if (l + 1 < m.layers.size()) z = z.cwiseMax(0.0);
        a = std::move(z);
    }
    return a;
}

}  // namespace detail

/// Network output for normalised inputs, one sample per row.
inline Eigen::MatrixXd forward(const MlpModel& m, const Eigen::MatrixXd& x) {
    if (x.cols() != static_cast<Eigen::Index>(m.arch.input_dim))
        throw SizeError("forward: expected " + std::to_string(m.arch.input_dim) + " input columns");
    if (!x.allFinite()) throw DataError("forward: non-finite input");
    return detail::forward_cols(m, x.transpose()).transpose();
}

inline Eigen::VectorXd forward(const MlpModel& m, const Eigen::VectorXd& x) {
    return forward(m, Eigen::MatrixXd(x.transpose())).row(0).transpose();
}

// ---------------------------------------------------------------------------
// Metrics

inline void check_same_shape(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw SizeError("prediction and target shapes differ");
    if (a.size() == 0) throw SizeError("empty prediction");
}

/// Mean of squared differences over every element.
inline double mse(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& target) {
    check_same_shape(pred, target);
    return (pred - target).squaredNorm() / static_cast<double>(pred.size());
}

inline Eigen::VectorXd per_output_mse(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& target) {
    check_same_shape(pred, target);
    return (pred - target).array().square().colwise().mean().transpose();
}

/// Pooled coefficient of determination: 1 - SSE/SST with SST about each column's mean.
inline double r2(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& target) {
    check_same_shape(pred, target);
    const double sse = (pred - target).squaredNorm();
    const Eigen::RowVectorXd mean = target.colwise().mean();
    const double sst = (target.rowwise() - mean).squaredNorm();
    if (!(sst > 0.0)) throw DataError("R^2 undefined: target has zero total variance");
    return 1.0 - sse / sst;
}

// ---------------------------------------------------------------------------
// Gradients

struct Gradients {
    std::vector<Eigen::MatrixXd> weight;
    std::vector<Eigen::VectorXd> bias;
};

/// Loss (MSE over all batch elements) and its exact gradient by back-propagation.
/// Inputs and targets are normalised, one sample per row.
inline std::pair<double, Gradients> loss_and_gradients(const MlpModel& m, const Eigen::MatrixXd& x,
                                                       const Eigen::MatrixXd& target) {
    if (x.rows() == 0) throw SizeError("gradient batch is empty");
    if (x.rows() != target.rows() || target.cols() != static_cast<Eigen::Index>(m.arch.output_dim))
        throw SizeError("batch inputs and targets disagree");
    const auto acts = detail::forward_trace(m, x.transpose());
    const Eigen::MatrixXd residual = acts.back() - target.transpose();
    const double loss = residual.squaredNorm() / static_cast<double>(residual.size());
    if (!std::isfinite(loss)) throw DivergenceError("non-finite loss");

    const std::size_t n_layers = m.layers.size();
    Gradients g;
    g.weight.resize(n_layers);
    g.bias.resize(n_layers);
    Eigen::MatrixXd delta = residual * (2.0 / static_cast<double>(residual.size()));
    for (std::size_t l = n_layers; l-- > 0;) {
        g.weight[l] = delta * acts[l].transpose();
        g.bias[l] = delta.rowwise().sum();
        if (l > 0) {
            Eigen::MatrixXd back = m.layers[l].weight.transpose() * delta;
            delta = (acts[l].array() > 0.0).select(back, 0.0);
        }
    }
    return {loss, std::move(g)};
}

inline Gradients gradients(const MlpModel& m, const Eigen::MatrixXd& x, const Eigen::MatrixXd& target) {
    return loss_and_gradients(m, x, target).second;
}

// ---------------------------------------------------------------------------
// ADAM

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// First and second moment estimates for one parameter tensor.
struct AdamMoments {
    Eigen::ArrayXd m;
    Eigen::ArrayXd v;
};

/// One bias-corrected ADAM update of a flat parameter block. `step` is the
/// 1-based step number after increment.
inline void adam_update(Eigen::Ref<Eigen::ArrayXd> params, const Eigen::Ref<const Eigen::ArrayXd>& grads,
                        AdamMoments& mom, std::int64_t step, const AdamConfig& cfg) {
    if (mom.m.size() != params.size()) {
        mom.m = Eigen::ArrayXd::Zero(params.size());
        mom.v = Eigen::ArrayXd::Zero(params.size());
    }
    mom.m = cfg.beta1 * mom.m + (1.0 - cfg.beta1) * grads;
    mom.v = cfg.beta2 * mom.v + (1.0 - cfg.beta2) * grads.square();
    const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
    const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
    params -= cfg.learning_rate * (mom.m / c1) / ((mom.v / c2).sqrt() + cfg.epsilon);
}

struct AdamState {
    std::vector<AdamMoments> weight;
    std::vector<AdamMoments> bias;
    std::int64_t step = 0;
};

inline void adam_step(MlpModel& m, const Gradients& g, AdamState& state, const AdamConfig& cfg) {
    if (g.weight.size() != m.layers.size() || g.bias.size() != m.layers.size())
        throw SizeError("gradient set does not match the model");
    state.weight.resize(m.layers.size());
    state.bias.resize(m.layers.size());
    ++state.step;
    for (std::size_t l = 0; l < m.layers.size(); ++l) {
        auto& w = m.layers[l].weight;
        auto& b = m.layers[l].bias;
        Eigen::Map<Eigen::ArrayXd> wp(w.data(), w.size());
        Eigen::Map<const Eigen::ArrayXd> wg(g.weight[l].data(), g.weight[l].size());
        adam_update(wp, wg, state.weight[l], state.step, cfg);
        Eigen::Map<Eigen::ArrayXd> bp(b.data(), b.size());
        Eigen::Map<const Eigen::ArrayXd> bg(g.bias[l].data(), g.bias[l].size());
        adam_update(bp, bg, state.bias[l], state.step, cfg);
    }
}

// ---------------------------------------------------------------------------
// Prediction

/// Raw inputs (rows of the five assembly parameters) to raw outputs.
inline Eigen::MatrixXd predict(const MlpModel& m, const Eigen::MatrixXd& raw_inputs) {
    if (!m.trained) throw ConfigError("model is untrained");
    return m.norm.output.denormalize(forward(m, m.norm.input.normalize(raw_inputs)));
}

inline oracle::SnfOutput predict(const MlpModel& m, const oracle::AssemblyInput& in) {
    const auto a = in.to_array();
    Eigen::MatrixXd x(1, static_cast<Eigen::Index>(a.size()));
    for (std::size_t j = 0; j < a.size(); ++j) x(0, static_cast<Eigen::Index>(j)) = a[j];
    const Eigen::MatrixXd y = predict(m, x);
    std::array<double, oracle::kOutputCount> out{};
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = y(0, static_cast<Eigen::Index>(k));
    return oracle::SnfOutput::from_array(out);
}

/// Single prediction plus its wall time in seconds.
inline std::pair<oracle::SnfOutput, double> timed_predict(const MlpModel& m, const oracle::AssemblyInput& in) {
    const auto t0 = std::chrono::steady_clock::now();
    auto out = predict(m, in);
    const auto t1 = std::chrono::steady_clock::now();
    return {out, std::chrono::duration<double>(t1 - t0).count()};
}

/// Test-set quality in normalised output space.
struct Evaluation {
    double mse = 0.0;
    double r2 = 0.0;
    Eigen::VectorXd per_output_mse;
};

inline Evaluation evaluate(const MlpModel& m, const dataset::Dataset& ds, const std::vector<std::size_t>& rows) {
    if (!m.trained) throw ConfigError("model is untrained");
    const Eigen::MatrixXd x = m.norm.input.normalize(dataset::take_rows(ds.inputs, rows));
    const Eigen::MatrixXd y = m.norm.output.normalize(dataset::take_rows(ds.outputs, rows));
    const Eigen::MatrixXd p = forward(m, x);
    return {mse(p, y), r2(p, y), per_output_mse(p, y)};
}

// ---------------------------------------------------------------------------
// Persistence: JSON with row-major weight arrays.

inline constexpr int kModelFormatVersion = 1;

namespace detail {

inline nlohmann::json vec_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

inline Eigen::VectorXd json_vec(const nlohmann::json& j, std::size_t expected) {
    const auto v = j.get<std::vector<double>>();
    if (v.size() != expected) throw ParseError("model array has wrong length");
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const MlpModel& m) {
    nlohmann::ordered_json j;
    j["format"] = "snf-mlp";
    j["format_version"] = kModelFormatVersion;
    j["tool_version"] = kToolVersion;
    j["architecture"] = {{"input_dim", m.arch.input_dim},
                         {"output_dim", m.arch.output_dim},
                         {"hidden_layers", m.arch.hidden_layers},
                         {"hidden_dim", m.arch.hidden_dim}};
    j["train_seed"] = m.train_seed;
    j["trained"] = m.trained;
    j["train_seconds"] = m.train_seconds;
    j["train_samples"] = m.train_samples;
    j["norm"] = {{"input_mean", detail::vec_json(m.norm.input.mean)},
                 {"input_std", detail::vec_json(m.norm.input.std)},
                 {"output_mean", detail::vec_json(m.norm.output.mean)},
                 {"output_std", detail::vec_json(m.norm.output.std)}};
    auto& layers = j["layers"];
    layers = nlohmann::ordered_json::array();
    for (const auto& l : m.layers) {
        std::vector<double> w;
        w.reserve(static_cast<std::size_t>(l.weight.size()));
        for (Eigen::Index r = 0; r < l.weight.rows(); ++r)
            for (Eigen::Index c = 0; c < l.weight.cols(); ++c) w.push_back(l.weight(r, c));
        layers.push_back({{"rows", l.weight.rows()}, {"cols", l.weight.cols()}, {"weight", w},
                          {"bias", detail::vec_json(l.bias)}});
    }
    return j;
}

inline MlpModel from_json(const nlohmann::json& j) {
    try {
        if (j.at("format") != "snf-mlp") throw ParseError("not a model file");
        const int version = j.at("format_version").get<int>();
        if (version != kModelFormatVersion)
            throw ParseError("model format version " + std::to_string(version) + " is not supported (expected " +
                             std::to_string(kModelFormatVersion) + ")");
        MlpModel m;
        const auto& a = j.at("architecture");
        m.arch = {a.at("input_dim").get<std::size_t>(), a.at("output_dim").get<std::size_t>(),
                  a.at("hidden_layers").get<std::size_t>(), a.at("hidden_dim").get<std::size_t>()};
        m.arch.validate();
        m.train_seed = j.at("train_seed").get<std::uint64_t>();
        m.trained = j.at("trained").get<bool>();
        m.train_seconds = j.at("train_seconds").get<double>();
        m.train_samples = j.at("train_samples").get<std::size_t>();
        const auto& n = j.at("norm");
        m.norm.input = {detail::json_vec(n.at("input_mean"), m.arch.input_dim),
                        detail::json_vec(n.at("input_std"), m.arch.input_dim)};
        m.norm.output = {detail::json_vec(n.at("output_mean"), m.arch.output_dim),
                         detail::json_vec(n.at("output_std"), m.arch.output_dim)};
        const auto widths = m.arch.widths();
        const auto& layers = j.at("layers");
        if (layers.size() != widths.size() - 1) throw ParseError("model layer count does not match architecture");
        for (std::size_t l = 0; l < layers.size(); ++l) {
            const auto rows = layers[l].at("rows").get<std::size_t>();
            const auto cols = layers[l].at("cols").get<std::size_t>();
            if (rows != widths[l + 1] || cols != widths[l]) throw ParseError("model layer shape mismatch");
            const auto w = layers[l].at("weight").get<std::vector<double>>();
            if (w.size() != rows * cols) throw ParseError("model weight array has wrong length");
            Layer layer{Eigen::MatrixXd(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols)),
                        detail::json_vec(layers[l].at("bias"), rows)};
            for (std::size_t r = 0; r < rows; ++r)
                for (std::size_t c = 0; c < cols; ++c)
                    layer.weight(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = w[r * cols + c];
            m.layers.push_back(std::move(layer));
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed model file: ") + e.what());
    }
}

inline void save_model(const MlpModel& m, const std::string& path) { write_file(path, to_json(m).dump() + "\n"); }

inline MlpModel load_model(const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed model file: ") + e.what());
    }
    return from_json(j);
}

}  // namespace snf::surrogate
