/**
 * @file train.hpp
 * @brief Mini-batch ADAM training with early stopping on validation MSE.
 */
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "snfsurrogate/dataset.hpp"
#include "snfsurrogate/errors.hpp"
#include "snfsurrogate/mlp.hpp"
#include "snfsurrogate/seeding.hpp"

namespace snf::surrogate {

inline constexpr std::array<std::size_t, 5> kBatchSizes = {8, 16, 32, 64, 128};

struct TrainConfig {
    double learning_rate = 1e-3;
    std::size_t batch_size = 16;
    std::size_t max_epochs = 1000;
    std::size_t patience = 50;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t seed = 0;
    std::size_t objective_window = 1000;  ///< batch iterations averaged by the objective

    void validate() const {
        if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) throw ConfigError("learning rate must be positive");
        if (batch_size == 0) throw ConfigError("batch size must be positive");
        if (max_epochs == 0) throw ConfigError("max_epochs must be positive");
        if (patience < 1) throw ConfigError("patience must be at least 1");
        if (objective_window == 0) throw ConfigError("objective window must be positive");
    }

    AdamConfig adam() const { return {learning_rate, beta1, beta2, epsilon}; }
    bool operator==(const TrainConfig&) const = default;
};

struct TrainReport {
    std::vector<double> train_loss;  ///< mean batch loss per epoch
    std::vector<double> val_loss;    ///< full validation MSE after each epoch
    std::size_t stopped_epoch = 0;   ///< epochs actually run
    std::size_t best_epoch = 0;      ///< 1-based epoch whose weights were kept
    double final_val_mse = 0.0;      ///< validation MSE of the returned weights
    double objective = 0.0;          ///< trailing mean of validation-batch MSE
    std::size_t batch_iterations = 0;
    bool diverged = false;
    double seconds = 0.0;

    bool same_trajectory(const TrainReport& o) const {
        return train_loss == o.train_loss && val_loss == o.val_loss && stopped_epoch == o.stopped_epoch &&
               best_epoch == o.best_epoch && final_val_mse == o.final_val_mse && objective == o.objective;
    }
};

/// Training aborted on a non-finite loss; carries the partial report.
class TrainingDiverged : public DivergenceError {
public:
    explicit TrainingDiverged(TrainReport report)
        : DivergenceError("training diverged at epoch " + std::to_string(report.stopped_epoch)),
          report_(std::move(report)) {}
    const TrainReport& report() const noexcept { return report_; }

private:
    TrainReport report_;
};

/// Trains a freshly initialised network on ds[splits.train], monitoring ds[splits.val].
///
/// Each epoch visits the training rows in a seeded shuffled order. After every
/// batch iteration the next validation mini-batch (same size, cycling through
/// the validation rows in order) is scored; the objective is the mean of the
/// last `objective_window` such scores. Training stops after max_epochs or
/// when the full validation MSE has not improved for `patience` epochs, and
/// the weights of the best epoch are returned.
inline std::pair<MlpModel, TrainReport> train(const dataset::Dataset& ds, const dataset::Splits& splits,
                                              const MlpArchitecture& arch, const TrainConfig& cfg) {
    cfg.validate();
    arch.validate();
    if (splits.train.empty() || splits.val.empty()) throw SizeError("training and validation sets must be non-empty");
    const auto start = std::chrono::steady_clock::now();

    MlpModel model = init(arch, cfg.seed);
    model.norm = dataset::fit_norm(ds, splits.train);
    model.train_samples = splits.train.size() + splits.val.size();

    const Eigen::MatrixXd x_train = model.norm.input.normalize(dataset::take_rows(ds.inputs, splits.train));
    const Eigen::MatrixXd y_train = model.norm.output.normalize(dataset::take_rows(ds.outputs, splits.train));
    const Eigen::MatrixXd x_val = model.norm.input.normalize(dataset::take_rows(ds.inputs, splits.val));
    const Eigen::MatrixXd y_val = model.norm.output.normalize(dataset::take_rows(ds.outputs, splits.val));
    const Eigen::MatrixXd x_val_cols = x_val.transpose();
    const Eigen::MatrixXd y_val_cols = y_val.transpose();

    std::mt19937_64 shuffle_rng(derive_seed(cfg.seed, 1));
    std::vector<Eigen::Index> order(static_cast<std::size_t>(x_train.rows()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});

    AdamState adam;
    const AdamConfig adam_cfg = cfg.adam();
    TrainReport report;
    std::deque<double> window;
    std::size_t val_cursor = 0;
    const auto n_val = static_cast<std::size_t>(x_val.rows());

    std::vector<Layer> best_layers = model.layers;
    double best_val = std::numeric_limits<double>::infinity();
    std::size_t since_best = 0;

    auto diverge = [&] {
        report.diverged = true;
        report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        throw TrainingDiverged(report);
    };

    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        double loss_sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t first = 0; first < order.size(); first += cfg.batch_size) {
            const std::size_t count = std::min(cfg.batch_size, order.size() - first);
            Eigen::MatrixXd xb(static_cast<Eigen::Index>(count), x_train.cols());
            Eigen::MatrixXd yb(static_cast<Eigen::Index>(count), y_train.cols());
            for (std::size_t i = 0; i < count; ++i) {
                xb.row(static_cast<Eigen::Index>(i)) = x_train.row(order[first + i]);
                yb.row(static_cast<Eigen::Index>(i)) = y_train.row(order[first + i]);
            }
            double loss = 0.0;
            try {
                auto [l, g] = loss_and_gradients(model, xb, yb);
                loss = l;
                adam_step(model, g, adam, adam_cfg);
            } catch (const DivergenceError&) {
                report.stopped_epoch = epoch;
                diverge();
            }
            loss_sum += loss;
            ++batches;
            ++report.batch_iterations;

            // Score the next validation mini-batch for the trailing objective.
            const std::size_t vcount = std::min(cfg.batch_size, n_val);
            Eigen::MatrixXd xv(x_val_cols.rows(), static_cast<Eigen::Index>(vcount));
            Eigen::MatrixXd yv(y_val_cols.rows(), static_cast<Eigen::Index>(vcount));
            for (std::size_t i = 0; i < vcount; ++i) {
                const auto src = static_cast<Eigen::Index>((val_cursor + i) % n_val);
                xv.col(static_cast<Eigen::Index>(i)) = x_val_cols.col(src);
                yv.col(static_cast<Eigen::Index>(i)) = y_val_cols.col(src);
            }
            val_cursor = (val_cursor + vcount) % n_val;
            const double vloss = (detail::forward_cols(model, xv) - yv).squaredNorm() / static_cast<double>(yv.size());
            window.push_back(vloss);
            if (window.size() > cfg.objective_window) window.pop_front();
        }

        const double train_loss = loss_sum / static_cast<double>(batches);
        const double val_loss =
            (detail::forward_cols(model, x_val_cols) - y_val_cols).squaredNorm() / static_cast<double>(y_val_cols.size());
        report.train_loss.push_back(train_loss);
        report.val_loss.push_back(val_loss);
        report.stopped_epoch = epoch;
        if (!std::isfinite(train_loss) || !std::isfinite(val_loss)) diverge();

        if (val_loss < best_val) {
            best_val = val_loss;
            best_layers = model.layers;
            report.best_epoch = epoch;
            since_best = 0;
        } else if (++since_best >= cfg.patience) {
            break;
        }
    }

    double window_mean = 0.0;
    for (double v : window) window_mean += v;
    window_mean /= static_cast<double>(window.size());
    report.objective = window_mean;
    if (!std::isfinite(report.objective)) diverge();

    model.layers = std::move(best_layers);
    model.trained = true;
    report.final_val_mse = best_val;
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    model.train_seconds = report.seconds;
    return {std::move(model), std::move(report)};
}

}  // namespace snf::surrogate
