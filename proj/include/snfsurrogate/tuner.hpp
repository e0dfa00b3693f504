/**
 * @file tuner.hpp
 * @brief Seeded random search over the network hyperparameter space.
 */
#pragma once

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "snfsurrogate/errors.hpp"
#include "snfsurrogate/parallel.hpp"
#include "snfsurrogate/seeding.hpp"
#include "snfsurrogate/train.hpp"

namespace snf::tuner {

using surrogate::MlpArchitecture;
using surrogate::TrainConfig;
using surrogate::TrainReport;

struct SearchSpace {
    std::size_t min_layers = 1;
    std::size_t max_layers = 5;
    std::size_t min_dim = 50;
    std::size_t max_dim = 1000;
    double min_lr = 1e-4;
    double max_lr = 5e-3;
    std::vector<std::size_t> batch_sizes{surrogate::kBatchSizes.begin(), surrogate::kBatchSizes.end()};
    std::size_t max_epochs = 1000;
    std::size_t patience = 50;

    void validate() const {
        if (min_layers < 1 || min_layers > max_layers) throw ConfigError("invalid hidden layer bounds");
        if (min_dim < 1 || min_dim > max_dim) throw ConfigError("invalid hidden dimension bounds");
        if (!(min_lr > 0.0) || min_lr > max_lr) throw ConfigError("invalid learning-rate bounds");
        if (batch_sizes.empty()) throw ConfigError("no batch sizes to choose from");
        for (auto b : batch_sizes)
            if (b == 0) throw ConfigError("batch size must be positive");
        if (max_epochs == 0 || patience == 0) throw ConfigError("epochs and patience must be positive");
    }
};

struct TrialConfig {
    MlpArchitecture arch;
    TrainConfig train;
};

/// Uniform over the discrete choices, log-uniform over the learning rate.
inline TrialConfig sample_config(const SearchSpace& space, std::uint64_t seed) {
    space.validate();
    std::mt19937_64 rng(seed);
    TrialConfig c;
    c.arch.hidden_layers = std::uniform_int_distribution<std::size_t>(space.min_layers, space.max_layers)(rng);
    c.arch.hidden_dim = std::uniform_int_distribution<std::size_t>(space.min_dim, space.max_dim)(rng);
    const double log_lr =
        std::uniform_real_distribution<double>(std::log(space.min_lr), std::log(space.max_lr))(rng);
    c.train.learning_rate = std::clamp(std::exp(log_lr), space.min_lr, space.max_lr);
    c.train.batch_size =
        space.batch_sizes[std::uniform_int_distribution<std::size_t>(0, space.batch_sizes.size() - 1)(rng)];
    c.train.max_epochs = space.max_epochs;
    c.train.patience = space.patience;
    c.train.seed = derive_seed(seed, 7);
    return c;
}

struct Trial {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    TrialConfig config;
    double objective = std::numeric_limits<double>::infinity();  ///< +inf when diverged
    bool diverged = false;
    TrainReport report;
};

struct SearchResult {
    std::size_t best = 0;
    std::vector<Trial> trials;
    surrogate::MlpModel best_model;

    const Trial& best_trial() const { return trials.at(best); }
};

/// One structured-text record for the trial log (timings excluded so logs are reproducible).
inline nlohmann::ordered_json trial_record(const Trial& t) {
    nlohmann::ordered_json j;
    j["trial"] = t.index;
    j["seed"] = t.seed;
    j["hidden_layers"] = t.config.arch.hidden_layers;
    j["hidden_dim"] = t.config.arch.hidden_dim;
    j["learning_rate"] = t.config.train.learning_rate;
    j["batch_size"] = t.config.train.batch_size;
    j["max_epochs"] = t.config.train.max_epochs;
    j["patience"] = t.config.train.patience;
    j["train_seed"] = t.config.train.seed;
    j["diverged"] = t.diverged;
    if (t.diverged) {
        j["objective"] = nullptr;
    } else {
        j["objective"] = t.objective;
    }
    j["final_val_mse"] = t.report.final_val_mse;
    j["stopped_epoch"] = t.report.stopped_epoch;
    j["best_epoch"] = t.report.best_epoch;
    return j;
}

/// Trains one network per trial and keeps the one with the lowest objective.
/// Trial i uses seed derive_seed(seed, i), so results do not depend on `workers`.
/// `on_trial` is called in trial order once all trials have finished.
inline SearchResult search(const dataset::Dataset& ds, const dataset::Splits& splits, const SearchSpace& space,
                           std::size_t budget, std::uint64_t seed, std::size_t workers = 1,
                           const std::function<void(const Trial&)>& on_trial = {}) {
    if (budget < 1) throw ConfigError("search budget must be at least 1");
    space.validate();
    std::vector<Trial> trials(budget);
    std::mutex best_mu;
    std::optional<std::size_t> best;
    surrogate::MlpModel best_model;
    parallel_for(budget, workers, [&](std::size_t i) {
        Trial& t = trials[i];
        t.index = i;
        t.seed = derive_seed(seed, i);
        t.config = sample_config(space, t.seed);
        try {
            auto [model, report] = surrogate::train(ds, splits, t.config.arch, t.config.train);
            t.report = std::move(report);
            t.objective = t.report.objective;
            // Lowest objective wins, ties to the lowest index, independent of completion order.
            std::lock_guard lock(best_mu);
            if (!best || t.objective < trials[*best].objective ||
                (t.objective == trials[*best].objective && i < *best)) {
                best = i;
                best_model = std::move(model);
            }
        } catch (const surrogate::TrainingDiverged& e) {
            t.report = e.report();
            t.diverged = true;
        }
    });

    if (on_trial)
        for (const auto& t : trials) on_trial(t);
    if (!best) throw Error("hyperparameter search failed: all " + std::to_string(budget) + " trials diverged");
    SearchResult result;
    result.best = *best;
    result.best_model = std::move(best_model);
    result.trials = std::move(trials);
    return result;
}

}  // namespace snf::tuner
