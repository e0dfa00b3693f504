/**
 * @file test_surrogate.cpp
 * @brief Network gradients, ADAM, metrics, training, persistence and the tuner.
 */
#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <set>

#include "snfsurrogate/tuner.hpp"

using namespace snf;
using namespace snf::surrogate;

namespace {

// Smooth synthetic targets so training tests do not depend on the oracle.
dataset::Dataset synthetic(std::size_t n, std::uint64_t seed) {
    dataset::Dataset ds;
    ds.inputs = dataset::sample_inputs(n, dataset::kTrainingRanges, seed);
    ds.outputs.resize(static_cast<Eigen::Index>(n), 53);
    for (Eigen::Index r = 0; r < ds.inputs.rows(); ++r) {
        const double e = ds.inputs(r, 0), b = ds.inputs(r, 1), c = ds.inputs(r, 4);
        for (Eigen::Index k = 0; k < 53; ++k)
            ds.outputs(r, k) = (1.0 + 0.01 * static_cast<double>(k)) * b * std::exp(-c / (800.0 + 40.0 * k)) + e;
    }
    ds.seed = seed;
    ds.ranges = dataset::kTrainingRanges;
    ds.oracle_version = "synthetic";
    return ds;
}

double flat_loss(const MlpModel& m, const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    return mse(forward(m, x), y);
}

}  // namespace

TEST(Mlp, InitialisationShapesAndBounds) {
    const auto m = init({5, 53, 3, 17}, 4);
    ASSERT_EQ(m.layers.size(), 4u);
    EXPECT_EQ(m.layers[0].weight.rows(), 17);
    EXPECT_EQ(m.layers[0].weight.cols(), 5);
    EXPECT_EQ(m.layers[3].weight.rows(), 53);
    EXPECT_LE(m.layers[0].weight.cwiseAbs().maxCoeff(), std::sqrt(6.0 / 5.0));
    EXPECT_LE(m.layers[1].weight.cwiseAbs().maxCoeff(), std::sqrt(6.0 / 17.0));
    EXPECT_EQ(m.layers[2].bias.norm(), 0.0);
    EXPECT_EQ(m.parameter_count(), 5u * 17 + 17 + 2 * (17 * 17 + 17) + 17 * 53 + 53);
    EXPECT_EQ(init({5, 53, 3, 17}, 4), m);
    EXPECT_THROW(init({5, 53, 0, 17}, 1), ConfigError);
}

TEST(Mlp, ForwardMatchesHandComputation) {
    MlpModel m = init({2, 1, 1, 2}, 0);
    m.layers[0].weight << 1.0, -1.0, 0.5, 2.0;
    m.layers[0].bias << 0.0, -1.0;
    m.layers[1].weight << 3.0, -2.0;
    m.layers[1].bias << 0.25;
    Eigen::VectorXd x(2);
    x << 2.0, 1.0;
    // hidden = relu(1, 2) = (1, 2); out = 3 - 4 + 0.25
    EXPECT_DOUBLE_EQ(forward(m, x)(0), -0.75);
    x << -1.0, 0.0;
    // hidden = relu(-1, -1.5) = 0
    EXPECT_DOUBLE_EQ(forward(m, x)(0), 0.25);
    EXPECT_THROW(forward(m, Eigen::MatrixXd(Eigen::MatrixXd::Zero(1, 3))), SizeError);
}

TEST(Mlp, GradientsMatchCentralDifferences) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    for (int net = 0; net < 5; ++net) {
        const MlpArchitecture arch{3, 4, static_cast<std::size_t>(1 + net % 3), 6};
        const auto m = init(arch, static_cast<std::uint64_t>(net));
        Eigen::MatrixXd x(7, 3), y(7, 4);
        for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = nd(rng);
        for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = nd(rng);
        const auto [loss, g] = loss_and_gradients(m, x, y);
        EXPECT_NEAR(loss, flat_loss(m, x, y), 1e-14);
        for (std::size_t l = 0; l < m.layers.size(); ++l)
            for (Eigen::Index i = 0; i < m.layers[l].weight.size(); ++i) {
                auto p = m, q = m;
                const double h = 1e-6;
                p.layers[l].weight(i) += h;
                q.layers[l].weight(i) -= h;
                const double fd = (flat_loss(p, x, y) - flat_loss(q, x, y)) / (2 * h);
                EXPECT_NEAR(g.weight[l](i), fd, 1e-6 * (1.0 + std::abs(fd)));
            }
    }
}

TEST(Mlp, GradientShapeErrors) {
    const auto m = init({3, 4, 1, 6}, 0);
    EXPECT_THROW(loss_and_gradients(m, Eigen::MatrixXd::Zero(0, 3), Eigen::MatrixXd::Zero(0, 4)), SizeError);
    EXPECT_THROW(loss_and_gradients(m, Eigen::MatrixXd::Zero(2, 3), Eigen::MatrixXd::Zero(3, 4)), SizeError);
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(1, 3);
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(1, 4);
    y(0, 0) = std::numeric_limits<double>::infinity();
    EXPECT_THROW(loss_and_gradients(m, x, y), DivergenceError);
}

TEST(Adam, FirstStepMovesByLearningRateAgainstGradientSign) {
    Eigen::ArrayXd p(3), g(3);
    p << 1.0, 2.0, 3.0;
    g << 0.5, -4.0, 1e-3;
    AdamMoments mom;
    const AdamConfig cfg{0.01, 0.9, 0.999, 1e-8};
    adam_update(p, g, mom, 1, cfg);
    // Bias correction makes m_hat = g and v_hat = g^2 after one step.
    EXPECT_NEAR(p(0), 1.0 - 0.01 * 0.5 / (0.5 + 1e-8), 1e-15);
    EXPECT_NEAR(p(1), 2.0 + 0.01 * 4.0 / (4.0 + 1e-8), 1e-15);
    EXPECT_NEAR(p(2), 3.0 - 0.01 * 1e-3 / (1e-3 + 1e-8), 1e-15);
}

TEST(Adam, SecondStepMatchesRecurrence) {
    Eigen::ArrayXd p(1), g(1);
    p << 0.0;
    AdamMoments mom;
    const AdamConfig cfg{0.1, 0.9, 0.999, 1e-8};
    g << 1.0;
    adam_update(p, g, mom, 1, cfg);
    g << -2.0;
    adam_update(p, g, mom, 2, cfg);
    const double m = 0.9 * 0.1 + 0.1 * -2.0;
    const double v = 0.999 * 0.001 + 0.001 * 4.0;
    const double expected = -0.1 / (1.0 + 1e-8) - 0.1 * (m / (1 - 0.81)) / (std::sqrt(v / (1 - 0.999 * 0.999)) + 1e-8);
    EXPECT_NEAR(p(0), expected, 1e-14);
}

TEST(Adam, MinimisesAQuadratic) {
    Eigen::ArrayXd p = Eigen::ArrayXd::Constant(4, 5.0);
    AdamMoments mom;
    for (int step = 1; step <= 3000; ++step) {
        const Eigen::ArrayXd g = 2.0 * (p - 1.0);
        adam_update(p, g, mom, step, {0.05, 0.9, 0.999, 1e-8});
    }
    EXPECT_LT((p - 1.0).abs().maxCoeff(), 1e-3);
}

TEST(Metrics, MseAndR2ByHand) {
    Eigen::MatrixXd t(3, 2), p(3, 2);
    t << 1, 10, 2, 20, 3, 30;
    p << 1, 12, 2, 20, 4, 30;
    EXPECT_DOUBLE_EQ(mse(p, t), (4.0 + 1.0) / 6.0);
    const auto per = per_output_mse(p, t);
    EXPECT_DOUBLE_EQ(per(0), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(per(1), 4.0 / 3.0);
    // SST = 2 + 200
    EXPECT_DOUBLE_EQ(r2(p, t), 1.0 - 5.0 / 202.0);
    EXPECT_DOUBLE_EQ(r2(t, t), 1.0);
    EXPECT_THROW(r2(Eigen::MatrixXd::Ones(2, 2), Eigen::MatrixXd::Ones(2, 2)), DataError);
    EXPECT_THROW(mse(p, Eigen::MatrixXd::Zero(2, 2)), SizeError);
}

TEST(Training, IsDeterministicAndRestoresBestEpoch) {
    const auto ds = synthetic(300, 1);
    const auto splits = dataset::split(ds, {100, 0.2, 2});
    TrainConfig cfg;
    cfg.max_epochs = 40;
    cfg.patience = 5;
    cfg.seed = 9;
    const MlpArchitecture arch{5, 53, 1, 32};
    const auto [m1, r1] = train(ds, splits, arch, cfg);
    const auto [m2, r2_] = train(ds, splits, arch, cfg);
    EXPECT_TRUE(r1.same_trajectory(r2_));
    EXPECT_EQ(m1.layers, m2.layers);
    EXPECT_EQ(r1.stopped_epoch, r1.val_loss.size());
    EXPECT_EQ(r1.final_val_mse, *std::min_element(r1.val_loss.begin(), r1.val_loss.end()));
    EXPECT_EQ(r1.final_val_mse, r1.val_loss[r1.best_epoch - 1]);
    EXPECT_LT(r1.final_val_mse, r1.val_loss.front());
    EXPECT_TRUE(m1.trained);
    EXPECT_EQ(m1.train_samples, splits.train.size() + splits.val.size());

    cfg.seed = 10;
    const auto [m3, r3] = train(ds, splits, arch, cfg);
    EXPECT_FALSE(r1.same_trajectory(r3));
}

TEST(Training, EarlyStoppingHonoursPatience) {
    const auto ds = synthetic(300, 1);
    const auto splits = dataset::split(ds, {100, 0.2, 2});
    TrainConfig cfg;
    cfg.max_epochs = 500;
    cfg.patience = 1;
    cfg.learning_rate = 5e-3;
    const auto [m, r] = train(ds, splits, {5, 53, 1, 16}, cfg);
    EXPECT_LT(r.stopped_epoch, 500u);
    EXPECT_EQ(r.stopped_epoch, r.best_epoch + 1);
}

TEST(Training, LearnsASmoothFunction) {
    const auto ds = synthetic(500, 3);
    const auto splits = dataset::split(ds, {100, 0.2, 4});
    TrainConfig cfg;
    cfg.max_epochs = 150;
    cfg.seed = 1;
    const auto [m, r] = train(ds, splits, {5, 53, 1, 64}, cfg);
    EXPECT_GT(evaluate(m, ds, splits.test).r2, 0.98);
}

TEST(Training, RejectsBadConfigs) {
    const auto ds = synthetic(300, 1);
    const auto splits = dataset::split(ds, {100, 0.2, 2});
    TrainConfig cfg;
    cfg.batch_size = 0;
    EXPECT_THROW(train(ds, splits, {}, cfg), ConfigError);
    cfg = {};
    cfg.learning_rate = -1.0;
    EXPECT_THROW(train(ds, splits, {}, cfg), ConfigError);
    dataset::Splits empty = splits;
    empty.val.clear();
    EXPECT_THROW(train(ds, empty, {}, TrainConfig{}), SizeError);
}

TEST(Training, HugeLearningRateDivergesWithReport) {
    const auto ds = synthetic(300, 1);
    const auto splits = dataset::split(ds, {100, 0.2, 2});
    TrainConfig cfg;
    cfg.learning_rate = 1e300;
    cfg.max_epochs = 50;
    try {
        train(ds, splits, {5, 53, 2, 64}, cfg);
        FAIL() << "training stayed finite";
    } catch (const TrainingDiverged& e) {
        EXPECT_TRUE(e.report().diverged);
        EXPECT_GE(e.report().stopped_epoch, 1u);
    }
}

TEST(Persistence, RoundTripPreservesPredictions) {
    const auto ds = synthetic(300, 5);
    const auto splits = dataset::split(ds, {100, 0.2, 2});
    TrainConfig cfg;
    cfg.max_epochs = 5;
    auto [m, r] = train(ds, splits, {5, 53, 2, 12}, cfg);
    const auto path = (std::filesystem::temp_directory_path() / "snf_model_test.json").string();
    save_model(m, path);
    const auto back = load_model(path);
    EXPECT_EQ(back.layers, m.layers);
    EXPECT_EQ(back.norm, m.norm);
    EXPECT_EQ(back.arch, m.arch);
    EXPECT_EQ(predict(back, ds.inputs), predict(m, ds.inputs));

    auto j = nlohmann::json::parse(read_file(path));
    j["format_version"] = 2;
    write_file(path, j.dump());
    EXPECT_THROW(load_model(path), ParseError);
    j["format_version"] = 1;
    j["layers"][0]["rows"] = 99;
    write_file(path, j.dump());
    EXPECT_THROW(load_model(path), ParseError);
    write_file(path, "{not json");
    EXPECT_THROW(load_model(path), ParseError);
}

TEST(Persistence, UntrainedModelCannotPredict) {
    const auto m = init({}, 0);
    EXPECT_THROW(predict(m, oracle::reference_input()), ConfigError);
}

// ---------------------------------------------------------------------------
// Tuner

TEST(Tuner, SampledConfigsStayInTheSpace) {
    tuner::SearchSpace space;
    std::set<std::size_t> batches;
    for (std::uint64_t s = 0; s < 300; ++s) {
        const auto c = tuner::sample_config(space, s);
        EXPECT_GE(c.arch.hidden_layers, 1u);
        EXPECT_LE(c.arch.hidden_layers, 5u);
        EXPECT_GE(c.arch.hidden_dim, 50u);
        EXPECT_LE(c.arch.hidden_dim, 1000u);
        EXPECT_GE(c.train.learning_rate, 1e-4);
        EXPECT_LE(c.train.learning_rate, 5e-3);
        batches.insert(c.train.batch_size);
        EXPECT_EQ(c.train.max_epochs, 1000u);
        EXPECT_EQ(c.train.patience, 50u);
    }
    EXPECT_EQ(batches, (std::set<std::size_t>{8, 16, 32, 64, 128}));
    EXPECT_EQ(tuner::sample_config(space, 5).arch, tuner::sample_config(space, 5).arch);
}

TEST(Tuner, InvalidSpacesAreRejected) {
    tuner::SearchSpace space;
    space.min_layers = 3;
    space.max_layers = 2;
    EXPECT_THROW(space.validate(), ConfigError);
    space = {};
    space.batch_sizes.clear();
    EXPECT_THROW(space.validate(), ConfigError);
    space = {};
    space.min_lr = 0.0;
    EXPECT_THROW(space.validate(), ConfigError);
}

TEST(Tuner, SearchIsReproducibleAcrossWorkerCounts) {
    const auto ds = synthetic(260, 7);
    const auto splits = dataset::split(ds, {100, 0.2, 1});
    tuner::SearchSpace space;
    space.max_layers = 2;
    space.max_dim = 60;
    space.max_epochs = 8;
    std::vector<std::string> log1, log2;
    const auto a = tuner::search(ds, splits, space, 4, 11, 1,
                                 [&](const tuner::Trial& t) { log1.push_back(tuner::trial_record(t).dump()); });
    const auto b = tuner::search(ds, splits, space, 4, 11, 3,
                                 [&](const tuner::Trial& t) { log2.push_back(tuner::trial_record(t).dump()); });
    EXPECT_EQ(log1, log2);
    EXPECT_EQ(a.best, b.best);
    EXPECT_EQ(a.best_model.layers, b.best_model.layers);
    ASSERT_EQ(a.trials.size(), 4u);
    for (const auto& t : a.trials) EXPECT_GE(t.objective, a.best_trial().objective);
    EXPECT_THROW(tuner::search(ds, splits, space, 0, 1), ConfigError);
}
