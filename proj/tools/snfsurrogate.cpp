/**
 * @file snfsurrogate.cpp
 * @brief Command-line driver: gen, tune, train, predict, uq, sa, bench, compare.
 */
#include <CLI11.hpp>
#include <json.hpp>

#include <bit>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "snfsurrogate.hpp"

namespace {

using namespace snf;
using oracle::AssemblyInput;

/// Bad arguments detected after parsing (exit code 2).
class UsageError : public Error {
public:
    using Error::Error;
};

std::string one_line(std::string s) {
    for (auto& c : s)
        if (c == '\n' || c == '\r') c = ' ';
    return s;
}

std::string join(const std::vector<std::string>& fields) {
    std::string s;
    for (std::size_t i = 0; i < fields.size(); ++i) s += (i ? "," : "") + fields[i];
    return s + "\n";
}

AssemblyInput parse_input(const std::string& text) {
    const auto f = split_fields(text);
    if (f.size() != AssemblyInput::kDim)
        throw UsageError("expected 5 comma-separated values (enrichment,burnup,fuel_temp,boron,cooling_days), got '" +
                         text + "'");
    std::array<double, AssemblyInput::kDim> a{};
    try {
        for (std::size_t j = 0; j < a.size(); ++j) a[j] = parse_double(f[j]);
        auto in = AssemblyInput::from_array(a);
        in.validate();
        return in;
    } catch (const Error& e) {
        throw UsageError(std::string("invalid input vector: ") + e.what());
    }
}

std::string input_text(const AssemblyInput& in) {
    std::vector<std::string> f;
    for (double v : in.to_array()) f.push_back(format_double(v));
    std::string s;
    for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + f[i];
    return s;
}

nlohmann::json load_json(const std::string& path) {
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("cannot parse config '" + path + "': " + e.what());
    }
}

template <class T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("config key '") + key + "': " + e.what());
    }
}

/// Oracle from --chain, or the embedded default.
struct OracleHolder {
    std::optional<oracle::Oracle> custom;
    const oracle::Oracle& get() const { return custom ? *custom : oracle::default_oracle(); }
};

OracleHolder make_oracle(const std::string& chain_path) {
    OracleHolder h;
    if (!chain_path.empty()) h.custom.emplace(oracle::NuclideChain::load(chain_path));
    return h;
}

// ---------------------------------------------------------------------------
// Hyperparameter config shared by tune (writer) and train (reader).

struct RunConfig {
    surrogate::MlpArchitecture arch;
    surrogate::TrainConfig train;
    dataset::SplitSpec split;
};

nlohmann::ordered_json config_json(const RunConfig& c, std::uint64_t seed) {
    nlohmann::ordered_json j;
    j["tool"] = "snfsurrogate";
    j["tool_version"] = kToolVersion;
    j["seed"] = seed;
    j["hidden_layers"] = c.arch.hidden_layers;
    j["hidden_dim"] = c.arch.hidden_dim;
    j["learning_rate"] = c.train.learning_rate;
    j["batch_size"] = c.train.batch_size;
    j["max_epochs"] = c.train.max_epochs;
    j["patience"] = c.train.patience;
    j["train_seed"] = c.train.seed;
    j["test_count"] = c.split.test_count;
    j["val_fraction"] = c.split.val_fraction;
    j["split_seed"] = c.split.seed;
    return j;
}

RunConfig run_config(const nlohmann::json& j) {
    RunConfig c;
    read_key(j, "hidden_layers", c.arch.hidden_layers);
    read_key(j, "hidden_dim", c.arch.hidden_dim);
    read_key(j, "learning_rate", c.train.learning_rate);
    read_key(j, "batch_size", c.train.batch_size);
    read_key(j, "max_epochs", c.train.max_epochs);
    read_key(j, "patience", c.train.patience);
    read_key(j, "train_seed", c.train.seed);
    read_key(j, "test_count", c.split.test_count);
    read_key(j, "val_fraction", c.split.val_fraction);
    read_key(j, "split_seed", c.split.seed);
    try {
        c.arch.validate();
        c.train.validate();
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
    if (!(c.split.val_fraction > 0.0 && c.split.val_fraction < 1.0))
        throw UsageError("val_fraction must lie in (0, 1)");
    return c;
}

// ---------------------------------------------------------------------------
// Subcommands

struct GenArgs {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string out;
    std::string chain;
};

int run_gen(const GenArgs& a) {
    const auto holder = make_oracle(a.chain);
    const auto ds = dataset::generate(a.n, a.seed, dataset::kTrainingRanges, holder.get(), worker_count());
    dataset::save(ds, a.out);
    std::cout << "wrote " << a.n << " rows to " << a.out << "\n";
    return 0;
}

struct TuneArgs {
    std::string data;
    std::size_t budget = 50;
    std::uint64_t seed = 0;
    std::string out;
    std::string config;
    std::string model;
    std::optional<std::size_t> max_epochs;
};

int run_tune(const TuneArgs& a) {
    tuner::SearchSpace space;
    dataset::SplitSpec split;
    split.seed = a.seed;
    if (!a.config.empty()) {
        const auto j = load_json(a.config);
        read_key(j, "min_layers", space.min_layers);
        read_key(j, "max_layers", space.max_layers);
        read_key(j, "min_dim", space.min_dim);
        read_key(j, "max_dim", space.max_dim);
        read_key(j, "min_lr", space.min_lr);
        read_key(j, "max_lr", space.max_lr);
        read_key(j, "batch_sizes", space.batch_sizes);
        read_key(j, "max_epochs", space.max_epochs);
        read_key(j, "patience", space.patience);
        read_key(j, "test_count", split.test_count);
        read_key(j, "val_fraction", split.val_fraction);
    }
    if (a.max_epochs) space.max_epochs = *a.max_epochs;
    try {
        space.validate();
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }

    const auto ds = dataset::load(a.data);
    const auto splits = dataset::split(ds, split);
    std::ostringstream log;
    log << nlohmann::ordered_json{{"tool", "snfsurrogate"}, {"tool_version", kToolVersion}, {"seed", a.seed}}.dump()
        << "\n";
    const auto result = tuner::search(ds, splits, space, a.budget, a.seed, worker_count(), [&](const tuner::Trial& t) {
        log << tuner::trial_record(t).dump() << "\n";
    });
    const auto& best = result.best_trial();
    RunConfig c{best.config.arch, best.config.train, split};
    write_file(a.out, config_json(c, a.seed).dump(2) + "\n");
    write_file(a.out + ".trials.jsonl", log.str());
    if (!a.model.empty()) surrogate::save_model(result.best_model, a.model);

    const auto eval = surrogate::evaluate(result.best_model, ds, splits.test);
    std::cout << "best trial " << best.index << ": " << best.config.arch.hidden_layers << "x"
              << best.config.arch.hidden_dim << " lr=" << format_double(best.config.train.learning_rate)
              << " batch=" << best.config.train.batch_size << " objective=" << format_double(best.objective)
              << " test_r2=" << format_double(eval.r2) << "\n";
    return 0;
}

struct TrainArgs {
    std::string data;
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
};

int run_train(const TrainArgs& a) {
    auto c = run_config(load_json(a.config));
    if (a.seed) c.train.seed = *a.seed;
    const auto ds = dataset::load(a.data);
    const auto splits = dataset::split(ds, c.split);
    auto [model, report] = surrogate::train(ds, splits, c.arch, c.train);
    model.train_seed = c.train.seed;
    surrogate::save_model(model, a.out);

    const auto eval = surrogate::evaluate(model, ds, splits.test);
    std::string metrics = provenance_line(c.train.seed) + join({"metric", "value"});
    metrics += join({"test_mse", format_double(eval.mse)});
    metrics += join({"test_r2", format_double(eval.r2)});
    metrics += join({"best_epoch", std::to_string(report.best_epoch)});
    metrics += join({"stopped_epoch", std::to_string(report.stopped_epoch)});
    metrics += join({"final_val_mse", format_double(report.final_val_mse)});
    metrics += join({"objective", format_double(report.objective)});
    const auto names = oracle::output_names();
    for (std::size_t k = 0; k < names.size(); ++k)
        metrics += join({"mse_" + names[k], format_double(eval.per_output_mse(static_cast<Eigen::Index>(k)))});
    write_file(a.out + ".metrics.csv", metrics);

    std::string history = provenance_line(c.train.seed) + join({"epoch", "train_loss", "val_loss"});
    for (std::size_t e = 0; e < report.train_loss.size(); ++e)
        history += join({std::to_string(e + 1), format_double(report.train_loss[e]), format_double(report.val_loss[e])});
    write_file(a.out + ".history.csv", history);

    std::cout << "trained " << c.arch.hidden_layers << "x" << c.arch.hidden_dim << " for " << report.stopped_epoch
              << " epochs (best " << report.best_epoch << "): test_mse=" << format_double(eval.mse)
              << " test_r2=" << format_double(eval.r2) << "\n";
    return 0;
}

struct PredictArgs {
    std::string model;
    std::string input;
    std::string out;
};

Eigen::MatrixXd read_input_csv(const std::string& path) {
    const std::string text = read_file(path);
    std::vector<std::array<double, AssemblyInput::kDim>> rows;
    std::size_t line_no = 0, pos = 0;
    bool header = false;
    while (pos < text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        const std::string line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (line.empty() || line == "\r" || line.front() == '#') continue;
        const auto f = split_fields(line);
        if (!header) {
            const std::vector<std::string> expected(oracle::kInputNames.begin(), oracle::kInputNames.end());
            if (f != expected) throw ParseError("expected header '" + join(expected).substr(0, join(expected).size() - 1) + "'", line_no);
            header = true;
            continue;
        }
        if (f.size() != AssemblyInput::kDim) throw ParseError("expected 5 fields", line_no);
        std::array<double, AssemblyInput::kDim> a{};
        for (std::size_t j = 0; j < a.size(); ++j) a[j] = parse_double(f[j], line_no);
        AssemblyInput::from_array(a).validate();
        rows.push_back(a);
    }
    if (rows.empty()) throw ParseError("input file has no rows", line_no);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(AssemblyInput::kDim));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < AssemblyInput::kDim; ++j)
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    return x;
}

int run_predict(const PredictArgs& a) {
    const auto model = surrogate::load_model(a.model);
    const auto names = oracle::output_names();
    std::string text = provenance_line(model.train_seed);
    if (std::filesystem::is_regular_file(a.input)) {
        const Eigen::MatrixXd x = read_input_csv(a.input);
        const Eigen::MatrixXd y = surrogate::predict(model, x);
        std::vector<std::string> header(oracle::kInputNames.begin(), oracle::kInputNames.end());
        header.insert(header.end(), names.begin(), names.end());
        text += join(header);
        for (Eigen::Index r = 0; r < x.rows(); ++r) {
            std::vector<std::string> f;
            for (Eigen::Index j = 0; j < x.cols(); ++j) f.push_back(format_double(x(r, j)));
            for (Eigen::Index k = 0; k < y.cols(); ++k) f.push_back(format_double(y(r, k)));
            text += join(f);
        }
    } else {
        const auto y = surrogate::predict(model, parse_input(a.input)).to_array();
        text += join({"output", "value"});
        for (std::size_t k = 0; k < names.size(); ++k) text += join({names[k], format_double(y[k])});
    }
    if (a.out.empty())
        std::cout << text;
    else
        write_file(a.out, text);
    return 0;
}

/// The evaluators chosen by --model / --oracle, in that order.
struct EvaluatorSet {
    std::optional<surrogate::MlpModel> model;
    OracleHolder oracle;
    std::vector<std::pair<std::string, analysis::Evaluator>> list;
};

void make_evaluators(EvaluatorSet& set, const std::string& model_path, bool use_oracle, const std::string& chain) {
    if (model_path.empty() && !use_oracle) throw UsageError("give --model, --oracle or both");
    if (!model_path.empty()) {
        set.model.emplace(surrogate::load_model(model_path));
        set.list.emplace_back("surrogate", analysis::surrogate_evaluator(*set.model));
    }
    if (use_oracle) {
        set.oracle = make_oracle(chain);
        set.list.emplace_back("oracle", analysis::oracle_evaluator(set.oracle.get(), worker_count()));
    }
}

struct UqArgs {
    std::string model;
    bool oracle = false;
    std::string chain;
    std::string center;
    double rel_std = 0.05;
    std::size_t n = 1000;
    std::uint64_t seed = 0;
    std::string out;
    std::size_t bootstrap = 10000;
};

int run_uq(const UqArgs& a) {
    analysis::UqSpec spec;
    spec.center = a.center.empty() ? oracle::reference_input() : parse_input(a.center);
    spec.rel_std = a.rel_std;
    spec.n_samples = a.n;
    spec.seed = a.seed;
    try {
        spec.validate();
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
    EvaluatorSet set;
    make_evaluators(set, a.model, a.oracle, a.chain);

    const Eigen::MatrixXd x = analysis::sample_normal(spec);
    std::vector<analysis::UqResult> results;
    for (const auto& [name, eval] : set.list) results.push_back(analysis::run_uq(eval, x, a.seed, {a.bootstrap}));

    const auto names = oracle::output_names();
    std::string table = provenance_line(a.seed) + "# center=" + input_text(spec.center) +
                        " rel_std=" + format_double(spec.rel_std) + " n=" + std::to_string(spec.n_samples) + "\n";
    table += join({"output", "evaluator", "mean", "std", "rel_std", "bootstrap_mean_std", "bootstrap_var_std"});
    for (std::size_t k = 0; k < names.size(); ++k)
        for (std::size_t e = 0; e < results.size(); ++e) {
            const auto& r = results[e];
            const auto kk = static_cast<Eigen::Index>(k);
            table += join({names[k], set.list[e].first, format_double(r.mean(kk)), format_double(r.std(kk)),
                           format_double(r.rel_std(kk)), format_double(r.bootstrap[k].mean_of_std),
                           format_double(r.bootstrap[k].var_of_std)});
        }
    write_file(a.out, table);

    const std::filesystem::path hist_dir = a.out + ".hist";
    std::filesystem::create_directories(hist_dir);
    for (std::size_t k = 0; k < names.size(); ++k) {
        std::vector<Eigen::VectorXd> series;
        for (const auto& r : results) series.emplace_back(r.outputs.col(static_cast<Eigen::Index>(k)));
        const auto h = analysis::histogram(series);
        std::vector<std::string> header{"bin_lo", "bin_hi"};
        for (const auto& [name, eval] : set.list) header.push_back(name);
        std::string text = provenance_line(a.seed) + join(header);
        for (std::size_t b = 0; b + 1 < h.edges.size(); ++b) {
            std::vector<std::string> f{format_double(h.edges[b]), format_double(h.edges[b + 1])};
            for (const auto& c : h.counts) f.push_back(std::to_string(c[b]));
            text += join(f);
        }
        write_file((hist_dir / (names[k] + ".csv")).string(), text);
    }
    std::cout << "wrote " << a.out << " and " << names.size() << " histograms in " << hist_dir.string() << "\n";
    return 0;
}

struct SaArgs {
    std::string model;
    bool oracle = false;
    std::string chain;
    std::string center;
    double rel_std = 0.05;
    std::size_t n_base = 128;
    std::uint64_t seed = 0;
    std::string out;
    std::size_t bootstrap = 200;
};

int run_sa(const SaArgs& a) {
    analysis::UqSpec spec;
    spec.center = a.center.empty() ? oracle::reference_input() : parse_input(a.center);
    spec.rel_std = a.rel_std;
    spec.seed = a.seed;
    try {
        spec.validate();
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
    if (!std::has_single_bit(a.n_base)) throw UsageError("--n-base must be a power of two");
    EvaluatorSet set;
    make_evaluators(set, a.model, a.oracle, a.chain);

    const auto design = analysis::saltelli_sample(a.n_base, spec);
    const auto names = oracle::output_names();
    std::string table = provenance_line(a.seed) + "# center=" + input_text(spec.center) +
                        " rel_std=" + format_double(spec.rel_std) + " n_base=" + std::to_string(a.n_base) +
                        " evaluations=" + std::to_string(design.total()) + "\n";
    table += join({"output", "evaluator", "input", "S1", "S1_se", "ST", "ST_se", "defined"});
    std::vector<analysis::SobolResult> results;
    for (const auto& [name, eval] : set.list) {
        auto r = analysis::sobol_indices(design, eval(design.samples), a.bootstrap, derive_seed(a.seed, 13));
        r.evaluator = name;
        results.push_back(std::move(r));
    }
    for (std::size_t k = 0; k < names.size(); ++k)
        for (const auto& r : results)
            for (std::size_t i = 0; i < AssemblyInput::kDim; ++i) {
                const auto ii = static_cast<Eigen::Index>(i);
                const auto kk = static_cast<Eigen::Index>(k);
                table += join({names[k], r.evaluator, oracle::kInputNames[i], format_double(r.s1(ii, kk)),
                               format_double(r.s1_se(ii, kk)), format_double(r.st(ii, kk)),
                               format_double(r.st_se(ii, kk)), r.defined[k] ? "1" : "0"});
            }
    write_file(a.out, table);
    std::cout << "wrote " << a.out << " (" << design.total() << " evaluations per evaluator)\n";
    return 0;
}

struct BenchArgs {
    std::string model;
    double n = 5072;
    std::size_t probes = 20;
    std::string chain;
    std::string out;
};

int run_bench(const BenchArgs& a) {
    const auto model = surrogate::load_model(a.model);
    const auto holder = make_oracle(a.chain);
    const auto center = oracle::reference_input();
    volatile double sink = 0.0;
    const auto measured = bench::measure_times([&] { sink = holder.get().simulate(center).decay_heat[0]; },
                                               [&] { sink = surrogate::predict(model, center).decay_heat[0]; },
                                               a.probes, model.train_seconds > 0.0 ? model.train_seconds : 1e-9,
                                               static_cast<double>(std::max<std::size_t>(model.train_samples, 1)));
    const auto reference = bench::reference_constants();

    std::string table = provenance_line(model.train_seed) + "# n=" + format_double(a.n) + " probes=" +
                        std::to_string(a.probes) + "\n";
    table += join({"constants", "t_oracle", "t_oracle_std", "t_train", "t_eval", "t_eval_std", "n_train", "speedup",
                   "break_even"});
    for (const auto& [name, c] : {std::pair{"measured", measured}, std::pair{"reference", reference}})
        table += join({name, format_double(c.t_oracle), format_double(c.t_oracle_std), format_double(c.t_train),
                       format_double(c.t_eval), format_double(c.t_eval_std), format_double(c.n_train),
                       format_double(bench::speedup(a.n, c)), format_double(bench::break_even(c))});
    if (a.out.empty())
        std::cout << table;
    else
        write_file(a.out, table);
    return 0;
}

struct CompareArgs {
    std::string pred;
    std::string meas;
    std::string out;
};

int run_compare(const CompareArgs& a) {
    const auto report = bench::ce_compare(bench::parse_predictions(read_file(a.pred)), bench::load_measurements(a.meas));
    std::string table = provenance_line(0) + join({"assembly_id", "group", "calculated", "measured", "c_over_e"});
    for (const auto& r : report.records)
        table += join({r.assembly_id, r.group, format_double(r.calculated), format_double(r.measured),
                       format_double(r.ratio)});
    table += "\n" + join({"group", "bias_pct"});
    for (const auto& [g, b] : report.group_bias_pct) table += join({g, format_double(b)});
    if (a.out.empty())
        std::cout << table;
    else
        write_file(a.out, table);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decay-heat surrogate pipeline"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(snf::kToolVersion));

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Sample inputs and label them with the oracle");
    gen_cmd->add_option("--n", gen.n, "Number of rows")->required()->check(CLI::PositiveNumber);
    gen_cmd->add_option("--seed", gen.seed, "Sampling seed")->required();
    gen_cmd->add_option("--out", gen.out, "Dataset path")->required();
    gen_cmd->add_option("--chain", gen.chain, "Nuclide chain file")->check(CLI::ExistingFile);

    TuneArgs tune;
    std::size_t tune_epochs = 0;
    auto* tune_cmd = app.add_subcommand("tune", "Random search over network hyperparameters");
    tune_cmd->add_option("--data", tune.data, "Dataset path")->required()->check(CLI::ExistingFile);
    tune_cmd->add_option("--budget", tune.budget, "Number of trials")->check(CLI::PositiveNumber)->capture_default_str();
    tune_cmd->add_option("--seed", tune.seed, "Search seed")->required();
    tune_cmd->add_option("--out", tune.out, "Best-configuration path")->required();
    tune_cmd->add_option("--config", tune.config, "Search-space overrides (JSON)")->check(CLI::ExistingFile);
    tune_cmd->add_option("--model", tune.model, "Also save the best network here");
    auto* tune_epochs_opt =
        tune_cmd->add_option("--max-epochs", tune_epochs, "Epoch cap per trial")->check(CLI::PositiveNumber);

    TrainArgs train;
    std::uint64_t train_seed = 0;
    auto* train_cmd = app.add_subcommand("train", "Train one network from a configuration");
    train_cmd->add_option("--data", train.data, "Dataset path")->required()->check(CLI::ExistingFile);
    train_cmd->add_option("--config", train.config, "Configuration (JSON)")->required()->check(CLI::ExistingFile);
    train_cmd->add_option("--out", train.out, "Model path")->required();
    auto* train_seed_opt = train_cmd->add_option("--seed", train_seed, "Override the training seed");

    PredictArgs predict;
    auto* predict_cmd = app.add_subcommand("predict", "Evaluate a trained network");
    predict_cmd->add_option("--model", predict.model, "Model path")->required()->check(CLI::ExistingFile);
    predict_cmd->add_option("--input", predict.input, "Five comma-separated values or a CSV file")->required();
    predict_cmd->add_option("--out", predict.out, "Output path (default stdout)");

    UqArgs uq;
    auto* uq_cmd = app.add_subcommand("uq", "Monte-Carlo uncertainty propagation");
    uq_cmd->add_option("--model", uq.model, "Model path")->check(CLI::ExistingFile);
    uq_cmd->add_flag("--oracle", uq.oracle, "Evaluate with the oracle");
    uq_cmd->add_option("--chain", uq.chain, "Nuclide chain file")->check(CLI::ExistingFile);
    uq_cmd->add_option("--center", uq.center, "Center input (default: reference assembly)");
    uq_cmd->add_option("--rel-std", uq.rel_std, "Relative input std")->check(CLI::PositiveNumber)->capture_default_str();
    uq_cmd->add_option("--n", uq.n, "Samples")->check(CLI::Range(std::size_t{2}, std::size_t{100000000}))->capture_default_str();
    uq_cmd->add_option("--seed", uq.seed, "Sampling seed")->required();
    uq_cmd->add_option("--out", uq.out, "Summary table path")->required();
    uq_cmd->add_option("--bootstrap", uq.bootstrap, "Bootstrap resamples")->check(CLI::PositiveNumber)->capture_default_str();

    SaArgs sa;
    auto* sa_cmd = app.add_subcommand("sa", "Sobol' sensitivity analysis");
    sa_cmd->add_option("--model", sa.model, "Model path")->check(CLI::ExistingFile);
    sa_cmd->add_flag("--oracle", sa.oracle, "Evaluate with the oracle");
    sa_cmd->add_option("--chain", sa.chain, "Nuclide chain file")->check(CLI::ExistingFile);
    sa_cmd->add_option("--center", sa.center, "Center input (default: reference assembly)");
    sa_cmd->add_option("--rel-std", sa.rel_std, "Relative input std")->check(CLI::PositiveNumber)->capture_default_str();
    sa_cmd->add_option("--n-base", sa.n_base, "Base rows (power of two)")->check(CLI::PositiveNumber)->capture_default_str();
    sa_cmd->add_option("--seed", sa.seed, "Sampling seed")->required();
    sa_cmd->add_option("--out", sa.out, "Index table path")->required();
    sa_cmd->add_option("--bootstrap", sa.bootstrap, "Bootstrap resamples")->capture_default_str();

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "Time oracle and network and evaluate the speedup model");
    bench_cmd->add_option("--model", bench_args.model, "Model path")->required()->check(CLI::ExistingFile);
    bench_cmd->add_option("--n", bench_args.n, "Evaluation count")->check(CLI::Range(1.0, 1e15))->capture_default_str();
    bench_cmd->add_option("--probes", bench_args.probes, "Timed calls per evaluator")->check(CLI::PositiveNumber)->capture_default_str();
    bench_cmd->add_option("--chain", bench_args.chain, "Nuclide chain file")->check(CLI::ExistingFile);
    bench_cmd->add_option("--out", bench_args.out, "Output path (default stdout)");

    CompareArgs compare;
    auto* compare_cmd = app.add_subcommand("compare", "C/E comparison against measurements");
    compare_cmd->add_option("--pred", compare.pred, "Predictions CSV (assembly_id,decay_heat_W_per_tU)")->required()->check(CLI::ExistingFile);
    compare_cmd->add_option("--meas", compare.meas, "Measurements CSV")->required()->check(CLI::ExistingFile);
    compare_cmd->add_option("--out", compare.out, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "snfsurrogate: usage error: " << one_line(e.what()) << "\n";
        return 2;
    }

    try {
        if (*gen_cmd) return run_gen(gen);
        if (*tune_cmd) {
            if (*tune_epochs_opt) tune.max_epochs = tune_epochs;
            return run_tune(tune);
        }
        if (*train_cmd) {
            if (*train_seed_opt) train.seed = train_seed;
            return run_train(train);
        }
        if (*predict_cmd) return run_predict(predict);
        if (*uq_cmd) return run_uq(uq);
        if (*sa_cmd) return run_sa(sa);
        if (*bench_cmd) return run_bench(bench_args);
        if (*compare_cmd) return run_compare(compare);
    } catch (const UsageError& e) {
        std::cerr << "snfsurrogate: usage error: " << one_line(e.what()) << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "snfsurrogate: error: " << one_line(e.what()) << "\n";
        return 1;
    }
    return 2;
}
