// fuzzyts command line: data generation, training, inference, evaluation
// and report dumps for the interval type-2 fuzzy forecaster.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "fuzzyts/experiment.hpp"
#include "fuzzyts/gradcheck.hpp"

namespace fs = std::filesystem;
using namespace fuzzyts;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

ExperimentConfig config_from_path(const std::string& path) {
    return load_experiment_config(ConfigFile::parse_file(path));
}

int cmd_gen_data(const std::string& out, double tau, double x0,
                 std::size_t len, double noise, std::uint64_t seed) {
    MackeyGlassSpec spec;
    spec.tau = tau;
    spec.x0 = x0;
    spec.length = len;
    SeriesTable table;
    table.values = generate_mackey_glass(spec);
    if (noise > 0.0) table.values = add_noise(table.values, noise, seed);
    write_series_csv(out, table);
    std::cout << "wrote " << table.values.size() << " rows to " << out << "\n";
    return 0;
}

int cmd_train(const std::string& config_path) {
    const ExperimentConfig cfg = config_from_path(config_path);
    const ExperimentResult result = run_experiment(cfg);

    fs::create_directories(cfg.out_dir);
    const fs::path dir(cfg.out_dir);
    for (std::size_t i = 0; i < result.models.size(); ++i) {
        const std::string name = result.models.size() == 1
                                     ? "model.json"
                                     : "model_" + std::to_string(i + 1) + ".json";
        save_model(result.models[i], (dir / name).string());
    }
    write_metrics_csv((dir / "metrics.csv").string(), result.report);
    write_predictions_csv((dir / "predictions.csv").string(), result.models,
                          cfg.window.scheme, result.dataset);
    write_firing_csv((dir / "firing.csv").string(), result.models[0].params,
                     result.dataset);
    write_learning_log((dir / "learning_log.txt").string(), result.log);

    std::cout << "rules:";
    for (std::size_t m : result.report.rule_counts) std::cout << ' ' << m;
    std::cout << "\ntest rmse (avg): " << result.report.avg_test_rmse
              << "\ntest mpe  (avg): " << result.report.avg_test_mpe
              << "\nwall seconds: " << result.report.wall_seconds << "\n";
    return 0;
}

std::vector<Model> load_models(const std::vector<std::string>& paths) {
    std::vector<Model> models;
    for (const auto& p : paths) models.push_back(load_model(p));
    return models;
}

// Rebuilds the windowed dataset a model set was trained against.
WindowedDataset dataset_from_config(const ExperimentConfig& cfg) {
    SeriesTable series;
    if (cfg.source == "mackey-glass") {
        series.values = generate_mackey_glass(cfg.mg);
    } else {
        series = load_csv(cfg.csv_path, cfg.csv_value_column);
    }
    if (cfg.noise_std_fraction > 0.0)
        series.values =
            add_noise(series.values, cfg.noise_std_fraction, cfg.data_seed);
    return build_windows(series, cfg.window, cfg.split);
}

int cmd_predict(const std::string& config_path,
                const std::vector<std::string>& model_paths,
                const std::string& out) {
    const ExperimentConfig cfg = config_from_path(config_path);
    const auto models = load_models(model_paths);
    const WindowedDataset ds = dataset_from_config(cfg);
    write_predictions_csv(out, models, cfg.window.scheme, ds);
    std::cout << "wrote " << out << "\n";
    return 0;
}

int cmd_eval(const std::string& config_path,
             const std::vector<std::string>& model_paths) {
    const ExperimentConfig cfg = config_from_path(config_path);
    const auto models = load_models(model_paths);
    const WindowedDataset ds = dataset_from_config(cfg);
    const EvalReport report =
        evaluate_models(models, cfg.window.scheme, ds, cfg.mpe_epsilon);
    std::printf("split step rmse mpe\n");
    for (std::size_t k = 0; k < report.test_rmse.size(); ++k)
        std::printf("test %zu %.6g %.6g\n", k + 1, report.test_rmse[k],
                    report.test_mpe[k]);
    std::printf("test avg %.6g %.6g\n", report.avg_test_rmse,
                report.avg_test_mpe);
    for (std::size_t k = 0; k < report.train_rmse.size(); ++k)
        std::printf("train %zu %.6g %.6g\n", k + 1, report.train_rmse[k],
                    report.train_mpe[k]);
    std::printf("train avg %.6g %.6g\n", report.avg_train_rmse,
                report.avg_train_mpe);
    return 0;
}

int cmd_grad_check(std::uint64_t seed, std::size_t trials) {
    GradCheckConfig gc;
    gc.seed = seed;
    gc.trials = trials;
    const GradCheckReport report = run_grad_check(gc);
    std::printf("%s checked=%zu skipped=%zu max_rel_err=%.3g\n",
                report.passed ? "PASS" : "FAIL", report.checked,
                report.skipped, report.max_rel_err);
    for (const auto& f : report.failures) std::printf("  %s\n", f.c_str());
    return report.passed ? 0 : 1;
}

int cmd_report(const std::string& config_path,
               const std::vector<std::string>& model_paths,
               const std::string& out_dir) {
    const ExperimentConfig cfg = config_from_path(config_path);
    const auto models = load_models(model_paths);
    const WindowedDataset ds = dataset_from_config(cfg);
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    write_predictions_csv((dir / "predictions.csv").string(), models,
                          cfg.window.scheme, ds);
    write_firing_csv((dir / "firing.csv").string(), models[0].params, ds);
    write_metrics_csv(
        (dir / "metrics.csv").string(),
        evaluate_models(models, cfg.window.scheme, ds, cfg.mpe_epsilon));
    std::cout << "report written to " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"interval type-2 fuzzy time-series forecaster"};
    app.require_subcommand(1);

    // gen-data
    auto* gen = app.add_subcommand("gen-data", "generate a synthetic series");
    bool mg_flag = false;
    double tau = 30.0, x0 = 1.2, noise = 0.0;
    std::size_t len = 1500;
    std::uint64_t noise_seed = 0;
    std::string gen_out = "series.csv";
    gen->add_flag("--mackey-glass", mg_flag, "chaotic delay series");
    gen->add_option("--tau", tau, "delay");
    gen->add_option("--x0", x0, "initial value");
    gen->add_option("--len", len, "number of samples");
    gen->add_option("--noise", noise, "noise std as a fraction of series std");
    gen->add_option("--noise-seed", noise_seed, "noise RNG seed");
    gen->add_option("--out", gen_out, "output CSV path");

    // train
    auto* train = app.add_subcommand("train", "run structure learning");
    std::string train_cfg;
    train->add_option("--config", train_cfg, "config file")->required();

    // predict
    auto* predict = app.add_subcommand("predict", "dump predictions");
    std::string pred_cfg, pred_out = "predictions.csv";
    std::vector<std::string> pred_models;
    predict->add_option("--config", pred_cfg, "config file")->required();
    predict->add_option("--model", pred_models, "model file(s)")->required();
    predict->add_option("--out", pred_out, "output CSV path");

    // eval
    auto* eval = app.add_subcommand("eval", "print metrics for a model set");
    std::string eval_cfg;
    std::vector<std::string> eval_models;
    eval->add_option("--config", eval_cfg, "config file")->required();
    eval->add_option("--model", eval_models, "model file(s)")->required();

    // grad-check
    auto* gch = app.add_subcommand("grad-check",
                                   "finite-difference gradient verification");
    std::uint64_t gc_seed = 1;
    std::size_t gc_trials = 50;
    gch->add_option("--seed", gc_seed, "RNG seed");
    gch->add_option("--trials", gc_trials, "number of random networks");

    // report
    auto* report = app.add_subcommand("report", "plot-ready CSV dumps");
    std::string rep_cfg, rep_out = "report";
    std::vector<std::string> rep_models;
    report->add_option("--config", rep_cfg, "config file")->required();
    report->add_option("--model", rep_models, "model file(s)")->required();
    report->add_option("--out-dir", rep_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    try {
        if (gen->parsed()) {
            if (!mg_flag) {
                std::cerr << "gen-data: only --mackey-glass is supported\n";
                return kExitConfig;
            }
            return cmd_gen_data(gen_out, tau, x0, len, noise, noise_seed);
        }
        if (train->parsed()) return cmd_train(train_cfg);
        if (predict->parsed())
            return cmd_predict(pred_cfg, pred_models, pred_out);
        if (eval->parsed()) return cmd_eval(eval_cfg, eval_models);
        if (gch->parsed()) return cmd_grad_check(gc_seed, gc_trials);
        if (report->parsed()) return cmd_report(rep_cfg, rep_models, rep_out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::runtime_error& e) {
        // config/file problems exit 2; numeric aborts exit 3
        const std::string msg = e.what();
        std::cerr << "error: " << msg << "\n";
        const bool numeric = msg.find("non-finite") != std::string::npos ||
                             msg.find("diverged") != std::string::npos;
        return numeric ? kExitNumeric : kExitConfig;
    }
    return kExitConfig;
}
