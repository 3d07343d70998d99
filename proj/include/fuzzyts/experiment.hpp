#ifndef FUZZYTS_EXPERIMENT_HPP
#define FUZZYTS_EXPERIMENT_HPP

#include <string>
#include <vector>

#include "fuzzyts/config.hpp"
#include "fuzzyts/data.hpp"
#include "fuzzyts/metrics.hpp"
#include "fuzzyts/structure.hpp"

namespace fuzzyts {

struct ExperimentConfig {
    // data source
    std::string source = "mackey-glass";  // or "csv"
    std::string csv_path;
    std::string csv_value_column = "value";
    MackeyGlassSpec mg;
    double noise_std_fraction = 0.0;
    std::uint64_t data_seed = 0;

    WindowSpec window;  // defaults set by load_experiment_config
    SplitSpec split;

    StructureConfig structure;
    double mpe_epsilon = 0.0;
    std::string out_dir = ".";
};

// Fills an ExperimentConfig from a flat config file. Unset keys fall back
// to the chaotic-series multi-output defaults. Throws std::runtime_error
// on unknown keys or malformed values.
ExperimentConfig load_experiment_config(const ConfigFile& file);

struct EvalReport {
    std::vector<double> train_rmse, test_rmse;  // per output step
    std::vector<double> train_mpe, test_mpe;
    double avg_train_rmse = 0, avg_test_rmse = 0;
    double avg_train_mpe = 0, avg_test_mpe = 0;
    std::vector<std::size_t> rule_counts;  // one per trained model
    std::size_t dropped_windows = 0;
    double wall_seconds = 0.0;
};

struct ExperimentResult {
    std::vector<Model> models;  // 1 (MO, SW) or K (PM)
    WindowedDataset dataset;
    std::vector<LogEntry> log;  // concatenated over PM members
    EvalReport report;
};

// End-to-end: data -> windows -> structure learning -> evaluation.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Evaluation only, for a pre-trained model set.
EvalReport evaluate_models(const std::vector<Model>& models, Scheme scheme,
                           const WindowedDataset& ds, double mpe_epsilon);

// Artifact writers; all use fixed formatting so reruns are byte-identical.
void write_metrics_csv(const std::string& path, const EvalReport& report);
void write_predictions_csv(const std::string& path,
                           const std::vector<Model>& models, Scheme scheme,
                           const WindowedDataset& ds);
void write_firing_csv(const std::string& path, const NetworkParams& params,
                      const WindowedDataset& ds);
void write_learning_log(const std::string& path,
                        const std::vector<LogEntry>& log);

}  // namespace fuzzyts

#endif
