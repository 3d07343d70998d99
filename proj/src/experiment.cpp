#include "fuzzyts/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace fuzzyts {

namespace {

Scheme parse_scheme(const std::string& s) {
    if (s == "SW" || s == "sw") return Scheme::SW;
    if (s == "PM" || s == "pm") return Scheme::PM;
    if (s == "MO" || s == "mo") return Scheme::MO;
    throw std::runtime_error("config: scheme must be SW, PM or MO, got '" + s +
                             "'");
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

ExperimentConfig load_experiment_config(const ConfigFile& file) {
    ExperimentConfig cfg;
    cfg.source = file.get_string_or("source", "mackey-glass");
    cfg.csv_path = file.get_string_or("csv_path", "");
    cfg.csv_value_column = file.get_string_or("csv_value_column", "value");
    cfg.mg.tau = file.get_number_or("tau", 30.0);
    cfg.mg.x0 = file.get_number_or("x0", 1.2);
    cfg.mg.length =
        static_cast<std::size_t>(file.get_number_or("length", 1500));
    cfg.noise_std_fraction = file.get_number_or("noise_std_fraction", 0.0);
    cfg.data_seed =
        static_cast<std::uint64_t>(file.get_number_or("data_seed", 0));

    if (file.has("input_lags"))
        cfg.window.input_lags = file.get_int_array("input_lags");
    else
        cfg.window.input_lags = {-18, -16, -14, -12, -10, -8, -6, -4, -2};
    if (file.has("output_leads"))
        cfg.window.output_leads = file.get_int_array("output_leads");
    else
        cfg.window.output_leads = {0, 2, 4};
    cfg.window.calendar_features =
        file.get_bool_or("calendar_features", false);
    cfg.window.scheme = parse_scheme(file.get_string_or("scheme", "MO"));

    if (file.has("train_days")) {
        cfg.split.rule = SplitRule::FirstDays;
        cfg.split.train_days =
            static_cast<int>(file.get_number("train_days"));
    } else {
        cfg.split.rule = SplitRule::FirstN;
        cfg.split.train_count =
            static_cast<std::size_t>(file.get_number_or("train_points", 1000));
    }

    cfg.structure.grow_threshold = file.get_number_or("T_g", 0.0025);
    cfg.structure.remove_threshold = file.get_number_or("T_r", 0.0025);
    cfg.structure.eta = file.get_number_or("eta", 0.03);
    cfg.structure.stage1_iterations = static_cast<std::size_t>(
        file.get_number_or("stage1_iterations", 1000));
    cfg.structure.stage2_iterations = static_cast<std::size_t>(
        file.get_number_or("stage2_iterations", 3000));
    cfg.structure.episode_max =
        static_cast<std::size_t>(file.get_number_or("episode_max", 100));
    cfg.structure.n_clusters =
        static_cast<std::size_t>(file.get_number_or("n_clusters", 5));
    cfg.structure.upsilon = file.get_number_or("upsilon", 0.1);
    cfg.structure.link_init = file.get_number_or("l_init", 0.1);
    cfg.structure.seed =
        static_cast<std::uint64_t>(file.get_number_or("seed", 0));
    cfg.structure.options.no_co_antecedent =
        file.get_bool_or("no_co_antecedent", false);
    cfg.structure.options.no_link = file.get_bool_or("no_link", false);
    cfg.structure.options.crisp_consequent =
        file.get_bool_or("crisp_consequent", false);

    cfg.mpe_epsilon = file.get_number_or("mpe_epsilon", 0.0);
    cfg.out_dir = file.get_string_or("out_dir", ".");

    const auto unused = file.unused_keys();
    if (!unused.empty())
        throw std::runtime_error("config: unknown key '" + unused.front() +
                                 "'");
    return cfg;
}

EvalReport evaluate_models(const std::vector<Model>& models, Scheme scheme,
                           const WindowedDataset& ds, double mpe_epsilon) {
    EvalReport report;
    report.dropped_windows = ds.dropped_windows;
    for (const Model& m : models)
        report.rule_counts.push_back(m.params.M);

    std::vector<NetworkParams> nets;
    nets.reserve(models.size());
    for (const Model& m : models) nets.push_back(m.params);

    const std::size_t K = ds.leads.size();
    auto eval_split = [&](const std::vector<std::size_t>& rows,
                          std::vector<double>& out_rmse,
                          std::vector<double>& out_mpe) {
        Matrix pred(rows.size(), K), actual(rows.size(), K);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const auto p = predict_multistep(
                nets, scheme, {ds.X_raw.row(rows[r]), ds.X_raw.cols}, ds);
            for (std::size_t k = 0; k < K; ++k) {
                pred(r, k) = p[k];
                actual(r, k) = ds.Y_raw(rows[r], k);
            }
        }
        out_rmse.resize(K);
        out_mpe.resize(K);
        std::vector<double> pc(rows.size()), ac(rows.size());
        for (std::size_t k = 0; k < K; ++k) {
            for (std::size_t r = 0; r < rows.size(); ++r) {
                pc[r] = pred(r, k);
                ac[r] = actual(r, k);
            }
            out_rmse[k] = rmse(pc, ac);
            out_mpe[k] = mpe(pc, ac, mpe_epsilon);
        }
    };
    eval_split(ds.train_rows, report.train_rmse, report.train_mpe);
    eval_split(ds.test_rows, report.test_rmse, report.test_mpe);

    auto mean = [](const std::vector<double>& v) {
        return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    };
    report.avg_train_rmse = mean(report.train_rmse);
    report.avg_test_rmse = mean(report.test_rmse);
    report.avg_train_mpe = mean(report.train_mpe);
    report.avg_test_mpe = mean(report.test_mpe);
    return report;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();

    SeriesTable series;
    if (config.source == "mackey-glass") {
        series.values = generate_mackey_glass(config.mg);
    } else if (config.source == "csv") {
        if (config.csv_path.empty())
            throw std::runtime_error("config: csv source needs csv_path");
        series = load_csv(config.csv_path, config.csv_value_column);
    } else {
        throw std::runtime_error("config: source must be mackey-glass or csv");
    }
    if (config.noise_std_fraction > 0.0)
        series.values = add_noise(series.values, config.noise_std_fraction,
                                  config.data_seed);

    ExperimentResult result;
    result.dataset = build_windows(series, config.window, config.split);
    const WindowedDataset& ds = result.dataset;

    ModelScaling scaling;
    for (std::size_t c = 0; c < ds.normalizer.dims(); ++c) {
        scaling.input_min.push_back(ds.normalizer.min(c));
        scaling.input_max.push_back(ds.normalizer.max(c));
    }
    scaling.target_min = ds.target_min;
    scaling.target_max = ds.target_max;

    const Scheme scheme = config.window.scheme;
    if (scheme == Scheme::MO) {
        LearnResult lr = learn(train_samples(ds), config.structure);
        result.log = std::move(lr.log);
        result.models.push_back({std::move(lr.params), scaling});
    } else if (scheme == Scheme::PM) {
        for (std::size_t k = 0; k < ds.leads.size(); ++k) {
            const WindowedDataset view = slice_output(ds, k);
            StructureConfig sc = config.structure;
            sc.seed = config.structure.seed + k;
            LearnResult lr = learn(train_samples(view), sc);
            result.log.insert(result.log.end(), lr.log.begin(), lr.log.end());
            ModelScaling ms = scaling;
            ms.target_min = {ds.target_min[k]};
            ms.target_max = {ds.target_max[k]};
            result.models.push_back({std::move(lr.params), ms});
        }
    } else {
        const WindowedDataset view = sw_view(ds);
        LearnResult lr = learn(train_samples(view), config.structure);
        result.log = std::move(lr.log);
        ModelScaling ms = scaling;
        ms.target_min = {ds.target_min[0]};
        ms.target_max = {ds.target_max[0]};
        result.models.push_back({std::move(lr.params), ms});
    }

    result.report =
        evaluate_models(result.models, scheme, ds, config.mpe_epsilon);
    result.report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return result;
}

void write_metrics_csv(const std::string& path, const EvalReport& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "split,step,rmse,mpe\n";
    for (std::size_t k = 0; k < report.train_rmse.size(); ++k)
        out << "train," << (k + 1) << ',' << fmt(report.train_rmse[k]) << ','
            << fmt(report.train_mpe[k]) << '\n';
    out << "train,average," << fmt(report.avg_train_rmse) << ','
        << fmt(report.avg_train_mpe) << '\n';
    for (std::size_t k = 0; k < report.test_rmse.size(); ++k)
        out << "test," << (k + 1) << ',' << fmt(report.test_rmse[k]) << ','
            << fmt(report.test_mpe[k]) << '\n';
    out << "test,average," << fmt(report.avg_test_rmse) << ','
        << fmt(report.avg_test_mpe) << '\n';
}

void write_predictions_csv(const std::string& path,
                           const std::vector<Model>& models, Scheme scheme,
                           const WindowedDataset& ds) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    std::vector<NetworkParams> nets;
    for (const Model& m : models) nets.push_back(m.params);
    const std::size_t K = ds.leads.size();
    out << "row,split,step,actual,predicted\n";
    auto dump = [&](const std::vector<std::size_t>& rows, const char* split) {
        for (std::size_t row : rows) {
            const auto p = predict_multistep(
                nets, scheme, {ds.X_raw.row(row), ds.X_raw.cols}, ds);
            for (std::size_t k = 0; k < K; ++k)
                out << row << ',' << split << ',' << (k + 1) << ','
                    << fmt(ds.Y_raw(row, k)) << ',' << fmt(p[k]) << '\n';
        }
    };
    dump(ds.train_rows, "train");
    dump(ds.test_rows, "test");
}

void write_firing_csv(const std::string& path, const NetworkParams& params,
                      const WindowedDataset& ds) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "row,rule,rule_lower,rule_upper,output,pair_lower,pair_upper\n";
    for (std::size_t row : ds.test_rows) {
        const FiringReport fr =
            firing_report({ds.X.row(row), ds.X.cols}, params);
        for (std::size_t i = 0; i < params.M; ++i)
            for (std::size_t k = 0; k < params.K; ++k)
                out << row << ',' << (i + 1) << ','
                    << fmt(fr.per_rule[i].lower) << ','
                    << fmt(fr.per_rule[i].upper) << ',' << (k + 1) << ','
                    << fmt(fr.per_rule_output[i][k].lower) << ','
                    << fmt(fr.per_rule_output[i][k].upper) << '\n';
    }
}

void write_learning_log(const std::string& path,
                        const std::vector<LogEntry>& log) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "episode action rules best_loss status_flag\n";
    for (const LogEntry& e : log)
        out << e.episode << ' ' << e.action << ' ' << e.rules << ' '
            << fmt(e.best_loss) << ' ' << e.status_flag << '\n';
}

}  // namespace fuzzyts
