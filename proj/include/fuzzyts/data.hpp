#ifndef FUZZYTS_DATA_HPP
#define FUZZYTS_DATA_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fuzzyts/clustering.hpp"
#include "fuzzyts/gradients.hpp"
#include "fuzzyts/matrix.hpp"

namespace fuzzyts {

struct MackeyGlassSpec {
    double tau = 30.0;
    double x0 = 1.2;
    std::size_t length = 1500;   // samples at integer t starting at t_start
    double t_start = 31.0;
    double step = 0.1;           // RK4 step
};

// Integrates dx/dt = 0.2 x(t-tau) / (1 + x(t-tau)^10) - 0.1 x(t) with a
// constant history x(t) = x0 for t <= 0, fixed-step RK4 and linear
// interpolation of the delayed term. Returns samples at integer t.
// tau < 17 leaves the chaotic regime; the caller may warn but it is not an
// error here.
std::vector<double> generate_mackey_glass(const MackeyGlassSpec& spec);

// Adds i.i.d. zero-mean Gaussian noise with std = std_fraction times the
// population std of the clean series.
std::vector<double> add_noise(const std::vector<double>& series,
                              double std_fraction, std::uint64_t seed);

// Calendar fields of one hourly record.
struct TimePoint {
    int month = 1;    // 1..12
    int weekday = 1;  // 1..7, Monday = 1
    int hour = 0;     // 0..23
    int day = 1;      // day of month, drives the 21-day split
};

// A univariate series, optionally with per-row calendar stamps.
struct SeriesTable {
    std::vector<double> values;
    std::vector<TimePoint> calendar;  // empty for synthetic series
    bool has_calendar() const { return !calendar.empty(); }
};

// Hourly CSV with header `timestamp,value` or `timestamp,unmet_power,price`;
// value_column picks the series. Throws std::runtime_error naming the row
// on any malformed record; no imputation.
SeriesTable load_csv(const std::string& path, const std::string& value_column);

void write_series_csv(const std::string& path, const SeriesTable& table);

enum class Scheme { SW, PM, MO };

struct WindowSpec {
    std::vector<int> input_lags;    // strictly increasing, <= 0 offsets
    std::vector<int> output_leads;  // strictly increasing, >= 0 offsets
    Scheme scheme = Scheme::MO;
    bool calendar_features = false;
};

enum class SplitRule { FirstN, FirstDays };

struct SplitSpec {
    SplitRule rule = SplitRule::FirstN;
    std::size_t train_count = 1000;  // FirstN: raw samples in the train range
    int train_days = 21;             // FirstDays: day-of-month cutoff
};

struct WindowedDataset {
    Matrix X;      // normalized inputs, N x n
    Matrix X_raw;  // same rows on the physical scale
    Matrix Y;      // normalized targets, N x K
    Matrix Y_raw;  // targets on the physical scale
    Normalizer normalizer;                  // fitted on training rows of X
    std::vector<double> target_min, target_max;  // per output
    std::vector<std::size_t> train_rows, test_rows;
    std::size_t dropped_windows = 0;  // windows spanning the split seam
    std::vector<int> lags, leads;
    std::size_t calendar_cols = 0;
};

// Builds the full K-target dataset (the MO layout). PM and SW views are
// derived from it with the helpers below. Throws std::runtime_error when
// the series is too short, stating the required minimum.
WindowedDataset build_windows(const SeriesTable& series, const WindowSpec& spec,
                              const SplitSpec& split);

// Single-output dataset for step k (PM member models).
WindowedDataset slice_output(const WindowedDataset& ds, std::size_t k);

// Single-output next-step dataset (SW training target = first lead).
WindowedDataset sw_view(const WindowedDataset& ds);

// Train-row copies for the optimizer.
SampleSet train_samples(const WindowedDataset& ds);
SampleSet test_samples(const WindowedDataset& ds);

}  // namespace fuzzyts

#endif
