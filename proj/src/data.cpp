#include "fuzzyts/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace fuzzyts {

static double mg_rhs(double x, double x_delayed) {
    const double p = std::pow(x_delayed, 10.0);
    return 0.2 * x_delayed / (1.0 + p) - 0.1 * x;
}

std::vector<double> generate_mackey_glass(const MackeyGlassSpec& spec) {
    const double h = spec.step;
    const double t_end = spec.t_start + static_cast<double>(spec.length - 1);
    const std::size_t steps = static_cast<std::size_t>(std::llround(t_end / h));

    // Trajectory on the integration grid; constant history before t = 0.
    std::vector<double> traj;
    traj.reserve(steps + 1);
    traj.push_back(spec.x0);

    auto delayed = [&](double t) -> double {
        const double td = t - spec.tau;
        if (td <= 0.0) return spec.x0;
        const double g = td / h;
        const std::size_t i0 = static_cast<std::size_t>(g);
        const double frac = g - static_cast<double>(i0);
        const std::size_t i1 = std::min(i0 + 1, traj.size() - 1);
        return traj[i0] + (traj[i1] - traj[i0]) * frac;
    };

    for (std::size_t i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) * h;
        const double x = traj.back();
        const double xd0 = delayed(t);
        const double xdh = delayed(t + 0.5 * h);
        const double xd1 = delayed(t + h);
        const double k1 = mg_rhs(x, xd0);
        const double k2 = mg_rhs(x + 0.5 * h * k1, xdh);
        const double k3 = mg_rhs(x + 0.5 * h * k2, xdh);
        const double k4 = mg_rhs(x + h * k3, xd1);
        traj.push_back(x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    }

    std::vector<double> samples(spec.length);
    for (std::size_t s = 0; s < spec.length; ++s) {
        const double t = spec.t_start + static_cast<double>(s);
        const std::size_t i = static_cast<std::size_t>(std::llround(t / h));
        samples[s] = traj[std::min(i, traj.size() - 1)];
    }
    return samples;
}

std::vector<double> add_noise(const std::vector<double>& series,
                              double std_fraction, std::uint64_t seed) {
    if (std_fraction == 0.0) return series;
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= series.size();
    double var = 0.0;
    for (double v : series) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / series.size());

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, std_fraction * sd);
    std::vector<double> out(series.size());
    for (std::size_t i = 0; i < series.size(); ++i)
        out[i] = series[i] + noise(rng);
    return out;
}

// ---------------------------------------------------------------------------
// CSV ingestion

// Days since the civil epoch; standard Gregorian conversion.
static long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

static TimePoint parse_timestamp(const std::string& ts, std::size_t row) {
    // ISO-8601: YYYY-MM-DD[ T]HH:MM[:SS]
    auto fail = [&]() {
        throw std::runtime_error("csv row " + std::to_string(row) +
                                 ": unparseable timestamp '" + ts + "'");
    };
    if (ts.size() < 16 || ts[4] != '-' || ts[7] != '-' ||
        (ts[10] != ' ' && ts[10] != 'T') || ts[13] != ':')
        fail();
    int y, mo, d, hh;
    auto num = [&](std::size_t pos, std::size_t len, int& out) {
        auto res = std::from_chars(ts.data() + pos, ts.data() + pos + len, out);
        if (res.ec != std::errc{}) fail();
    };
    num(0, 4, y);
    num(5, 2, mo);
    num(8, 2, d);
    num(11, 2, hh);
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || hh < 0 || hh > 23) fail();
    TimePoint tp;
    tp.month = mo;
    tp.day = d;
    tp.hour = hh;
    // days_from_civil is 0 at 1970-01-01, a Thursday; map to Monday = 1.
    const long dow = ((days_from_civil(y, mo, d) + 3) % 7 + 7) % 7;
    tp.weekday = static_cast<int>(dow) + 1;
    return tp;
}

static std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    return fields;
}

SeriesTable load_csv(const std::string& path, const std::string& value_column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open csv: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("csv is empty: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv_line(line);
    if (header.empty() || header[0] != "timestamp")
        throw std::runtime_error("csv header must start with 'timestamp'");
    std::size_t col = header.size();
    for (std::size_t i = 1; i < header.size(); ++i)
        if (header[i] == value_column) col = i;
    if (col == header.size())
        throw std::runtime_error("csv has no column '" + value_column + "'");

    SeriesTable table;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty())
            throw std::runtime_error("csv row " + std::to_string(row) +
                                     ": empty line");
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw std::runtime_error("csv row " + std::to_string(row) +
                                     ": expected " +
                                     std::to_string(header.size()) + " fields");
        table.calendar.push_back(parse_timestamp(fields[0], row));
        double v;
        auto res = std::from_chars(fields[col].data(),
                                   fields[col].data() + fields[col].size(), v);
        if (res.ec != std::errc{} || !std::isfinite(v))
            throw std::runtime_error("csv row " + std::to_string(row) +
                                     ": bad value '" + fields[col] + "'");
        table.values.push_back(v);
    }
    return table;
}

void write_series_csv(const std::string& path, const SeriesTable& table) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open csv for writing: " + path);
    out << "timestamp,value\n";
    // Synthetic series get synthetic hourly stamps for schema uniformity.
    long day0 = days_from_civil(2021, 1, 1);
    char buf[32];
    for (std::size_t i = 0; i < table.values.size(); ++i) {
        if (table.has_calendar()) {
            const TimePoint& tp = table.calendar[i];
            std::snprintf(buf, sizeof buf, "2021-%02d-%02dT%02d:00",
                          tp.month, tp.day, tp.hour);
        } else {
            const long days = day0 + static_cast<long>(i / 24);
            // Re-derive the civil date from the day count.
            long z = days + 719468;
            const long era = (z >= 0 ? z : z - 146096) / 146097;
            const unsigned doe = static_cast<unsigned>(z - era * 146097);
            const unsigned yoe =
                (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
            const long y = static_cast<long>(yoe) + era * 400;
            const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
            const unsigned mp = (5 * doy + 2) / 153;
            const unsigned d = doy - (153 * mp + 2) / 5 + 1;
            const unsigned m = mp + (mp < 10 ? 3 : -9);
            std::snprintf(buf, sizeof buf, "%04ld-%02u-%02uT%02zu:00",
                          y + (m <= 2), m, d, i % 24);
        }
        out << buf << ',' << table.values[i] << '\n';
    }
}

// ---------------------------------------------------------------------------
// Windowing

static void validate_window_spec(const WindowSpec& spec) {
    if (spec.input_lags.empty() || spec.output_leads.empty())
        throw std::runtime_error("window spec needs lags and leads");
    for (std::size_t i = 0; i < spec.input_lags.size(); ++i) {
        if (spec.input_lags[i] > 0)
            throw std::runtime_error("input lags must be <= 0");
        if (i > 0 && spec.input_lags[i] <= spec.input_lags[i - 1])
            throw std::runtime_error("input lags must be strictly increasing");
    }
    for (std::size_t i = 0; i < spec.output_leads.size(); ++i) {
        if (spec.output_leads[i] < 0)
            throw std::runtime_error("output leads must be >= 0");
        if (i > 0 && spec.output_leads[i] <= spec.output_leads[i - 1])
            throw std::runtime_error("output leads must be strictly increasing");
    }
}

WindowedDataset build_windows(const SeriesTable& series, const WindowSpec& spec,
                              const SplitSpec& split) {
    validate_window_spec(spec);
    if (spec.calendar_features && !series.has_calendar())
        throw std::runtime_error("calendar features requested but series has no timestamps");

    const int min_lag = spec.input_lags.front();
    const int max_lead = spec.output_leads.back();
    const std::size_t len = series.values.size();
    const std::size_t needed =
        static_cast<std::size_t>(-min_lag + max_lead + 1);
    if (len < needed)
        throw std::runtime_error("series too short for windowing: need >= " +
                                 std::to_string(needed) + " samples, have " +
                                 std::to_string(len));

    const std::size_t cal = spec.calendar_features ? 3 : 0;
    const std::size_t n = cal + spec.input_lags.size();
    const std::size_t K = spec.output_leads.size();

    WindowedDataset ds;
    ds.lags = spec.input_lags;
    ds.leads = spec.output_leads;
    ds.calendar_cols = cal;

    // Row-level train membership.
    auto row_in_train = [&](std::size_t r) {
        if (split.rule == SplitRule::FirstN) return r < split.train_count;
        return series.calendar[r].day <= split.train_days;
    };

    std::vector<std::vector<double>> rows_x;
    std::vector<std::vector<double>> rows_y;
    std::vector<int> membership;  // 1 train, 0 test

    const std::size_t t_first = static_cast<std::size_t>(-min_lag);
    const std::size_t t_last = len - 1 - static_cast<std::size_t>(max_lead);
    for (std::size_t t = t_first; t <= t_last; ++t) {
        bool any_train = false, any_test = false;
        auto touch = [&](std::size_t r) {
            (row_in_train(r) ? any_train : any_test) = true;
        };
        for (int lag : spec.input_lags) touch(t + lag);
        for (int lead : spec.output_leads) touch(t + lead);
        if (any_train && any_test) {
            ++ds.dropped_windows;
            continue;
        }
        std::vector<double> xr(n), yr(K);
        if (cal) {
            const TimePoint& tp =
                series.calendar[t + spec.input_lags.back()];
            xr[0] = tp.month;
            xr[1] = tp.weekday;
            xr[2] = tp.hour;
        }
        for (std::size_t j = 0; j < spec.input_lags.size(); ++j)
            xr[cal + j] = series.values[t + spec.input_lags[j]];
        for (std::size_t k = 0; k < K; ++k)
            yr[k] = series.values[t + spec.output_leads[k]];
        rows_x.push_back(std::move(xr));
        rows_y.push_back(std::move(yr));
        membership.push_back(any_train ? 1 : 0);
    }

    const std::size_t N = rows_x.size();
    ds.X.resize(N, n);
    ds.Y_raw.resize(N, K);
    for (std::size_t r = 0; r < N; ++r) {
        std::copy(rows_x[r].begin(), rows_x[r].end(), ds.X.row(r));
        std::copy(rows_y[r].begin(), rows_y[r].end(), ds.Y_raw.row(r));
        (membership[r] ? ds.train_rows : ds.test_rows).push_back(r);
    }
    if (ds.train_rows.size() < 2)
        throw std::runtime_error("not enough training windows");

    // Fit the input normalizer on training rows only.
    Matrix train_x(ds.train_rows.size(), n);
    for (std::size_t i = 0; i < ds.train_rows.size(); ++i)
        std::copy(ds.X.row(ds.train_rows[i]), ds.X.row(ds.train_rows[i]) + n,
                  train_x.row(i));
    ds.normalizer = Normalizer::fit(train_x);
    ds.X_raw = ds.X;
    ds.normalizer.apply_rows(ds.X);

    // Targets of the same variable share the scaling of its most recent lag.
    const std::size_t value_col = n - 1;
    ds.target_min.assign(K, ds.normalizer.min(value_col));
    ds.target_max.assign(K, ds.normalizer.max(value_col));
    ds.Y.resize(N, K);
    for (std::size_t r = 0; r < N; ++r)
        for (std::size_t k = 0; k < K; ++k)
            ds.Y(r, k) = (ds.Y_raw(r, k) - ds.target_min[k]) /
                         (ds.target_max[k] - ds.target_min[k]);
    return ds;
}

WindowedDataset slice_output(const WindowedDataset& ds, std::size_t k) {
    WindowedDataset out = ds;
    out.leads = {ds.leads[k]};
    out.target_min = {ds.target_min[k]};
    out.target_max = {ds.target_max[k]};
    out.Y.resize(ds.Y.rows, 1);
    out.Y_raw.resize(ds.Y_raw.rows, 1);
    for (std::size_t r = 0; r < ds.Y.rows; ++r) {
        out.Y(r, 0) = ds.Y(r, k);
        out.Y_raw(r, 0) = ds.Y_raw(r, k);
    }
    return out;
}

WindowedDataset sw_view(const WindowedDataset& ds) { return slice_output(ds, 0); }

static SampleSet gather(const WindowedDataset& ds,
                        const std::vector<std::size_t>& rows) {
    SampleSet s;
    s.X.resize(rows.size(), ds.X.cols);
    s.Y.resize(rows.size(), ds.Y.cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::copy(ds.X.row(rows[i]), ds.X.row(rows[i]) + ds.X.cols, s.X.row(i));
        std::copy(ds.Y.row(rows[i]), ds.Y.row(rows[i]) + ds.Y.cols, s.Y.row(i));
    }
    return s;
}

SampleSet train_samples(const WindowedDataset& ds) {
    return gather(ds, ds.train_rows);
}
SampleSet test_samples(const WindowedDataset& ds) {
    return gather(ds, ds.test_rows);
}

}  // namespace fuzzyts
