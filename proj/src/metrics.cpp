#include "fuzzyts/metrics.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fuzzyts {

double rmse(std::span<const double> pred, std::span<const double> actual) {
    assert(pred.size() == actual.size() && !pred.empty());
    double se = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - actual[i];
        se += d * d;
    }
    return std::sqrt(se / pred.size());
}

double mpe(std::span<const double> pred, std::span<const double> actual,
           double epsilon_floor) {
    assert(pred.size() == actual.size() && !pred.empty());
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        double denom = std::abs(actual[i]);
        if (denom <= epsilon_floor) {
            if (epsilon_floor <= 0.0)
                throw std::runtime_error(
                    "mpe: actual value is zero at index " + std::to_string(i) +
                    "; rerun with --mpe-epsilon to floor near-zero actuals");
            denom = epsilon_floor;
        }
        sum += std::abs(pred[i] - actual[i]) / denom;
    }
    return 100.0 * sum / pred.size();
}

static void normalize_window(const WindowedDataset& ds,
                             std::span<const double> raw,
                             std::vector<double>& out) {
    out.resize(raw.size());
    for (std::size_t c = 0; c < raw.size(); ++c)
        out[c] = ds.normalizer.apply(c, raw[c]);
}

std::vector<double> predict_multistep(const std::vector<NetworkParams>& models,
                                      Scheme scheme,
                                      std::span<const double> x_raw,
                                      const WindowedDataset& ds) {
    const std::size_t K = ds.leads.size();
    std::vector<double> preds(K);
    std::vector<double> xn;
    ForwardTrace trace;

    switch (scheme) {
        case Scheme::MO: {
            if (models.size() != 1 || models[0].K != K)
                throw std::runtime_error("MO scheme expects one K-output model");
            normalize_window(ds, x_raw, xn);
            forward(xn, models[0], trace);
            for (std::size_t k = 0; k < K; ++k)
                preds[k] = trace.y[k] * (ds.target_max[k] - ds.target_min[k]) +
                           ds.target_min[k];
            return preds;
        }
        case Scheme::PM: {
            if (models.size() != K)
                throw std::runtime_error("PM scheme expects one model per lead");
            normalize_window(ds, x_raw, xn);
            for (std::size_t k = 0; k < K; ++k) {
                if (models[k].K != 1)
                    throw std::runtime_error("PM member models must be single-output");
                forward(xn, models[k], trace);
                preds[k] = trace.y[0] * (ds.target_max[k] - ds.target_min[k]) +
                           ds.target_min[k];
            }
            return preds;
        }
        case Scheme::SW: {
            if (models.size() != 1 || models[0].K != 1)
                throw std::runtime_error("SW scheme expects one single-output model");
            // The window only shifts cleanly when lags are uniformly spaced
            // and the leads continue that spacing from lag 0.
            const std::size_t nlags = ds.lags.size();
            if (nlags >= 2) {
                const int stride = ds.lags[1] - ds.lags[0];
                for (std::size_t j = 2; j < nlags; ++j)
                    if (ds.lags[j] - ds.lags[j - 1] != stride)
                        throw std::runtime_error(
                            "SW scheme requires uniformly spaced lags");
                for (std::size_t k = 0; k < K; ++k)
                    if (ds.leads[k] != ds.lags.back() + stride * static_cast<int>(k + 1))
                        throw std::runtime_error(
                            "SW scheme requires leads on the lag stride");
            }
            std::vector<double> window(x_raw.begin(), x_raw.end());
            const std::size_t cal = ds.calendar_cols;
            for (std::size_t k = 0; k < K; ++k) {
                normalize_window(ds, window, xn);
                forward(xn, models[0], trace);
                preds[k] = trace.y[0] * (ds.target_max[k] - ds.target_min[k]) +
                           ds.target_min[k];
                // Slide: drop the oldest lag, append the prediction.
                for (std::size_t j = cal; j + 1 < window.size(); ++j)
                    window[j] = window[j + 1];
                window.back() = preds[k];
                if (cal == 3) {
                    const int stride =
                        nlags >= 2 ? ds.lags[1] - ds.lags[0] : 1;
                    window[2] = std::fmod(window[2] + stride, 24.0);
                }
            }
            return preds;
        }
    }
    throw std::logic_error("unknown scheme");
}

}  // namespace fuzzyts
