#include "fuzzyts/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace fuzzyts {

Normalizer Normalizer::fit(const Matrix& data) {
    if (data.rows < 2) throw std::invalid_argument("Normalizer: need >= 2 rows");
    Normalizer nz;
    nz.min_.assign(data.cols, 0.0);
    nz.max_.assign(data.cols, 0.0);
    for (std::size_t c = 0; c < data.cols; ++c) {
        double lo = data(0, c), hi = data(0, c);
        for (std::size_t r = 1; r < data.rows; ++r) {
            lo = std::min(lo, data(r, c));
            hi = std::max(hi, data(r, c));
        }
        if (!(hi > lo))
            throw std::invalid_argument("Normalizer: constant column " +
                                        std::to_string(c));
        nz.min_[c] = lo;
        nz.max_[c] = hi;
    }
    return nz;
}

void Normalizer::apply_rows(Matrix& data) const {
    for (std::size_t r = 0; r < data.rows; ++r)
        for (std::size_t c = 0; c < data.cols; ++c)
            data(r, c) = apply(c, data(r, c));
}

static double sq_dist(const double* a, const double* b, std::size_t n) {
    double d = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double t = a[j] - b[j];
        d += t * t;
    }
    return d;
}

FcmResult fcm(const Matrix& data, const FcmConfig& config) {
    const std::size_t N = data.rows, n = data.cols, C = config.n_clusters;
    if (N < C || C < 1) throw std::invalid_argument("fcm: need N >= n_clusters >= 1");
    const double m = config.fuzzifier;
    const double exponent = 1.0 / (m - 1.0);

    FcmResult res;
    res.membership.resize(N, C);
    Matrix& U = res.membership;

    // Seeded random membership rows, normalized to sum 1.
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unif(0.01, 1.0);
    for (std::size_t r = 0; r < N; ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < C; ++c) sum += (U(r, c) = unif(rng));
        for (std::size_t c = 0; c < C; ++c) U(r, c) /= sum;
    }

    Matrix centroids(C, n), prev(C, n);
    Matrix d2(N, C);
    for (std::size_t it = 0; it < config.max_iter; ++it) {
        // Centroid update.
        prev = centroids;
        for (std::size_t c = 0; c < C; ++c) {
            double wsum = 0.0;
            std::fill(centroids.row(c), centroids.row(c) + n, 0.0);
            for (std::size_t r = 0; r < N; ++r) {
                const double w = std::pow(U(r, c), m);
                wsum += w;
                for (std::size_t j = 0; j < n; ++j)
                    centroids(c, j) += w * data(r, j);
            }
            for (std::size_t j = 0; j < n; ++j) centroids(c, j) /= wsum;
        }

        // Distances and membership update.
        double J = 0.0;
        for (std::size_t r = 0; r < N; ++r) {
            std::size_t zero_at = C;
            for (std::size_t c = 0; c < C; ++c) {
                d2(r, c) = sq_dist(data.row(r), centroids.row(c), n);
                if (d2(r, c) == 0.0 && zero_at == C) zero_at = c;
            }
            if (zero_at != C) {
                // Coincident with a centroid: full membership there.
                for (std::size_t c = 0; c < C; ++c) U(r, c) = 0.0;
                U(r, zero_at) = 1.0;
            } else {
                for (std::size_t c = 0; c < C; ++c) {
                    double inv = 0.0;
                    for (std::size_t cc = 0; cc < C; ++cc)
                        inv += std::pow(d2(r, c) / d2(r, cc), exponent);
                    U(r, c) = 1.0 / inv;
                }
            }
            for (std::size_t c = 0; c < C; ++c)
                J += std::pow(U(r, c), m) * d2(r, c);
        }
        res.objective.push_back(J);

        double shift = 0.0;
        if (it > 0)
            for (std::size_t c = 0; c < C; ++c)
                shift = std::max(shift,
                                 std::sqrt(sq_dist(centroids.row(c), prev.row(c), n)));
        if (it > 0 && shift < config.tol) break;
    }

    // Membership-weighted population spreads.
    res.clusters.resize(C);
    for (std::size_t c = 0; c < C; ++c) {
        Cluster& cl = res.clusters[c];
        cl.id = static_cast<int>(c);
        cl.centroid.assign(centroids.row(c), centroids.row(c) + n);
        cl.spread.assign(n, 0.0);
        double wsum = 0.0;
        for (std::size_t r = 0; r < N; ++r) {
            const double w = std::pow(U(r, c), m);
            wsum += w;
            for (std::size_t j = 0; j < n; ++j) {
                const double d = data(r, j) - cl.centroid[j];
                cl.spread[j] += w * d * d;
            }
        }
        for (std::size_t j = 0; j < n; ++j)
            cl.spread[j] = std::max(std::sqrt(cl.spread[j] / wsum), kSigmaMin);
    }
    return res;
}

std::vector<It2Mf> init_rule_antecedent(const Cluster& cluster, double upsilon) {
    std::vector<It2Mf> mfs(cluster.centroid.size());
    for (std::size_t j = 0; j < mfs.size(); ++j) {
        double a = cluster.centroid[j] * (1.0 - upsilon);
        double b = cluster.centroid[j] * (1.0 + upsilon);
        if (a > b) std::swap(a, b);  // negative centroid inverts the interval
        mfs[j] = {a, b, std::max(cluster.spread[j], kSigmaMin)};
    }
    return mfs;
}

std::vector<CoMf> init_co_antecedent(const Matrix& data, std::size_t outputs) {
    if (data.rows == 0) throw std::invalid_argument("init_co_antecedent: empty data");
    const std::size_t n = data.cols;
    std::vector<CoMf> row(n);
    for (std::size_t j = 0; j < n; ++j) {
        double mean = 0.0;
        for (std::size_t r = 0; r < data.rows; ++r) mean += data(r, j);
        mean /= data.rows;
        double var = 0.0;
        for (std::size_t r = 0; r < data.rows; ++r) {
            const double d = data(r, j) - mean;
            var += d * d;
        }
        row[j] = {mean, std::max(std::sqrt(var / data.rows), kSigmaMin)};
    }
    std::vector<CoMf> all;
    all.reserve(outputs * n);
    for (std::size_t k = 0; k < outputs; ++k)
        all.insert(all.end(), row.begin(), row.end());
    return all;
}

}  // namespace fuzzyts
