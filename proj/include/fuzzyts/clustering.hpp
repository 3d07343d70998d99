#ifndef FUZZYTS_CLUSTERING_HPP
#define FUZZYTS_CLUSTERING_HPP

#include <cstdint>
#include <vector>

#include "fuzzyts/fuzzy.hpp"
#include "fuzzyts/matrix.hpp"

namespace fuzzyts {

// Per-column max-min scaler fitted on training data. apply() maps the
// training range onto [0,1]; values outside the fitted range extrapolate.
class Normalizer {
public:
    static Normalizer fit(const Matrix& data);  // throws on constant column

    double apply(std::size_t col, double v) const {
        return (v - min_[col]) / (max_[col] - min_[col]);
    }
    double invert(std::size_t col, double v) const {
        return v * (max_[col] - min_[col]) + min_[col];
    }
    void apply_rows(Matrix& data) const;

    std::size_t dims() const { return min_.size(); }
    double min(std::size_t col) const { return min_[col]; }
    double max(std::size_t col) const { return max_[col]; }

private:
    std::vector<double> min_, max_;
};

struct Cluster {
    std::vector<double> centroid;  // per dimension
    std::vector<double> spread;    // per dimension, >= kSigmaMin
    int id = -1;
};

struct FcmConfig {
    std::size_t n_clusters = 5;
    double fuzzifier = 2.0;
    double tol = 1e-6;
    std::size_t max_iter = 300;
    std::uint64_t seed = 0;
};

struct FcmResult {
    std::vector<Cluster> clusters;
    Matrix membership;                // N x n_clusters, rows sum to 1
    std::vector<double> objective;    // J_m per iteration, non-increasing
};

// Bezdek fuzzy c-means with membership-weighted population spreads.
FcmResult fcm(const Matrix& data, const FcmConfig& config);

// Interval antecedents from a cluster: means spread multiplicatively by
// upsilon around the centroid, then ordered so m1 <= m2.
std::vector<It2Mf> init_rule_antecedent(const Cluster& cluster, double upsilon);

// Co-antecedents from global column statistics (population std), identical
// for every output at initialization.
std::vector<CoMf> init_co_antecedent(const Matrix& data, std::size_t outputs);

}  // namespace fuzzyts

#endif
