#ifndef FUZZYTS_GRADIENTS_HPP
#define FUZZYTS_GRADIENTS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "fuzzyts/network.hpp"

namespace fuzzyts {

// Gradient of the loss with respect to every trainable scalar, same shapes
// as NetworkParams.
struct GradientSet {
    std::size_t n = 0, M = 0, K = 0;
    std::vector<double> d_m1, d_m2, d_sigma;  // M * n antecedent partials
    std::vector<double> d_co_m, d_co_sigma;   // K * n
    std::vector<double> d_c, d_s;             // consequent tensors
    std::vector<double> d_q_l, d_q_r, d_q_o;  // K each
    double d_link = 0.0;

    void resize(const NetworkParams& params);
    void clear();
};

struct TrainConfig {
    double eta = 0.03;
    std::size_t iterations = 1000;  // full passes over the dataset
    TrainMode mode = TrainMode::Stage1Local;
    std::uint64_t seed = 0;
};

// Half sum of squared per-output errors.
double loss(std::span<const double> predictions, std::span<const double> targets);

// Analytic gradient of loss(forward(x)) for one sample. trace must have
// been produced by forward() on (x, params). Stage1Local zeroes the
// antecedent It2MF partials.
void backward(const ForwardTrace& trace, std::span<const double> x,
              std::span<const double> targets, const NetworkParams& params,
              TrainMode mode, GradientSet& grads);

// dE/dl alone, by direct differentiation of the closed-form link chain.
double grad_l(const ForwardTrace& trace, std::span<const double> targets,
              const NetworkParams& params);

// One gradient-descent step followed by constraint projection:
// s >= 0, q and l clipped to [0,1], sigma floored, m1 <= m2 repaired by
// moving both to their midpoint.
void sgd_step(NetworkParams& params, const GradientSet& grads, double eta);

// Projection alone (idempotent on feasible params).
void project(NetworkParams& params);

struct SampleSet {
    Matrix X;  // N x n, normalized
    Matrix Y;  // N x K, normalized
};

// Per-sample SGD in a seeded shuffled order; returns the mean squared
// error over the whole set after the final pass. Throws std::runtime_error
// if the loss goes non-finite (learning-rate blow-up).
double train_epochs(const SampleSet& data, NetworkParams& params,
                    const TrainConfig& config);

// MSE of the current params over a sample set (mean over samples and outputs).
double evaluate_mse(const SampleSet& data, const NetworkParams& params);

// Pointers to every trainable scalar in a fixed canonical order, matching
// trainable_count(). Used by the finite-difference oracle and tests.
std::vector<double*> trainable_scalars(NetworkParams& params, bool stage2);
std::vector<const double*> gradient_scalars(const GradientSet& grads,
                                            const NetworkParams& params,
                                            bool stage2);

}  // namespace fuzzyts

#endif
