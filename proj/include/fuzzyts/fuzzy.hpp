#ifndef FUZZYTS_FUZZY_HPP
#define FUZZYTS_FUZZY_HPP

#include <cstddef>
#include <span>

namespace fuzzyts {

// Smallest admissible membership grade before taking logarithms. Grades are
// clamped to [kGradeClamp, 1 - kGradeClamp] so that log(0) and the division
// by log(1) = 0 in the transformation layer can never occur.
inline constexpr double kGradeClamp = 1e-12;

// Floor for every standard deviation parameter.
inline constexpr double kSigmaMin = 1e-3;

// Gaussian interval type-2 membership function: shared standard deviation,
// uncertain mean in [m1, m2].
struct It2Mf {
    double m1 = 0.0;  // lower mean
    double m2 = 0.0;  // upper mean, invariant m1 <= m2
    double sigma = 1.0;  // > 0
};

// Plain Gaussian membership function used by the per-output co-antecedent
// layer.
struct CoMf {
    double m = 0.0;
    double sigma = 1.0;  // > 0
};

struct FiringInterval {
    double lower = 0.0;
    double upper = 0.0;
};

// Upper membership grade: the Gaussian flattens to 1 on the plateau
// [m1, m2] and follows N(m1, sigma) / N(m2, sigma) on either side.
double eval_umf(double x, const It2Mf& mf);

// Lower membership grade: N(m2, sigma) up to and including the midpoint
// (m1 + m2) / 2, N(m1, sigma) beyond it. Always <= eval_umf(x, mf).
double eval_lmf(double x, const It2Mf& mf);

// Rule firing interval as the algebraic product of per-input grades.
// Prefer the log-sum path below for any real network evaluation; the raw
// product underflows around a dozen small grades.
FiringInterval fire_rule(std::span<const double> memberships_lower,
                         std::span<const double> memberships_upper);

// Co-antecedent activation: product of plain Gaussian grades.
double eval_co_antecedent(std::span<const double> x, std::span<const CoMf> mfs);

// log of a membership grade after clamping into (0, 1).
double log_grade(double grade);

// Sum of clamped log grades of one rule's lower/upper memberships for input x.
// These sums are the quantities the transformation layer and the gradient
// pass actually consume; the raw products are never formed.
void rule_log_sums(std::span<const double> x, std::span<const It2Mf> mfs,
                   double& sum_log_lower, double& sum_log_upper);

// Same for the co-antecedent memberships of one output.
double co_log_sum(std::span<const double> x, std::span<const CoMf> mfs);

// Transformation layer: f = -1 / (sum of log grades). Takes the already
// accumulated log-sums so callers can share them between outputs.
double transform_from_log_sum(double sum_log);

// Convenience wrapper matching the layer contract: combines a rule firing
// interval with a co-antecedent activation. Inputs are raw products in
// (0, 1]; each is clamped before logging, so product == 1 is safe.
FiringInterval transform_firing(double rule_lower, double rule_upper,
                                double co);

}  // namespace fuzzyts

#endif
