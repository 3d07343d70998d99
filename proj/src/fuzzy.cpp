#include "fuzzyts/fuzzy.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace fuzzyts {

static inline double gauss(double m, double sigma, double x) {
    const double z = (x - m) / sigma;
    return std::exp(-0.5 * z * z);
}

double eval_umf(double x, const It2Mf& mf) {
    if (x < mf.m1) return gauss(mf.m1, mf.sigma, x);
    if (x > mf.m2) return gauss(mf.m2, mf.sigma, x);
    return 1.0;
}

double eval_lmf(double x, const It2Mf& mf) {
    // Tie at the midpoint goes to the m2 branch.
    if (x <= 0.5 * (mf.m1 + mf.m2)) return gauss(mf.m2, mf.sigma, x);
    return gauss(mf.m1, mf.sigma, x);
}

FiringInterval fire_rule(std::span<const double> memberships_lower,
                         std::span<const double> memberships_upper) {
    assert(memberships_lower.size() == memberships_upper.size());
    FiringInterval r{1.0, 1.0};
    for (std::size_t j = 0; j < memberships_lower.size(); ++j) {
        r.lower *= memberships_lower[j];
        r.upper *= memberships_upper[j];
    }
    return r;
}

double eval_co_antecedent(std::span<const double> x,
                          std::span<const CoMf> mfs) {
    assert(x.size() == mfs.size());
    double p = 1.0;
    for (std::size_t j = 0; j < x.size(); ++j)
        p *= gauss(mfs[j].m, mfs[j].sigma, x[j]);
    return p;
}

double log_grade(double grade) {
    const double g = std::clamp(grade, kGradeClamp, 1.0 - kGradeClamp);
    return std::log(g);
}

void rule_log_sums(std::span<const double> x, std::span<const It2Mf> mfs,
                   double& sum_log_lower, double& sum_log_upper) {
    assert(x.size() == mfs.size());
    double lo = 0.0, up = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        lo += log_grade(eval_lmf(x[j], mfs[j]));
        up += log_grade(eval_umf(x[j], mfs[j]));
    }
    sum_log_lower = lo;
    sum_log_upper = up;
}

double co_log_sum(std::span<const double> x, std::span<const CoMf> mfs) {
    assert(x.size() == mfs.size());
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j)
        s += log_grade(gauss(mfs[j].m, mfs[j].sigma, x[j]));
    return s;
}

double transform_from_log_sum(double sum_log) {
    // sum_log < 0 is guaranteed by the grade clamp.
    return -1.0 / sum_log;
}

FiringInterval transform_firing(double rule_lower, double rule_upper,
                                double co) {
    const double lco = log_grade(co);
    return {transform_from_log_sum(log_grade(rule_lower) + lco),
            transform_from_log_sum(log_grade(rule_upper) + lco)};
}

}  // namespace fuzzyts
