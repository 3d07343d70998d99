#include "fuzzyts/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace fuzzyts {

namespace {

constexpr double kBoundaryMargin = 1e-5;

NetworkParams random_network(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> dn(1, 4), dm(1, 3), dk(1, 3);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_real_distribution<double> gap(0.01, 0.3);
    std::uniform_real_distribution<double> usig(0.2, 0.8);
    std::uniform_real_distribution<double> uc(-1.0, 1.0);
    std::uniform_real_distribution<double> us(0.05, 0.5);
    std::uniform_real_distribution<double> uq(0.05, 0.95);

    NetworkParams p;
    p.resize(dn(rng), dm(rng), dk(rng));
    for (auto& mf : p.antecedents) {
        mf.m1 = u01(rng);
        mf.m2 = mf.m1 + gap(rng);
        mf.sigma = usig(rng);
    }
    for (auto& mf : p.co_antecedents) {
        mf.m = u01(rng);
        mf.sigma = usig(rng);
    }
    for (auto& v : p.consequents.c) v = uc(rng);
    for (auto& v : p.consequents.s) v = us(rng);
    for (auto& v : p.reduction.q_l) v = uq(rng);
    for (auto& v : p.reduction.q_r) v = uq(rng);
    for (auto& v : p.reduction.q_o) v = uq(rng);
    p.link = uq(rng);
    return p;
}

// Antecedent partials are undefined where an input coincides with a branch
// point of the membership interval (m1, m2 or their midpoint).
bool near_branch(const It2Mf& mf, double xj) {
    const double mid = 0.5 * (mf.m1 + mf.m2);
    return std::abs(xj - mf.m1) < kBoundaryMargin ||
           std::abs(xj - mf.m2) < kBoundaryMargin ||
           std::abs(xj - mid) < kBoundaryMargin;
}

double loss_at(const NetworkParams& p, std::span<const double> x,
               std::span<const double> t, ForwardTrace& trace) {
    forward(x, p, trace);
    return loss(trace.y, t);
}

}  // namespace

GradCheckReport run_grad_check(const GradCheckConfig& config) {
    GradCheckReport report;
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    for (std::size_t trial = 0; trial < config.trials; ++trial) {
        NetworkParams p = random_network(rng);
        std::vector<double> x(p.n), t(p.K);
        for (auto& v : x) v = u01(rng);
        for (auto& v : t) v = u01(rng);

        ForwardTrace trace;
        trace.resize(p.n, p.M, p.K);
        forward(x, p, trace);
        GradientSet grads;
        grads.resize(p);
        backward(trace, x, t, p, TrainMode::Stage2Global, grads);

        const auto analytic = gradient_scalars(grads, p, /*stage2=*/true);
        const auto scalars = trainable_scalars(p, /*stage2=*/true);

        for (std::size_t idx = 0; idx < scalars.size(); ++idx) {
            // The first 3*M*n scalars are the antecedent triples (m1, m2,
            // sigma) in rule-major order; skip the ones whose input sits on
            // a branch boundary.
            if (idx < 3 * p.M * p.n) {
                const std::size_t pair = idx / 3;
                const std::size_t j = pair % p.n;
                if (near_branch(p.antecedents[pair], x[j])) {
                    ++report.skipped;
                    continue;
                }
            }
            double* s = scalars[idx];
            const double saved = *s;
            *s = saved + config.step;
            const double lp = loss_at(p, x, t, trace);
            *s = saved - config.step;
            const double lm = loss_at(p, x, t, trace);
            *s = saved;

            const double fd = (lp - lm) / (2.0 * config.step);
            const double a = *analytic[idx];
            const double err = std::abs(a - fd);
            const double tol =
                config.rel_tol * std::max(std::abs(a), std::abs(fd)) +
                config.abs_floor;
            const double denom = std::max({std::abs(a), std::abs(fd), 1e-12});
            report.max_rel_err = std::max(report.max_rel_err, err / denom);
            ++report.checked;
            if (err > tol) {
                report.passed = false;
                std::ostringstream msg;
                msg << "trial " << trial << " scalar " << idx
                    << ": analytic " << a << " vs fd " << fd;
                report.failures.push_back(msg.str());
            }
        }
    }
    return report;
}

}  // namespace fuzzyts
