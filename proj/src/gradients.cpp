#include "fuzzyts/gradients.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace fuzzyts {

void GradientSet::resize(const NetworkParams& params) {
    n = params.n;
    M = params.M;
    K = params.K;
    d_m1.assign(M * n, 0.0);
    d_m2.assign(M * n, 0.0);
    d_sigma.assign(M * n, 0.0);
    d_co_m.assign(K * n, 0.0);
    d_co_sigma.assign(K * n, 0.0);
    d_c.assign(params.consequents.c.size(), 0.0);
    d_s.assign(params.consequents.s.size(), 0.0);
    d_q_l.assign(K, 0.0);
    d_q_r.assign(K, 0.0);
    d_q_o.assign(K, 0.0);
    d_link = 0.0;
}

void GradientSet::clear() {
    std::fill(d_m1.begin(), d_m1.end(), 0.0);
    std::fill(d_m2.begin(), d_m2.end(), 0.0);
    std::fill(d_sigma.begin(), d_sigma.end(), 0.0);
    std::fill(d_co_m.begin(), d_co_m.end(), 0.0);
    std::fill(d_co_sigma.begin(), d_co_sigma.end(), 0.0);
    std::fill(d_c.begin(), d_c.end(), 0.0);
    std::fill(d_s.begin(), d_s.end(), 0.0);
    std::fill(d_q_l.begin(), d_q_l.end(), 0.0);
    std::fill(d_q_r.begin(), d_q_r.end(), 0.0);
    std::fill(d_q_o.begin(), d_q_o.end(), 0.0);
    d_link = 0.0;
}

double loss(std::span<const double> predictions,
            std::span<const double> targets) {
    assert(predictions.size() == targets.size());
    double e = 0.0;
    for (std::size_t k = 0; k < predictions.size(); ++k) {
        const double d = predictions[k] - targets[k];
        e += d * d;
    }
    return 0.5 * e;
}

static double ipow(double base, std::size_t e) {
    double r = 1.0;
    while (e--) r *= base;
    return r;
}

double grad_l(const ForwardTrace& trace, std::span<const double> targets,
              const NetworkParams& params) {
    const std::size_t K = params.K;
    const double l = params.link;
    double g = 0.0;
    for (std::size_t kk = 1; kk <= K; ++kk) {
        const double err = trace.y[kk - 1] - targets[kk - 1];
        // d/dl of  sum_k l^(kk-k) (1-l) y'_k  +  l^kk x_n
        double dy = static_cast<double>(kk) * ipow(l, kk - 1) * trace.x_last;
        for (std::size_t k = 1; k <= kk; ++k) {
            const std::size_t e = kk - k;
            double term = -ipow(l, e);
            if (e >= 1) term += static_cast<double>(e) * ipow(l, e - 1) * (1.0 - l);
            dy += term * trace.y_prime[k - 1];
        }
        g += err * dy;
    }
    return g;
}

void backward(const ForwardTrace& trace, std::span<const double> x,
              std::span<const double> targets, const NetworkParams& params,
              TrainMode mode, GradientSet& grads) {
    const std::size_t n = params.n, M = params.M, K = params.K;
    if (grads.n != n || grads.M != M || grads.K != K ||
        grads.d_c.size() != params.consequents.c.size())
        grads.resize(params);
    grads.clear();

    const double l = params.options.no_link ? 0.0 : params.link;

    // dE/dy'^k: each pre-link output feeds all downstream linked outputs.
    std::vector<double> g_yprime(K, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
        double g = 0.0;
        for (std::size_t kk = k; kk < K; ++kk)
            g += (trace.y[kk] - targets[kk]) * ipow(l, kk - k) * (1.0 - l);
        g_yprime[k] = g;
    }

    if (!params.options.no_link)
        grads.d_link = grad_l(trace, targets, params);

    // Per-rule accumulators of dE/df summed over outputs, for the shared
    // antecedent partials.
    std::vector<double> acc_up(M, 0.0), acc_lo(M, 0.0);

    for (std::size_t k = 0; k < K; ++k) {
        const double gy = g_yprime[k];
        const double qo = params.reduction.q_o[k];
        const double gyl = gy * qo;
        const double gyr = gy * (1.0 - qo);
        grads.d_q_o[k] += gy * (trace.y_l[k] - trace.y_r[k]);

        const double ql = params.reduction.q_l[k];
        const double qr = params.reduction.q_r[k];
        const double D = trace.denom[k];
        const double yl = trace.y_l[k], yr = trace.y_r[k];

        double sum_dq_l = 0.0, sum_dq_r = 0.0;
        double acc_co = 0.0;  // sum_i dE/df * f^2, for the co-antecedent row
        for (std::size_t i = 0; i < M; ++i) {
            const double flo = trace.f_lo(i, k), fup = trace.f_up(i, k);
            const double wl = trace.w_l(i, k), wr = trace.w_r(i, k);
            sum_dq_l += (fup - flo) * wl;
            sum_dq_r += (fup - flo) * wr;

            // Consequents.
            const double gwl = gyl * ((1.0 - ql) * flo + ql * fup) / D;
            const double gwr = gyr * ((1.0 - qr) * flo + qr * fup) / D;
            const std::size_t ck = params.options.crisp_consequent ? 0 : k;
            const std::size_t b = params.consequents.block(i, ck);
            grads.d_c[b] += gwl + gwr;
            grads.d_s[b] += gwr - gwl;
            for (std::size_t j = 0; j < n; ++j) {
                grads.d_c[b + 1 + j] += (gwl + gwr) * x[j];
                grads.d_s[b + 1 + j] += (gwr - gwl) * std::abs(x[j]);
            }

            // Firing-strength sensitivities.
            const double g_fup =
                gyl * (ql * wl - yl) / D + gyr * (qr * wr - yr) / D;
            const double g_flo = gyl * ((1.0 - ql) * wl - yl) / D +
                                 gyr * ((1.0 - qr) * wr - yr) / D;
            acc_up[i] += g_fup * fup * fup;
            acc_lo[i] += g_flo * flo * flo;
            acc_co += g_fup * fup * fup + g_flo * flo * flo;
        }
        grads.d_q_l[k] += gyl * sum_dq_l / D;
        grads.d_q_r[k] += gyr * sum_dq_r / D;

        if (!params.options.no_co_antecedent) {
            const CoMf* mfs = params.output_mfs(k);
            for (std::size_t j = 0; j < n; ++j) {
                const double d = x[j] - mfs[j].m;
                const double s2 = mfs[j].sigma * mfs[j].sigma;
                grads.d_co_m[k * n + j] += acc_co * d / s2;
                grads.d_co_sigma[k * n + j] += acc_co * d * d / (s2 * mfs[j].sigma);
            }
        }
    }

    // Antecedent It2MF partials, skipped entirely in stage-1 (local) mode.
    if (mode == TrainMode::Stage2Global) {
        for (std::size_t i = 0; i < M; ++i) {
            const It2Mf* mfs = params.rule_mfs(i);
            const double au = acc_up[i], al = acc_lo[i];
            for (std::size_t j = 0; j < n; ++j) {
                const double m1 = mfs[j].m1, m2 = mfs[j].m2;
                const double mid = 0.5 * (m1 + m2);
                const double sg = mfs[j].sigma;
                const double s2 = sg * sg, s3 = s2 * sg;
                const double xj = x[j];
                double dm1 = 0.0, dm2 = 0.0, dsg = 0.0;
                if (xj <= m1) dm1 += au * (xj - m1) / s2;
                if (xj > mid) dm1 += al * (xj - m1) / s2;
                if (xj > m2) dm2 += au * (xj - m2) / s2;
                if (xj <= mid) dm2 += al * (xj - m2) / s2;
                if (xj < m1)
                    dsg += au * (xj - m1) * (xj - m1) / s3;
                else if (xj > m2)
                    dsg += au * (xj - m2) * (xj - m2) / s3;
                if (xj <= mid)
                    dsg += al * (xj - m2) * (xj - m2) / s3;
                else
                    dsg += al * (xj - m1) * (xj - m1) / s3;
                grads.d_m1[i * n + j] += dm1;
                grads.d_m2[i * n + j] += dm2;
                grads.d_sigma[i * n + j] += dsg;
            }
        }
    }
}

void project(NetworkParams& params) {
    for (auto& mf : params.antecedents) {
        if (mf.m1 > mf.m2) {
            const double mid = 0.5 * (mf.m1 + mf.m2);
            mf.m1 = mid;
            mf.m2 = mid;
        }
        mf.sigma = std::max(mf.sigma, kSigmaMin);
    }
    for (auto& mf : params.co_antecedents)
        mf.sigma = std::max(mf.sigma, kSigmaMin);
    for (auto& v : params.consequents.s) v = std::max(v, 0.0);
    auto clip01 = [](double v) { return std::clamp(v, 0.0, 1.0); };
    for (auto& v : params.reduction.q_l) v = clip01(v);
    for (auto& v : params.reduction.q_r) v = clip01(v);
    for (auto& v : params.reduction.q_o) v = clip01(v);
    params.link = clip01(params.link);
}

void sgd_step(NetworkParams& params, const GradientSet& grads, double eta) {
    const std::size_t n = params.n, M = params.M, K = params.K;
    for (std::size_t t = 0; t < M * n; ++t) {
        params.antecedents[t].m1 -= eta * grads.d_m1[t];
        params.antecedents[t].m2 -= eta * grads.d_m2[t];
        params.antecedents[t].sigma -= eta * grads.d_sigma[t];
    }
    if (!params.options.no_co_antecedent) {
        for (std::size_t t = 0; t < K * n; ++t) {
            params.co_antecedents[t].m -= eta * grads.d_co_m[t];
            params.co_antecedents[t].sigma -= eta * grads.d_co_sigma[t];
        }
    }
    for (std::size_t t = 0; t < params.consequents.c.size(); ++t) {
        params.consequents.c[t] -= eta * grads.d_c[t];
        params.consequents.s[t] -= eta * grads.d_s[t];
    }
    for (std::size_t k = 0; k < K; ++k) {
        params.reduction.q_l[k] -= eta * grads.d_q_l[k];
        params.reduction.q_r[k] -= eta * grads.d_q_r[k];
        params.reduction.q_o[k] -= eta * grads.d_q_o[k];
    }
    if (!params.options.no_link) params.link -= eta * grads.d_link;
    project(params);
}

double evaluate_mse(const SampleSet& data, const NetworkParams& params) {
    ForwardTrace trace;
    double se = 0.0;
    for (std::size_t r = 0; r < data.X.rows; ++r) {
        forward({data.X.row(r), data.X.cols}, params, trace);
        for (std::size_t k = 0; k < params.K; ++k) {
            const double d = trace.y[k] - data.Y(r, k);
            se += d * d;
        }
    }
    return se / (static_cast<double>(data.X.rows) * params.K);
}

double train_epochs(const SampleSet& data, NetworkParams& params,
                    const TrainConfig& config) {
    if (data.X.rows == 0) throw std::runtime_error("train_epochs: empty dataset");
    assert(data.X.cols == params.n && data.Y.cols == params.K);
    std::mt19937_64 rng(config.seed);
    std::vector<std::size_t> order(data.X.rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    ForwardTrace trace;
    GradientSet grads;
    for (std::size_t epoch = 0; epoch < config.iterations; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t r : order) {
            const std::span<const double> x{data.X.row(r), data.X.cols};
            const std::span<const double> y{data.Y.row(r), data.Y.cols};
            forward(x, params, trace);
            double check = 0.0;
            for (std::size_t k = 0; k < params.K; ++k) check += trace.y[k];
            if (!std::isfinite(check))
                throw std::runtime_error(
                    "train_epochs: non-finite prediction (learning rate too "
                    "large or degenerate parameters)");
            backward(trace, x, y, params, config.mode, grads);
            sgd_step(params, grads, config.eta);
        }
    }
    return evaluate_mse(data, params);
}

std::vector<double*> trainable_scalars(NetworkParams& params, bool stage2) {
    std::vector<double*> out;
    out.reserve(params.trainable_count(stage2));
    if (stage2) {
        for (auto& mf : params.antecedents) {
            out.push_back(&mf.m1);
            out.push_back(&mf.m2);
            out.push_back(&mf.sigma);
        }
    }
    if (!params.options.no_co_antecedent) {
        for (auto& mf : params.co_antecedents) {
            out.push_back(&mf.m);
            out.push_back(&mf.sigma);
        }
    }
    for (std::size_t t = 0; t < params.consequents.c.size(); ++t) {
        out.push_back(&params.consequents.c[t]);
        out.push_back(&params.consequents.s[t]);
    }
    for (auto& v : params.reduction.q_l) out.push_back(&v);
    for (auto& v : params.reduction.q_r) out.push_back(&v);
    for (auto& v : params.reduction.q_o) out.push_back(&v);
    if (!params.options.no_link) out.push_back(&params.link);
    assert(out.size() == params.trainable_count(stage2));
    return out;
}

std::vector<const double*> gradient_scalars(const GradientSet& grads,
                                            const NetworkParams& params,
                                            bool stage2) {
    std::vector<const double*> out;
    out.reserve(params.trainable_count(stage2));
    if (stage2) {
        for (std::size_t t = 0; t < grads.M * grads.n; ++t) {
            out.push_back(&grads.d_m1[t]);
            out.push_back(&grads.d_m2[t]);
            out.push_back(&grads.d_sigma[t]);
        }
    }
    if (!params.options.no_co_antecedent) {
        for (std::size_t t = 0; t < grads.K * grads.n; ++t) {
            out.push_back(&grads.d_co_m[t]);
            out.push_back(&grads.d_co_sigma[t]);
        }
    }
    for (std::size_t t = 0; t < grads.d_c.size(); ++t) {
        out.push_back(&grads.d_c[t]);
        out.push_back(&grads.d_s[t]);
    }
    for (const auto& v : grads.d_q_l) out.push_back(&v);
    for (const auto& v : grads.d_q_r) out.push_back(&v);
    for (const auto& v : grads.d_q_o) out.push_back(&v);
    if (!params.options.no_link) out.push_back(&grads.d_link);
    return out;
}

}  // namespace fuzzyts
