#include "fuzzyts/network.hpp"

#include <cassert>
#include <cmath>
#include <fstream>

#include <json.hpp>

namespace fuzzyts {

void NetworkParams::resize(std::size_t n_, std::size_t M_, std::size_t K_) {
    n = n_;
    M = M_;
    K = K_;
    antecedents.assign(M * n, It2Mf{});
    co_antecedents.assign(K * n, CoMf{});
    consequents.resize(M, options.crisp_consequent ? 1 : K, n);
    reduction.q_l.assign(K, 0.5);
    reduction.q_r.assign(K, 0.5);
    reduction.q_o.assign(K, 0.5);
    link = 0.0;
}

void NetworkParams::validate() const {
    if (antecedents.size() != M * n)
        throw std::invalid_argument("antecedents: expected M*n entries");
    if (co_antecedents.size() != K * n)
        throw std::invalid_argument("co_antecedents: expected K*n entries");
    const std::size_t ko = options.crisp_consequent ? 1 : K;
    if (consequents.rules != M || consequents.outputs != ko ||
        consequents.inputs != n)
        throw std::invalid_argument("consequents: shape mismatch");
    for (const auto& mf : antecedents) {
        if (!(mf.m1 <= mf.m2))
            throw std::invalid_argument("antecedent: m1 > m2");
        if (!(mf.sigma > 0.0))
            throw std::invalid_argument("antecedent: sigma <= 0");
    }
    for (const auto& mf : co_antecedents)
        if (!(mf.sigma > 0.0))
            throw std::invalid_argument("co_antecedent: sigma <= 0");
    for (double v : consequents.s)
        if (v < 0.0) throw std::invalid_argument("consequent spread s < 0");
    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    for (std::size_t k = 0; k < K; ++k)
        if (!in01(reduction.q_l[k]) || !in01(reduction.q_r[k]) ||
            !in01(reduction.q_o[k]))
            throw std::invalid_argument("reduction weight outside [0,1]");
    if (!in01(link)) throw std::invalid_argument("link weight outside [0,1]");
}

std::size_t NetworkParams::trainable_count(bool stage2) const {
    std::size_t count = 0;
    if (stage2) count += n * 3 * M;                      // layer 2
    if (!options.no_co_antecedent) count += 2 * K * n;   // layer 4
    count += (n + 1) * 2 * M * (options.crisp_consequent ? 1 : K);  // layer 6
    count += 2 * K;  // q_l, q_r
    count += K;      // q_o
    if (!options.no_link) count += 1;  // l
    return count;
}

void NetworkParams::remove_rule(std::size_t i) {
    assert(i < M);
    antecedents.erase(antecedents.begin() + i * n,
                      antecedents.begin() + (i + 1) * n);
    const std::size_t bs = consequents.outputs * (n + 1);
    consequents.c.erase(consequents.c.begin() + i * bs,
                        consequents.c.begin() + (i + 1) * bs);
    consequents.s.erase(consequents.s.begin() + i * bs,
                        consequents.s.begin() + (i + 1) * bs);
    --M;
    --consequents.rules;
}

void ForwardTrace::resize(std::size_t n_, std::size_t M_, std::size_t K_) {
    n = n_;
    M = M_;
    K = K_;
    mu_lo.resize(M, n);
    mu_up.resize(M, n);
    slog_lo.assign(M, 0.0);
    slog_up.assign(M, 0.0);
    slog_co.assign(K, 0.0);
    f_lo.resize(M, K);
    f_up.resize(M, K);
    w_l.resize(M, K);
    w_r.resize(M, K);
    denom.assign(K, 0.0);
    y_l.assign(K, 0.0);
    y_r.assign(K, 0.0);
    y_prime.assign(K, 0.0);
    y.assign(K, 0.0);
}

void consequent_interval(std::span<const double> x, std::size_t rule,
                         std::size_t output, const ConsequentParams& p,
                         double& w_l, double& w_r) {
    const std::size_t b = p.block(rule, output);
    double center = p.c[b];
    double spread = p.s[b];
    for (std::size_t j = 0; j < p.inputs; ++j) {
        center += p.c[b + 1 + j] * x[j];
        spread += p.s[b + 1 + j] * std::abs(x[j]);
    }
    w_l = center - spread;
    w_r = center + spread;
}

void type_reduce(std::span<const double> f_lo, std::span<const double> f_up,
                 std::span<const double> w_l, std::span<const double> w_r,
                 double q_l, double q_r, double& y_l, double& y_r) {
    double num_l = 0.0, num_r = 0.0, den = 0.0;
    for (std::size_t i = 0; i < f_lo.size(); ++i) {
        num_l += ((1.0 - q_l) * f_lo[i] + q_l * f_up[i]) * w_l[i];
        num_r += ((1.0 - q_r) * f_lo[i] + q_r * f_up[i]) * w_r[i];
        den += f_lo[i] + f_up[i];
    }
    y_l = num_l / den;
    y_r = num_r / den;
}

double defuzzify(double y_l, double y_r, double q_o) {
    return q_o * y_l + (1.0 - q_o) * y_r;
}

std::vector<double> link_chain(std::span<const double> y_prime, double x_n,
                               double l) {
    std::vector<double> y(y_prime.size());
    double prev = x_n;
    for (std::size_t k = 0; k < y_prime.size(); ++k) {
        y[k] = (1.0 - l) * y_prime[k] + l * prev;
        prev = y[k];
    }
    return y;
}

static double ipow(double base, std::size_t e) {
    double r = 1.0;
    while (e--) r *= base;
    return r;
}

double link_closed_form(std::span<const double> y_prime, double x_n, double l,
                        std::size_t k) {
    assert(k < y_prime.size() + 1 && k >= 1);
    double y = ipow(l, k) * x_n;
    for (std::size_t kk = 1; kk <= k; ++kk)
        y += ipow(l, k - kk) * (1.0 - l) * y_prime[kk - 1];
    return y;
}

void forward(std::span<const double> x, const NetworkParams& params,
             ForwardTrace& trace) {
    const std::size_t n = params.n, M = params.M, K = params.K;
    assert(x.size() == n);
    if (trace.n != n || trace.M != M || trace.K != K) trace.resize(n, M, K);

    // Layers 2-3 in log space.
    for (std::size_t i = 0; i < M; ++i) {
        const It2Mf* mfs = params.rule_mfs(i);
        double slo = 0.0, sup = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double lo = eval_lmf(x[j], mfs[j]);
            const double up = eval_umf(x[j], mfs[j]);
            trace.mu_lo(i, j) = lo;
            trace.mu_up(i, j) = up;
            slo += log_grade(lo);
            sup += log_grade(up);
        }
        trace.slog_lo[i] = slo;
        trace.slog_up[i] = sup;
    }

    // Layer 4.
    for (std::size_t k = 0; k < K; ++k)
        trace.slog_co[k] = params.options.no_co_antecedent
                               ? 0.0
                               : co_log_sum(x, {params.output_mfs(k), n});

    // Layers 5-6.
    for (std::size_t i = 0; i < M; ++i) {
        for (std::size_t k = 0; k < K; ++k) {
            trace.f_lo(i, k) =
                transform_from_log_sum(trace.slog_lo[i] + trace.slog_co[k]);
            trace.f_up(i, k) =
                transform_from_log_sum(trace.slog_up[i] + trace.slog_co[k]);
            const std::size_t ck = params.options.crisp_consequent ? 0 : k;
            consequent_interval(x, i, ck, params.consequents, trace.w_l(i, k),
                                trace.w_r(i, k));
        }
    }

    // Layers 7-8.
    for (std::size_t k = 0; k < K; ++k) {
        double num_l = 0.0, num_r = 0.0, den = 0.0;
        const double ql = params.reduction.q_l[k];
        const double qr = params.reduction.q_r[k];
        for (std::size_t i = 0; i < M; ++i) {
            const double flo = trace.f_lo(i, k), fup = trace.f_up(i, k);
            num_l += ((1.0 - ql) * flo + ql * fup) * trace.w_l(i, k);
            num_r += ((1.0 - qr) * flo + qr * fup) * trace.w_r(i, k);
            den += flo + fup;
        }
        trace.denom[k] = den;
        trace.y_l[k] = num_l / den;
        trace.y_r[k] = num_r / den;
        trace.y_prime[k] =
            defuzzify(trace.y_l[k], trace.y_r[k], params.reduction.q_o[k]);
    }

    // Layer 9.
    const double l = params.options.no_link ? 0.0 : params.link;
    trace.x_last = x.empty() ? 0.0 : x[n - 1];
    double prev = trace.x_last;
    for (std::size_t k = 0; k < K; ++k) {
        trace.y[k] = (1.0 - l) * trace.y_prime[k] + l * prev;
        prev = trace.y[k];
    }
}

FiringReport firing_report(std::span<const double> x,
                           const NetworkParams& params) {
    FiringReport rep;
    ForwardTrace trace;
    forward(x, params, trace);
    rep.per_rule.resize(params.M);
    rep.per_rule_output.assign(params.M,
                               std::vector<FiringInterval>(params.K));
    for (std::size_t i = 0; i < params.M; ++i) {
        rep.per_rule[i] = {transform_from_log_sum(trace.slog_lo[i]),
                           transform_from_log_sum(trace.slog_up[i])};
        for (std::size_t k = 0; k < params.K; ++k)
            rep.per_rule_output[i][k] = {trace.f_lo(i, k), trace.f_up(i, k)};
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Serialization (JSON model file)

using nlohmann::json;

void save_model(const Model& model, const std::string& path) {
    const NetworkParams& p = model.params;
    json j;
    j["format"] = "fuzzyts-model";
    j["version"] = 1;
    j["dims"] = {{"n", p.n}, {"M", p.M}, {"K", p.K}};
    j["options"] = {{"no_co_antecedent", p.options.no_co_antecedent},
                    {"no_link", p.options.no_link},
                    {"crisp_consequent", p.options.crisp_consequent}};
    json ants = json::array();
    for (const auto& mf : p.antecedents)
        ants.push_back({mf.m1, mf.m2, mf.sigma});
    j["antecedents"] = ants;
    json cos = json::array();
    for (const auto& mf : p.co_antecedents) cos.push_back({mf.m, mf.sigma});
    j["co_antecedents"] = cos;
    j["consequents"] = {{"outputs", p.consequents.outputs},
                        {"c", p.consequents.c},
                        {"s", p.consequents.s}};
    j["reduction"] = {{"q_l", p.reduction.q_l},
                      {"q_r", p.reduction.q_r},
                      {"q_o", p.reduction.q_o}};
    j["link"] = p.link;
    j["scaling"] = {{"input_min", model.scaling.input_min},
                    {"input_max", model.scaling.input_max},
                    {"target_min", model.scaling.target_min},
                    {"target_max", model.scaling.target_max}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open model file for writing: " + path);
    out << j.dump(2) << '\n';
}

template <typename T>
static T require(const json& j, const char* field) {
    if (!j.contains(field))
        throw std::runtime_error(std::string("model file: missing field '") +
                                 field + "'");
    try {
        return j.at(field).get<T>();
    } catch (const json::exception&) {
        throw std::runtime_error(std::string("model file: bad field '") +
                                 field + "'");
    }
}

Model load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("model file: parse error: ") +
                                 e.what());
    }
    Model model;
    NetworkParams& p = model.params;
    const json dims = require<json>(j, "dims");
    p.n = require<std::size_t>(dims, "n");
    p.M = require<std::size_t>(dims, "M");
    p.K = require<std::size_t>(dims, "K");
    const json opts = require<json>(j, "options");
    p.options.no_co_antecedent = require<bool>(opts, "no_co_antecedent");
    p.options.no_link = require<bool>(opts, "no_link");
    p.options.crisp_consequent = require<bool>(opts, "crisp_consequent");
    p.resize(p.n, p.M, p.K);

    const auto ants = require<std::vector<std::vector<double>>>(j, "antecedents");
    if (ants.size() != p.M * p.n)
        throw std::runtime_error("model file: antecedents size mismatch");
    for (std::size_t i = 0; i < ants.size(); ++i) {
        if (ants[i].size() != 3)
            throw std::runtime_error("model file: bad antecedent entry");
        p.antecedents[i] = {ants[i][0], ants[i][1], ants[i][2]};
    }
    const auto cos = require<std::vector<std::vector<double>>>(j, "co_antecedents");
    if (cos.size() != p.K * p.n)
        throw std::runtime_error("model file: co_antecedents size mismatch");
    for (std::size_t i = 0; i < cos.size(); ++i) {
        if (cos[i].size() != 2)
            throw std::runtime_error("model file: bad co_antecedent entry");
        p.co_antecedents[i] = {cos[i][0], cos[i][1]};
    }
    const json cons = require<json>(j, "consequents");
    const std::size_t ko = require<std::size_t>(cons, "outputs");
    if (ko != p.consequents.outputs)
        throw std::runtime_error("model file: consequent outputs mismatch");
    p.consequents.c = require<std::vector<double>>(cons, "c");
    p.consequents.s = require<std::vector<double>>(cons, "s");
    if (p.consequents.c.size() != p.M * ko * (p.n + 1) ||
        p.consequents.s.size() != p.consequents.c.size())
        throw std::runtime_error("model file: consequent tensor size mismatch");
    const json red = require<json>(j, "reduction");
    p.reduction.q_l = require<std::vector<double>>(red, "q_l");
    p.reduction.q_r = require<std::vector<double>>(red, "q_r");
    p.reduction.q_o = require<std::vector<double>>(red, "q_o");
    if (p.reduction.q_l.size() != p.K || p.reduction.q_r.size() != p.K ||
        p.reduction.q_o.size() != p.K)
        throw std::runtime_error("model file: reduction vector size mismatch");
    p.link = require<double>(j, "link");
    const json sc = require<json>(j, "scaling");
    model.scaling.input_min = require<std::vector<double>>(sc, "input_min");
    model.scaling.input_max = require<std::vector<double>>(sc, "input_max");
    model.scaling.target_min = require<std::vector<double>>(sc, "target_min");
    model.scaling.target_max = require<std::vector<double>>(sc, "target_max");
    if (model.scaling.input_min.size() != p.n ||
        model.scaling.input_max.size() != p.n ||
        model.scaling.target_min.size() != p.K ||
        model.scaling.target_max.size() != p.K)
        throw std::runtime_error("model file: scaling vector size mismatch");
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("model file: constraint violation: ") +
                                 e.what());
    }
    return model;
}

}  // namespace fuzzyts
