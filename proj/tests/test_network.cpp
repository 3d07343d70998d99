#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "fuzzyts/network.hpp"

using namespace fuzzyts;

namespace {

NetworkParams small_net() {
    NetworkParams p;
    p.resize(2, 2, 2);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& mf : p.antecedents) {
        mf.m1 = u(rng) * 0.5;
        mf.m2 = mf.m1 + 0.2;
        mf.sigma = 0.3;
    }
    for (auto& mf : p.co_antecedents) {
        mf.m = u(rng);
        mf.sigma = 0.4;
    }
    for (auto& v : p.consequents.c) v = u(rng) - 0.5;
    for (auto& v : p.consequents.s) v = 0.1 * u(rng);
    p.link = 0.2;
    return p;
}

}  // namespace

TEST_CASE("consequent interval endpoints") {
    ConsequentParams p;
    p.resize(1, 1, 1);
    // c = (1, 2), s = (0.5, 0.5), x = -1
    p.c = {1.0, 2.0};
    p.s = {0.5, 0.5};
    double wl, wr;
    std::vector<double> x{-1.0};
    consequent_interval(x, 0, 0, p, wl, wr);
    CHECK(wl == doctest::Approx(-2.0));
    CHECK(wr == doctest::Approx(0.0));

    // zero spreads collapse the interval
    p.s = {0.0, 0.0};
    consequent_interval(x, 0, 0, p, wl, wr);
    CHECK(wl == wr);
    CHECK(wl == doctest::Approx(-1.0));

    // x = 0 leaves only the bias terms
    p.s = {0.5, 0.5};
    std::vector<double> x0{0.0};
    consequent_interval(x0, 0, 0, p, wl, wr);
    CHECK(wl == doctest::Approx(0.5));
    CHECK(wr == doctest::Approx(1.5));
}

TEST_CASE("type reduction weighting") {
    // single rule with unit firing on both ends: denominator counts both,
    // halving the collapsed case
    std::vector<double> f1{1.0}, w{2.0};
    double yl, yr;
    type_reduce(f1, f1, w, w, 0.3, 0.7, yl, yr);
    CHECK(yl == doctest::Approx(1.0));
    CHECK(yr == doctest::Approx(1.0));

    // two symmetric rules
    std::vector<double> f2{1.0, 1.0}, wl2{0.0, 4.0};
    type_reduce(f2, f2, wl2, wl2, 0.4, 0.4, yl, yr);
    CHECK(yl == doctest::Approx(1.0));

    // q_l = 0 uses only the lower firing in the numerator
    std::vector<double> flo{0.5}, fup{1.0}, wv{2.0};
    type_reduce(flo, fup, wv, wv, 0.0, 0.0, yl, yr);
    CHECK(yl == doctest::Approx(0.5 * 2.0 / 1.5));
}

TEST_CASE("defuzzification blends the interval ends") {
    CHECK(defuzzify(1.0, 3.0, 1.0) == doctest::Approx(1.0));
    CHECK(defuzzify(1.0, 3.0, 0.0) == doctest::Approx(3.0));
    CHECK(defuzzify(1.0, 3.0, 0.5) == doctest::Approx(2.0));
}

TEST_CASE("link chain basics") {
    std::vector<double> yp{0.9};
    auto y = link_chain(yp, 1.0, 0.1);
    CHECK(y[0] == doctest::Approx(0.91));

    // l = 0 is the identity on the pre-link outputs
    std::vector<double> yp3{0.2, 0.4, 0.6};
    y = link_chain(yp3, 5.0, 0.0);
    CHECK(y[0] == 0.2);
    CHECK(y[1] == 0.4);
    CHECK(y[2] == 0.6);
}

TEST_CASE("link recursion equals its closed form") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t K = 1 + rng() % 8;
        std::vector<double> yp(K);
        for (auto& v : yp) v = 2.0 * u(rng) - 1.0;
        const double xn = 2.0 * u(rng) - 1.0;
        const double l = u(rng);
        const auto y = link_chain(yp, xn, l);
        for (std::size_t k = 1; k <= K; ++k)
            CHECK(std::abs(y[k - 1] - link_closed_form(yp, xn, l, k)) < 1e-12);
    }
}

TEST_CASE("forward pass is deterministic and ordered") {
    NetworkParams p = small_net();
    std::vector<double> x{0.3, 0.7};
    ForwardTrace a, b;
    forward(x, p, a);
    forward(x, p, b);
    for (std::size_t k = 0; k < p.K; ++k) CHECK(a.y[k] == b.y[k]);
    for (std::size_t i = 0; i < p.M; ++i)
        for (std::size_t k = 0; k < p.K; ++k) {
            CHECK(a.f_lo(i, k) <= a.f_up(i, k));
            CHECK(a.f_lo(i, k) > 0.0);
            CHECK(a.w_l(i, k) <= a.w_r(i, k));
        }
}

TEST_CASE("forward stays finite with many small memberships") {
    NetworkParams p;
    p.resize(12, 1, 1);
    for (auto& mf : p.antecedents) {
        mf.m1 = 5.0;  // far from the inputs: tiny grades
        mf.m2 = 5.1;
        mf.sigma = 0.5;
    }
    for (auto& mf : p.co_antecedents) {
        mf.m = 5.0;
        mf.sigma = 0.5;
    }
    p.consequents.c[0] = 1.0;
    std::vector<double> x(12, 0.0);
    ForwardTrace t;
    forward(x, p, t);
    CHECK(std::isfinite(t.y[0]));
    CHECK(t.f_lo(0, 0) > 0.0);
}

TEST_CASE("hand-computed pipeline for a degenerate network") {
    // one rule, type-1 antecedents (m1 = m2), crisp consequent, no link:
    // picking x at the antecedent peaks gives unit memberships, so the
    // firing value on both ends is -1/log of the clamped grade product and
    // the output reduces to the halved consequent value.
    NetworkParams p;
    p.options.no_co_antecedent = true;
    p.resize(1, 1, 1);
    p.antecedents[0] = {0.5, 0.5, 0.2};
    p.consequents.c = {2.0, 0.0};
    p.consequents.s = {0.0, 0.0};
    p.reduction.q_o = {0.5};
    std::vector<double> x{0.5};
    ForwardTrace t;
    forward(x, p, t);
    // both firing ends equal, w_l = w_r = 2, denominator doubles the mass
    CHECK(t.f_lo(0, 0) == doctest::Approx(t.f_up(0, 0)));
    CHECK(t.y_l[0] == doctest::Approx(1.0));
    CHECK(t.y_r[0] == doctest::Approx(1.0));
    CHECK(t.y[0] == doctest::Approx(1.0));
}

TEST_CASE("pair firing never exceeds rule firing") {
    NetworkParams p = small_net();
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> x{u(rng), u(rng)};
        const FiringReport rep = firing_report(x, p);
        for (std::size_t i = 0; i < p.M; ++i)
            for (std::size_t k = 0; k < p.K; ++k) {
                // the extra co-antecedent log terms are <= 0
                CHECK(rep.per_rule_output[i][k].lower <=
                      rep.per_rule[i].lower + 1e-12);
                CHECK(rep.per_rule_output[i][k].upper <=
                      rep.per_rule[i].upper + 1e-12);
            }
    }
}

TEST_CASE("trainable parameter counting") {
    NetworkParams p;
    p.resize(9, 2, 3);
    const std::size_t n = 9, M = 2, K = 3;
    CHECK(p.trainable_count(true) ==
          n * 3 * M + 2 * K * n + (n + 1) * 2 * M * K + 2 * K + K + 1);
    CHECK(p.trainable_count(false) ==
          2 * K * n + (n + 1) * 2 * M * K + 2 * K + K + 1);
}

TEST_CASE("model serialization round trip") {
    NetworkParams p;
    p.resize(9, 2, 3);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& mf : p.antecedents) {
        mf.m1 = u(rng);
        mf.m2 = mf.m1 + 0.1;
        mf.sigma = 0.2 + u(rng);
    }
    for (auto& mf : p.co_antecedents) {
        mf.m = u(rng);
        mf.sigma = 0.3;
    }
    for (auto& v : p.consequents.c) v = u(rng) - 0.5;
    for (auto& v : p.consequents.s) v = 0.2 * u(rng);
    // representative trained values must survive the round trip exactly
    p.reduction.q_o = {0.578, 0.726, 0.429};
    p.link = 0.124;

    Model m;
    m.params = p;
    m.scaling.input_min.assign(9, 0.0);
    m.scaling.input_max.assign(9, 1.0);
    m.scaling.target_min.assign(3, 0.0);
    m.scaling.target_max.assign(3, 1.0);

    const std::string path = "roundtrip_model.json";
    save_model(m, path);
    const Model back = load_model(path);
    CHECK(back.params.n == 9);
    CHECK(back.params.M == 2);
    CHECK(back.params.K == 3);
    CHECK(back.params.reduction.q_o[0] == 0.578);
    CHECK(back.params.reduction.q_o[1] == 0.726);
    CHECK(back.params.reduction.q_o[2] == 0.429);
    CHECK(back.params.link == 0.124);
    for (std::size_t i = 0; i < p.antecedents.size(); ++i) {
        CHECK(back.params.antecedents[i].m1 == p.antecedents[i].m1);
        CHECK(back.params.antecedents[i].m2 == p.antecedents[i].m2);
        CHECK(back.params.antecedents[i].sigma == p.antecedents[i].sigma);
    }
    for (std::size_t i = 0; i < p.consequents.c.size(); ++i) {
        CHECK(back.params.consequents.c[i] == p.consequents.c[i]);
        CHECK(back.params.consequents.s[i] == p.consequents.s[i]);
    }

    // a loaded model predicts
    ForwardTrace t;
    std::vector<double> x(9, 0.5);
    forward(x, back.params, t);
    CHECK(std::isfinite(t.y[0]));
    std::remove(path.c_str());
}

TEST_CASE("loading rejects constraint violations") {
    NetworkParams p;
    p.resize(1, 1, 1);
    p.antecedents[0] = {0.2, 0.4, 0.3};
    p.co_antecedents[0] = {0.5, 0.3};
    p.consequents.s[1] = -0.1;  // negative spread is infeasible
    Model m;
    m.params = p;
    m.scaling.input_min = {0.0};
    m.scaling.input_max = {1.0};
    m.scaling.target_min = {0.0};
    m.scaling.target_max = {1.0};
    const std::string path = "bad_model.json";
    save_model(m, path);
    CHECK_THROWS_AS((void)load_model(path), std::runtime_error);
    std::remove(path.c_str());
}
