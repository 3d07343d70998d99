#ifndef FUZZYTS_NETWORK_HPP
#define FUZZYTS_NETWORK_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fuzzyts/fuzzy.hpp"
#include "fuzzyts/matrix.hpp"

namespace fuzzyts {

// TSK interval consequents. Centers c and spreads s are stored per
// (rule, output) block of n+1 coefficients, index 0 being the bias.
// Under the crisp-per-rule ablation the output dimension collapses to 1
// and every k shares block 0.
struct ConsequentParams {
    std::size_t rules = 0;
    std::size_t outputs = 0;  // 1 when shared across outputs
    std::size_t inputs = 0;
    std::vector<double> c;  // rules * outputs * (inputs + 1)
    std::vector<double> s;  // same shape, entries >= 0

    void resize(std::size_t m, std::size_t k, std::size_t n) {
        rules = m;
        outputs = k;
        inputs = n;
        c.assign(m * k * (n + 1), 0.0);
        s.assign(m * k * (n + 1), 0.0);
    }
    std::size_t block(std::size_t i, std::size_t k) const {
        return (i * outputs + k) * (inputs + 1);
    }
};

struct ReductionParams {
    std::vector<double> q_l;  // in [0, 1]
    std::vector<double> q_r;
    std::vector<double> q_o;
};

// Structural switches. They change which layers exist and therefore the
// trainable parameter count; kept inside the model so a saved file is
// self-describing.
struct ModelOptions {
    bool no_co_antecedent = false;   // drop layer 4
    bool no_link = false;            // freeze layer 9 at l = 0
    bool crisp_consequent = false;   // one consequent per rule, shared over k
};

struct NetworkParams {
    std::size_t n = 0;  // inputs
    std::size_t M = 0;  // rules
    std::size_t K = 0;  // outputs
    ModelOptions options;

    std::vector<It2Mf> antecedents;  // M * n, row-major by rule
    std::vector<CoMf> co_antecedents;  // K * n, row-major by output
    ConsequentParams consequents;
    ReductionParams reduction;
    double link = 0.0;  // l in [0, 1]

    void resize(std::size_t n_, std::size_t M_, std::size_t K_);
    const It2Mf* rule_mfs(std::size_t i) const { return antecedents.data() + i * n; }
    It2Mf* rule_mfs(std::size_t i) { return antecedents.data() + i * n; }
    const CoMf* output_mfs(std::size_t k) const { return co_antecedents.data() + k * n; }
    CoMf* output_mfs(std::size_t k) { return co_antecedents.data() + k * n; }

    // Throws std::invalid_argument naming the violated constraint.
    void validate() const;

    // Number of trainable scalars; stage2 additionally counts the
    // antecedent It2MF parameters (3 per rule-input pair).
    std::size_t trainable_count(bool stage2) const;

    void remove_rule(std::size_t i);
};

enum class TrainMode { Stage1Local, Stage2Global };

// Every intermediate of one forward pass, laid out for reuse by the
// gradient pass. resize() once, then evaluate many samples.
struct ForwardTrace {
    std::size_t n = 0, M = 0, K = 0;

    Matrix mu_lo, mu_up;        // M x n membership grades
    std::vector<double> slog_lo, slog_up;  // per rule, sums of log grades
    std::vector<double> slog_co;           // per output
    Matrix f_lo, f_up;          // M x K aggregated firing strengths
    Matrix w_l, w_r;            // M x K consequent interval ends
    std::vector<double> denom;  // per output, sum_i (f_lo + f_up)
    std::vector<double> y_l, y_r;      // type-reduced interval
    std::vector<double> y_prime;       // defuzzified, pre-link
    std::vector<double> y;             // final predictions
    double x_last = 0.0;               // x_n, seed of the link chain

    void resize(std::size_t n_, std::size_t M_, std::size_t K_);
};

// Eq-level building blocks (also used standalone in tests).
void consequent_interval(std::span<const double> x, std::size_t rule,
                         std::size_t output, const ConsequentParams& p,
                         double& w_l, double& w_r);
void type_reduce(std::span<const double> f_lo, std::span<const double> f_up,
                 std::span<const double> w_l, std::span<const double> w_r,
                 double q_l, double q_r, double& y_l, double& y_r);
double defuzzify(double y_l, double y_r, double q_o);

// Recursive link layer: y^1 = (1-l) y'^1 + l x_n, y^k = (1-l) y'^k + l y^{k-1}.
std::vector<double> link_chain(std::span<const double> y_prime, double x_n,
                               double l);
// Closed form of the same chain, used by the l-gradient and as an oracle.
double link_closed_form(std::span<const double> y_prime, double x_n, double l,
                        std::size_t k);

// Full layer 1-9 pass. x must already be normalized.
void forward(std::span<const double> x, const NetworkParams& params,
             ForwardTrace& trace);

// Interpretability dump: F^i from rule memberships only, F^{i,k} from the
// transformation layer.
struct FiringReport {
    std::vector<FiringInterval> per_rule;            // M
    std::vector<std::vector<FiringInterval>> per_rule_output;  // M x K
};
FiringReport firing_report(std::span<const double> x,
                           const NetworkParams& params);

// Per-input normalization statistics carried with the model so that
// inference reproduces the training-time scaling. Out-of-range inputs
// extrapolate; nothing is clipped.
struct ModelScaling {
    std::vector<double> input_min, input_max;    // size n
    std::vector<double> target_min, target_max;  // size K
};

struct Model {
    NetworkParams params;
    ModelScaling scaling;
};

void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);  // throws std::runtime_error

}  // namespace fuzzyts

#endif
