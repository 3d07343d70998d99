#ifndef FUZZYTS_GRADCHECK_HPP
#define FUZZYTS_GRADCHECK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fuzzyts/gradients.hpp"

namespace fuzzyts {

struct GradCheckConfig {
    std::size_t trials = 50;   // random network/sample draws
    double step = 1e-6;        // central-difference step
    double rel_tol = 1e-4;
    double abs_floor = 1e-8;
    std::uint64_t seed = 1;
};

struct GradCheckReport {
    std::size_t checked = 0;   // scalar partials compared
    std::size_t skipped = 0;   // partials near a membership branch boundary
    double max_rel_err = 0.0;
    bool passed = true;
    std::vector<std::string> failures;  // human-readable, one per bad partial
};

// Compares the analytic gradient (global training mode) against a central
// finite difference of the loss, over randomly drawn small feasible
// networks and inputs. Antecedent partials where an input sits within
// boundary_margin of a membership branch point are skipped: the loss is
// not differentiable there.
GradCheckReport run_grad_check(const GradCheckConfig& config);

}  // namespace fuzzyts

#endif
