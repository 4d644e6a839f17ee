// Single-agent mechanisms: an allocation rule, a payment rule, and the
// parameter block of the closed-form family they came from.

#pragma once

#include <optional>

#include "dic/piecewise.hpp"

namespace dic {

struct MechanismParams {
    double mu = 0.0;
    double z_star = 0.0;
    double lambda1 = 0.0;
    double lambda0 = 0.0;
    double nu_low = 0.0;    // breakpoint where the initial linear ramp ends
    double nu_circ = 0.0;   // breakpoint where the hyperbolic piece ends
    double nu_star = 0.0;   // zero-rent threshold
    double nu_bar = 0.0;    // breakpoint where allocation reaches 1
    std::optional<double> tau;        // three-point family only
    std::optional<double> nu_prime;   // three-point maximal payment only
    std::optional<double> nu_dprime;  // three-point maximal payment only
};

class SingleAgentMechanism {
public:
    // Checks that the allocation stays in [0,1] on a 2001-point grid
    // (tolerance 1e-9). IC/IR feasibility is the verifier's job
    // (check_feasibility in single_agent.hpp).
    SingleAgentMechanism(PiecewiseFn allocation, PiecewiseFn payment, MechanismParams params);

    const PiecewiseFn& allocation() const { return allocation_; }
    const PiecewiseFn& payment() const { return payment_; }
    const MechanismParams& params() const { return params_; }

private:
    PiecewiseFn allocation_;
    PiecewiseFn payment_;
    MechanismParams params_;
};

}  // namespace dic
