// Closed-form synthesis of the single-agent robustly optimal mechanisms, the
// feasibility boundary mu', the maximal-payment recovery, the N-moment
// frontier LP, the approximation guarantees, and the IC/IR verifier.

#pragma once

#include <vector>

#include "dic/distribution.hpp"
#include "dic/mechanism.hpp"

namespace dic {

// mu / (2 - mu); domain (0,1).
double z_star(double mu);

struct MuPrimeResult {
    double z_prime = 0.0;
    double t_star = 0.0;
    double mu_prime = 0.0;
};

// max over the feasible component of t in [0,1] of
//   z(t) = ((3t^2 - 2t) + t sqrt(2(t^4 + 2t^2 - 6t + 3))) / (2 - t^2),
// radicand nonnegative. Computed once per process and cached.
const MuPrimeResult& mu_prime();

// The objective z(t) above; throws std::domain_error when the radicand is
// negative or t is outside [0,1].
double mu_prime_objective(double t);

// Linear payment rule lambda1*nu + lambda0 with the concave four-piece
// allocation; domain [mu', 1).
SingleAgentMechanism linear_mechanism(double mu);

// Same allocation, payment max(lambda1*nu + lambda0, 0).
SingleAgentMechanism clipped_linear_mechanism(double mu);

// Same allocation, five-piece maximal payment rule; Pareto robustly optimal.
SingleAgentMechanism maximal_payment_mechanism(double mu);

// Three-point family for mu in [0.107, 0.25]: linear payment.
SingleAgentMechanism three_point_mechanism(double mu);

// Three-point family, maximal payment rule.
SingleAgentMechanism three_point_maximal(double mu);

// Convex combination of two payment rules over a shared allocation.
SingleAgentMechanism blend_payment_rules(const SingleAgentMechanism& a,
                                         const SingleAgentMechanism& b, double weight);

// For each grid point nu: min over grid nuhat <= nu of
// nu*(x(nu) - x(nuhat)) + nuhat. Exact O(G^2) scan; x must be weakly
// increasing on the grid (throws std::invalid_argument naming the offending
// pair otherwise).
std::vector<double> recover_maximal_payment(const PiecewiseFn& allocation, int grid_points);

struct FrontierResult {
    std::vector<double> lambda;      // lambda_0 .. lambda_N
    std::vector<double> allocation;  // sampled on the grid
    std::vector<double> grid;
    double value = 0.0;
};

// max sum_i lambda_i k_i (k_0 = 1) subject to
// sum_i lambda_i nu^i <= nu (x(nu) - x(nuhat)) + nuhat for grid nuhat <= nu,
// 0 <= x <= 1. Single-agent moment sets only.
FrontierResult moment_frontier_lp(const MomentSet& moments, int grid_points);

struct PerfGuarantee {
    double mu = 0.0;
    double z_approx = 0.0;  // worst-case payoff of the approximating mechanism
    double b = 0.0;         // upper bound min{mu/(2-mu), (mu/3)(sqrt(delta)+1)^2}
    double rho = 0.0;       // z_approx / b
    double c = 0.0;         // b - z_approx
};

// Three-point mechanism frozen at mu* = 0.107 evaluated at mu in (0, 0.107).
PerfGuarantee approx_small_mu(double mu);

// Linear mechanism frozen at mu' evaluated at mu in (0.25, mu').
PerfGuarantee approx_mid_mu(double mu);

struct FeasibilityReport {
    double min_ic_slack = 0.0;
    double min_ir_slack = 0.0;
    double ic_arg_nu = 0.0;
    double ic_arg_nuhat = 0.0;
    double ir_arg_nu = 0.0;
    double alloc_min = 0.0;
    double alloc_max = 0.0;
    bool ok(double tol = 1e-8) const {
        return min_ic_slack >= -tol && min_ir_slack >= -tol && alloc_min >= -1e-9 &&
               alloc_max <= 1.0 + 1e-9;
    }
};

// min IC slack over all grid pairs (nu, nuhat) of
// nu*(x(nu)-x(nuhat)) + nuhat - p(nu), and min IR slack of nu*x(nu) - p(nu).
FeasibilityReport check_feasibility(const SingleAgentMechanism& m, int grid_points = 2001);

}  // namespace dic
