// Worst-case distributions and worst-case-value computation for the single-
// and multi-agent moment ambiguity sets.

#pragma once

#include <vector>

#include "dic/distribution.hpp"

namespace dic {

// Two-point distribution {mu/(2-mu), 1} with weights {1-mu/2, mu/2}.
GridDistribution two_point_worst_case(double mu);

// Three-point distribution {delta(sqrt(delta)+1), sqrt(delta)(sqrt(delta)+1), 1}
// with weights {mu/(3*nu_low), mu/(3*nu_bar), mu/3}; delta = mu/(3-mu).
// Domain (0, (15-3*sqrt(5))/10].
GridDistribution three_point_worst_case(double mu);

struct WorstCaseResult {
    double value = 0.0;
    GridDistribution distribution;
};

// min sum q*p s.t. sum q = 1, sum q*nu^i = k_i, q >= 0 over the given grid.
// The optimal distribution has at most N+1 support points.
WorstCaseResult worst_case_value(const std::vector<double>& grid,
                                 const std::vector<double>& payment, const MomentSet& moments);

// Lower convex envelope of the grid points (nu, p) evaluated at mu.
// Equals worst_case_value with a first-moment-only ambiguity set.
double convex_envelope_value(const std::vector<double>& grid,
                             const std::vector<double>& payment, double mu);

struct TwoAgentWorstCase {
    double r = 0.0;
    double nu_star = 0.0;
    double beta = 0.0;
    double f_mu = 0.0;  // 2 beta nu* (r^2 + 3r/2 + nu* + 1)
    GridDistribution distribution;
};

// Correlated six-profile worst case of the symmetric two-agent set: scans r,
// solves the mean constraint's positive root for nu*(r), and minimizes the
// objective with golden-section refinement.
TwoAgentWorstCase two_agent_worst_case(double mu);

struct TwoAgentBound {
    std::vector<double> mu;
    std::vector<double> f;     // restricted-family value f(mu)
    std::vector<double> g;     // min{f(mu), mu}
    std::vector<double> hull;  // g below mu'', tangent line through (1,1) above
    double mu_dprime = 0.0;
    double f_at_mu_dprime = 0.0;
};

// Upper-bound curve over an ascending mu grid in (0,1); mu'' is the tangency
// point of the line through (1,1) supporting g from below.
TwoAgentBound two_agent_upper_bound(const std::vector<double>& mu_grid);

// Worst case for J >= 3 symmetric agents is the Dirac mass at the mean: mu.
double dirac_bound(double mu, int agents);

}  // namespace dic
