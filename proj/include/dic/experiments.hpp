// The paper-style numerical studies: the uniform-prior comparison, the
// contamination sweep with crossover detection, and the guarantee curves.

#pragma once

#include <optional>
#include <vector>

#include "dic/distribution.hpp"
#include "dic/single_agent.hpp"

namespace dic {

struct NominalSolution {
    std::vector<double> grid;
    std::vector<double> x;
    std::vector<double> p;
    double value = 0.0;
};

// Optimal mechanism under a known single-agent prior: LP with IC rows for all
// grid pairs, IR rows, and 0 <= x <= 1. The prior's support must be a
// single-agent point set; the LP grid is that support.
NominalSolution nominal_optimal_lp(const GridDistribution& prior);

// Best posted price against the continuous uniform prior: max t*(1-t) over a
// 2001-point threshold grid (attained exactly at t = 1/2).
struct PostedPrice {
    double threshold = 0.0;
    double value = 0.0;
};
PostedPrice posted_price_uniform();

struct UniformTable {
    double posted = 0.0;
    double linear = 0.0;
    double clipped = 0.0;
    double maximal = 0.0;
    double nominal = 0.0;  // LP value on the discretized uniform prior
    int nominal_grid = 100;
};

// Expected payoffs under the uniform prior at mu = 1/2; closed forms are
// integrated analytically per segment, the nominal row comes from the LP.
UniformTable uniform_comparison();

struct ContaminationRun {
    int grid = 0;
    std::vector<double> eps;
    std::vector<double> payoff_nominal, payoff_linear, payoff_maximal, payoff_optimal;
    std::vector<double> perf_nominal, perf_linear, perf_maximal;
    std::optional<double> eps1;  // maximal overtakes nominal
    std::optional<double> eps2;  // nominal falls below both robust rules
};

// P^eps = (1-eps) * uniform + eps * two-point worst case (mu = 1/2) on a
// G-point grid; the worst-case atom is split mean-preservingly onto the grid.
ContaminationRun contamination(int grid_points = 100, int eps_steps = 101);

struct GuaranteePoint {
    double mu = 0.0, rho = 0.0, c = 0.0, b = 0.0, z_approx = 0.0;
};

// Evaluates approx_small_mu / approx_mid_mu over a mu grid restricted to
// (0, 0.107) and (0.25, mu').
std::vector<GuaranteePoint> guarantee_curves(const std::vector<double>& mu_grid);

// Mean-preserving placement of a point mass onto a grid: all mass on the
// exact grid point when the atom lies on the grid, otherwise split across the
// two bracketing points so the first moment is preserved.
std::vector<double> split_atom_on_grid(const std::vector<double>& grid, double atom,
                                       double mass);

}  // namespace dic
