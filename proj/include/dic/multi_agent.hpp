// Discretized LPs for the symmetric 2- and 3-agent robust mechanisms,
// including the paper-style constraint sets and the infeasibility probe.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dic/lp.hpp"

namespace dic {

struct ConstraintSet {
    bool aggregate_polynomial_equality = true;
    bool symmetry = true;
    bool x_monotone_own_up = true;
    bool x_monotone_other_down = true;
    bool p_monotone_own_up = true;
    bool p_monotone_other_down = false;  // the documented infeasibility probe
    bool p_zero_at_zero_type = false;        // 3-agent extra
    bool p_increasing_in_nu2_at_top = false; // 3-agent extra

    // The flag set used for the published experiments.
    static ConstraintSet paper_default(int agents);

    std::vector<std::string> active_flags() const;
    static ConstraintSet from_flags(const std::vector<std::string>& flags);
};

class MultiAgentTable {
public:
    MultiAgentTable(int agents, int grid, std::vector<double> x, std::vector<double> p,
                    std::vector<double> pm, double lambda1, double lambda0,
                    std::vector<std::string> constraint_flags);

    int agents() const { return agents_; }
    int grid() const { return grid_; }
    double lambda1() const { return lambda1_; }
    double lambda0() const { return lambda0_; }
    const std::vector<std::string>& constraint_flags() const { return flags_; }
    const std::vector<double>& x() const { return x_; }
    const std::vector<double>& p() const { return p_; }
    const std::vector<double>& pm() const { return pm_; }

    std::size_t scenarios() const;
    // Scenario index: agent-1 coordinate slowest, last agent fastest.
    std::size_t scenario_index(const std::vector<int>& coords) const;
    double x_at(int agent, const std::vector<int>& coords) const;
    double p_at(int agent, const std::vector<int>& coords) const;
    double pm_at(int agent, const std::vector<int>& coords) const;
    double grid_value(int i) const;

private:
    int agents_, grid_;
    std::vector<double> x_, p_, pm_;
    double lambda1_, lambda0_;
    std::vector<std::string> flags_;
};

// Variable order: x (agent-major, scenario within), then p, then pm.
lp::LinearProgram build_lp(int agents, int grid, double lambda1, double lambda0,
                           const ConstraintSet& cs, std::size_t nonzero_cap = 2'000'000);

struct TwoAgentContext {
    double mu_dprime = 0.0;
    double f_value = 0.0;  // f(mu'') from the adversary module
};

struct MultiAgentSolve {
    lp::SolveStatus status = lp::SolveStatus::Optimal;
    std::optional<MultiAgentTable> table;
    double objective = 0.0;
    std::int64_t iterations = 0;
    double lambda1 = 0.0;
    double lambda0 = 0.0;
};

// J=2 pins lambda by 2*l1*mu'' + l0 = f(mu'') and 2*l1 + l0 = 1 from the
// supplied context; J=3 uses l1 = 1/3, l0 = 0 regardless of mu. An infeasible
// status is a first-class result, not an exception.
MultiAgentSolve solve_multi_agent(int agents, int grid,
                                  const std::optional<TwoAgentContext>& ctx,
                                  const ConstraintSet& cs);

struct TableResiduals {
    double dsic_p = 0.0;      // max violation of DS-IC for p
    double dsic_pm = 0.0;
    double epir_p = 0.0;
    double epir_pm = 0.0;
    double alloc_sum = 0.0;   // max excess of sum_j x_j over 1
    double aggregate_eq = 0.0;
    double pm_vs_p = 0.0;     // max violation of sum pm >= sum p
    double symmetry = 0.0;
    double monotonicity = 0.0;
    double worst() const;
};

// Re-checks every constraint directly from the table values.
TableResiduals check_table(const MultiAgentTable& t, const ConstraintSet& cs);

// CSV "nu_a,nu_b,x1,p1,pm1" slice along two axes with the others pinned to
// grid indices from fixed_coords (entries for axis_a/axis_b are ignored).
std::string table_surface_csv(const MultiAgentTable& t, int axis_a, int axis_b,
                              const std::vector<int>& fixed_coords);

}  // namespace dic
