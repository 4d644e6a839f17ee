#include "dic/multi_agent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "dic/piecewise.hpp"

namespace dic {

ConstraintSet ConstraintSet::paper_default(int agents) {
    ConstraintSet cs;
    if (agents >= 3) {
        cs.p_zero_at_zero_type = true;
        cs.p_increasing_in_nu2_at_top = true;
    }
    return cs;
}

std::vector<std::string> ConstraintSet::active_flags() const {
    std::vector<std::string> out;
    if (aggregate_polynomial_equality) out.push_back("aggregate_polynomial_equality");
    if (symmetry) out.push_back("symmetry");
    if (x_monotone_own_up) out.push_back("x_monotone_own_up");
    if (x_monotone_other_down) out.push_back("x_monotone_other_down");
    if (p_monotone_own_up) out.push_back("p_monotone_own_up");
    if (p_monotone_other_down) out.push_back("p_monotone_other_down");
    if (p_zero_at_zero_type) out.push_back("p_zero_at_zero_type");
    if (p_increasing_in_nu2_at_top) out.push_back("p_increasing_in_nu2_at_top");
    return out;
}

ConstraintSet ConstraintSet::from_flags(const std::vector<std::string>& flags) {
    ConstraintSet cs;
    cs.aggregate_polynomial_equality = false;
    cs.symmetry = false;
    cs.x_monotone_own_up = false;
    cs.x_monotone_other_down = false;
    cs.p_monotone_own_up = false;
    for (const std::string& f : flags) {
        if (f == "aggregate_polynomial_equality") cs.aggregate_polynomial_equality = true;
        else if (f == "symmetry") cs.symmetry = true;
        else if (f == "x_monotone_own_up") cs.x_monotone_own_up = true;
        else if (f == "x_monotone_other_down") cs.x_monotone_other_down = true;
        else if (f == "p_monotone_own_up") cs.p_monotone_own_up = true;
        else if (f == "p_monotone_other_down") cs.p_monotone_other_down = true;
        else if (f == "p_zero_at_zero_type") cs.p_zero_at_zero_type = true;
        else if (f == "p_increasing_in_nu2_at_top") cs.p_increasing_in_nu2_at_top = true;
        else throw std::invalid_argument("unknown constraint flag: " + f);
    }
    return cs;
}

MultiAgentTable::MultiAgentTable(int agents, int grid, std::vector<double> x,
                                 std::vector<double> p, std::vector<double> pm, double lambda1,
                                 double lambda0, std::vector<std::string> constraint_flags)
    : agents_(agents), grid_(grid), x_(std::move(x)), p_(std::move(p)), pm_(std::move(pm)),
      lambda1_(lambda1), lambda0_(lambda0), flags_(std::move(constraint_flags)) {
    if (agents_ < 2 || agents_ > 3)
        throw std::invalid_argument("MultiAgentTable: agents must be 2 or 3");
    if (grid_ < 2) throw std::invalid_argument("MultiAgentTable: grid must have >= 2 points");
    std::size_t expect = static_cast<std::size_t>(agents_);
    for (int a = 0; a < agents_; ++a) expect *= static_cast<std::size_t>(grid_);
    expect /= static_cast<std::size_t>(grid_);
    expect *= static_cast<std::size_t>(grid_);
    // expect = agents * grid^agents
    std::size_t want = static_cast<std::size_t>(agents_);
    for (int a = 0; a < agents_; ++a) want *= static_cast<std::size_t>(grid_);
    if (x_.size() != want || p_.size() != want || pm_.size() != want)
        throw std::invalid_argument("MultiAgentTable: array sizes do not match agents*grid^J");
}

std::size_t MultiAgentTable::scenarios() const {
    std::size_t s = 1;
    for (int a = 0; a < agents_; ++a) s *= static_cast<std::size_t>(grid_);
    return s;
}

std::size_t MultiAgentTable::scenario_index(const std::vector<int>& coords) const {
    if (static_cast<int>(coords.size()) != agents_)
        throw std::invalid_argument("scenario_index: coord size mismatch");
    std::size_t s = 0;
    for (int a = 0; a < agents_; ++a) {
        if (coords[a] < 0 || coords[a] >= grid_)
            throw std::out_of_range("scenario_index: coordinate outside grid");
        s = s * static_cast<std::size_t>(grid_) + static_cast<std::size_t>(coords[a]);
    }
    return s;
}

double MultiAgentTable::x_at(int agent, const std::vector<int>& coords) const {
    return x_[scenario_index(coords) * agents_ + agent];
}
double MultiAgentTable::p_at(int agent, const std::vector<int>& coords) const {
    return p_[scenario_index(coords) * agents_ + agent];
}
double MultiAgentTable::pm_at(int agent, const std::vector<int>& coords) const {
    return pm_[scenario_index(coords) * agents_ + agent];
}
double MultiAgentTable::grid_value(int i) const {
    return static_cast<double>(i) / (grid_ - 1);
}

namespace {

struct Indexer {
    int J, G;
    std::size_t S;
    std::size_t scen(const std::vector<int>& c) const {
        std::size_t s = 0;
        for (int a = 0; a < J; ++a) s = s * G + c[a];
        return s;
    }
    int X(int j, std::size_t s) const { return static_cast<int>(j * S + s); }
    int P(int j, std::size_t s) const { return static_cast<int>((J + j) * S + s); }
    int PM(int j, std::size_t s) const { return static_cast<int>((2 * J + j) * S + s); }
    bool next(std::vector<int>& c) const {
        for (int a = J - 1; a >= 0; --a) {
            if (++c[a] < G) return true;
            c[a] = 0;
        }
        return false;
    }
};

}  // namespace

lp::LinearProgram build_lp(int agents, int grid, double lambda1, double lambda0,
                           const ConstraintSet& cs, std::size_t nonzero_cap) {
    if (agents < 2 || agents > 3) throw std::domain_error("build_lp: agents must be 2 or 3");
    if (grid < 4) throw std::domain_error("build_lp: grid must have >= 4 points");
    if (!std::isfinite(lambda1) || !std::isfinite(lambda0))
        throw std::domain_error("build_lp: lambda coefficients must be finite");
    Indexer ix;
    ix.J = agents;
    ix.G = grid;
    ix.S = 1;
    for (int a = 0; a < agents; ++a) ix.S *= static_cast<std::size_t>(grid);

    // DS-IC dominates the size: 2 rules * J * S * G rows with ~4 nonzeros.
    const std::size_t projected =
        8u * agents * ix.S * grid + 16u * agents * ix.S;
    if (projected > nonzero_cap)
        throw std::domain_error("build_lp: projected nonzeros " + std::to_string(projected) +
                                " exceed the cap " + std::to_string(nonzero_cap) +
                                "; use a smaller grid");

    const std::vector<double> g = uniform_grid(grid);
    lp::LinearProgram prog(3 * agents * static_cast<int>(ix.S), lp::Sense::Maximize);
    for (int j = 0; j < agents; ++j)
        for (std::size_t s = 0; s < ix.S; ++s) {
            prog.set_bounds(ix.X(j, s), 0.0, 1.0);
            prog.set_bounds(ix.P(j, s), -8.0, 8.0);
            prog.set_bounds(ix.PM(j, s), -8.0, 8.0);
            prog.set_objective(ix.PM(j, s), 1.0);
        }

    std::vector<int> c(agents, 0);
    do {
        const std::size_t s = ix.scen(c);
        double nu_sum = 0.0;
        for (int a = 0; a < agents; ++a) nu_sum += g[c[a]];
        {
            std::vector<int> idx;
            std::vector<double> coef;
            for (int j = 0; j < agents; ++j) {
                idx.push_back(ix.X(j, s));
                coef.push_back(1.0);
            }
            prog.add_row(lp::Relation::LessEq, 1.0, idx, coef);
        }
        if (cs.aggregate_polynomial_equality) {
            std::vector<int> idx;
            std::vector<double> coef;
            for (int j = 0; j < agents; ++j) {
                idx.push_back(ix.P(j, s));
                coef.push_back(1.0);
            }
            prog.add_row(lp::Relation::Equal, lambda1 * nu_sum + lambda0, idx, coef);
            idx.clear();
            coef.clear();
            for (int j = 0; j < agents; ++j) {
                idx.push_back(ix.P(j, s));
                coef.push_back(1.0);
                idx.push_back(ix.PM(j, s));
                coef.push_back(-1.0);
            }
            prog.add_row(lp::Relation::LessEq, 0.0, idx, coef);
        }
        for (int j = 0; j < agents; ++j) {
            const double nuj = g[c[j]];
            prog.add_row(lp::Relation::LessEq, 0.0, {ix.P(j, s), ix.X(j, s)}, {1.0, -nuj});
            prog.add_row(lp::Relation::LessEq, 0.0, {ix.PM(j, s), ix.X(j, s)}, {1.0, -nuj});
            std::vector<int> dev = c;
            for (int kh = 0; kh < grid; ++kh) {
                if (kh == c[j]) {
                    prog.add_row(lp::Relation::LessEq, g[kh], {ix.P(j, s)}, {1.0});
                    prog.add_row(lp::Relation::LessEq, g[kh], {ix.PM(j, s)}, {1.0});
                    continue;
                }
                dev[j] = kh;
                const std::size_t sd = ix.scen(dev);
                prog.add_row(lp::Relation::LessEq, g[kh],
                             {ix.P(j, s), ix.X(j, s), ix.X(j, sd)}, {1.0, -nuj, nuj});
                prog.add_row(lp::Relation::LessEq, g[kh],
                             {ix.PM(j, s), ix.X(j, s), ix.X(j, sd)}, {1.0, -nuj, nuj});
            }
            dev[j] = c[j];
        }
    } while (ix.next(c));

    if (cs.symmetry) {
        std::fill(c.begin(), c.end(), 0);
        do {
            const std::size_t s = ix.scen(c);
            for (int j = 1; j < agents; ++j) {
                std::vector<int> sw = c;
                std::swap(sw[0], sw[j]);
                const std::size_t s2 = ix.scen(sw);
                prog.add_row(lp::Relation::Equal, 0.0, {ix.X(j, s), ix.X(0, s2)}, {1.0, -1.0});
                prog.add_row(lp::Relation::Equal, 0.0, {ix.P(j, s), ix.P(0, s2)}, {1.0, -1.0});
                prog.add_row(lp::Relation::Equal, 0.0, {ix.PM(j, s), ix.PM(0, s2)},
                             {1.0, -1.0});
            }
            if (agents == 3 && c[1] < c[2]) {
                std::vector<int> sw = {c[0], c[2], c[1]};
                const std::size_t s2 = ix.scen(sw);
                prog.add_row(lp::Relation::Equal, 0.0, {ix.X(0, s), ix.X(0, s2)}, {1.0, -1.0});
                prog.add_row(lp::Relation::Equal, 0.0, {ix.P(0, s), ix.P(0, s2)}, {1.0, -1.0});
                prog.add_row(lp::Relation::Equal, 0.0, {ix.PM(0, s), ix.PM(0, s2)},
                             {1.0, -1.0});
            }
        } while (ix.next(c));
    }

    auto monotone_rows = [&](auto var_of, int along_axis, int j, bool increasing) {
        std::fill(c.begin(), c.end(), 0);
        do {
            if (c[along_axis] + 1 >= grid) continue;
            const std::size_t s = ix.scen(c);
            std::vector<int> up = c;
            ++up[along_axis];
            const std::size_t s2 = ix.scen(up);
            // increasing: v(s) - v(s2) <= 0 ; decreasing: v(s2) - v(s) <= 0
            if (increasing)
                prog.add_row(lp::Relation::LessEq, 0.0, {var_of(j, s), var_of(j, s2)},
                             {1.0, -1.0});
            else
                prog.add_row(lp::Relation::LessEq, 0.0, {var_of(j, s2), var_of(j, s)},
                             {1.0, -1.0});
        } while (ix.next(c));
    };
    auto xvar = [&](int j, std::size_t s) { return ix.X(j, s); };
    auto pvar = [&](int j, std::size_t s) { return ix.P(j, s); };
    for (int j = 0; j < agents; ++j) {
        if (cs.x_monotone_own_up) monotone_rows(xvar, j, j, true);
        if (cs.p_monotone_own_up) monotone_rows(pvar, j, j, true);
        for (int a = 0; a < agents; ++a) {
            if (a == j) continue;
            if (cs.x_monotone_other_down) monotone_rows(xvar, a, j, false);
            if (cs.p_monotone_other_down) monotone_rows(pvar, a, j, false);
        }
    }

    if (cs.p_zero_at_zero_type) {
        std::fill(c.begin(), c.end(), 0);
        do {
            if (c[0] != 0) continue;
            prog.add_row(lp::Relation::Equal, 0.0, {ix.P(0, ix.scen(c))}, {1.0});
        } while (ix.next(c));
    }
    if (cs.p_increasing_in_nu2_at_top) {
        std::fill(c.begin(), c.end(), 0);
        do {
            if (c[0] != grid - 1 || c[1] + 2 > grid - 1) continue;
            const std::size_t s = ix.scen(c);
            std::vector<int> up = c;
            ++up[1];
            prog.add_row(lp::Relation::LessEq, 0.0, {ix.P(0, s), ix.P(0, ix.scen(up))},
                         {1.0, -1.0});
        } while (ix.next(c));
    }
    return prog;
}

MultiAgentSolve solve_multi_agent(int agents, int grid,
                                  const std::optional<TwoAgentContext>& ctx,
                                  const ConstraintSet& cs) {
    double l1, l0;
    if (agents == 2) {
        if (!ctx)
            throw std::domain_error(
                "solve_multi_agent: J=2 needs the mu''/f(mu'') context from the adversary");
        l1 = (1.0 - ctx->f_value) / (2.0 * (1.0 - ctx->mu_dprime));
        l0 = 1.0 - 2.0 * l1;
    } else if (agents == 3) {
        l1 = 1.0 / 3.0;
        l0 = 0.0;
    } else {
        throw std::domain_error("solve_multi_agent: agents must be 2 or 3");
    }
    lp::LinearProgram prog = build_lp(agents, grid, l1, l0, cs);
    lp::LpSolution sol = lp::solve(prog);
    MultiAgentSolve out;
    out.status = sol.status;
    out.objective = sol.objective;
    out.iterations = sol.iterations;
    out.lambda1 = l1;
    out.lambda0 = l0;
    if (sol.status != lp::SolveStatus::Optimal) return out;

    Indexer ix;
    ix.J = agents;
    ix.G = grid;
    ix.S = 1;
    for (int a = 0; a < agents; ++a) ix.S *= static_cast<std::size_t>(grid);
    std::vector<double> x(ix.S * agents), p(ix.S * agents), pm(ix.S * agents);
    for (std::size_t s = 0; s < ix.S; ++s)
        for (int j = 0; j < agents; ++j) {
            x[s * agents + j] = sol.primal[ix.X(j, s)];
            p[s * agents + j] = sol.primal[ix.P(j, s)];
            pm[s * agents + j] = sol.primal[ix.PM(j, s)];
        }
    out.table.emplace(agents, grid, std::move(x), std::move(p), std::move(pm), l1, l0,
                      cs.active_flags());
    return out;
}

double TableResiduals::worst() const {
    return std::max({dsic_p, dsic_pm, epir_p, epir_pm, alloc_sum, aggregate_eq, pm_vs_p,
                     symmetry, monotonicity});
}

TableResiduals check_table(const MultiAgentTable& t, const ConstraintSet& cs) {
    const int J = t.agents(), G = t.grid();
    Indexer ix;
    ix.J = J;
    ix.G = G;
    ix.S = t.scenarios();
    const std::vector<double> g = uniform_grid(G);
    TableResiduals r;
    std::vector<int> c(J, 0);
    do {
        const std::size_t s = ix.scen(c);
        double xs = 0.0, ps = 0.0, pms = 0.0, nus = 0.0;
        for (int j = 0; j < J; ++j) {
            xs += t.x()[s * J + j];
            ps += t.p()[s * J + j];
            pms += t.pm()[s * J + j];
            nus += g[c[j]];
        }
        r.alloc_sum = std::max(r.alloc_sum, xs - 1.0);
        if (cs.aggregate_polynomial_equality) {
            r.aggregate_eq =
                std::max(r.aggregate_eq, std::abs(ps - (t.lambda1() * nus + t.lambda0())));
            r.pm_vs_p = std::max(r.pm_vs_p, ps - pms);
        }
        for (int j = 0; j < J; ++j) {
            const double nuj = g[c[j]];
            const double xj = t.x()[s * J + j];
            const double pj = t.p()[s * J + j];
            const double pmj = t.pm()[s * J + j];
            r.epir_p = std::max(r.epir_p, pj - nuj * xj);
            r.epir_pm = std::max(r.epir_pm, pmj - nuj * xj);
            std::vector<int> dev = c;
            for (int kh = 0; kh < G; ++kh) {
                dev[j] = kh;
                const std::size_t sd = ix.scen(dev);
                const double rhs = nuj * (xj - t.x()[sd * J + j]) + g[kh];
                r.dsic_p = std::max(r.dsic_p, pj - rhs);
                r.dsic_pm = std::max(r.dsic_pm, pmj - rhs);
            }
        }
        if (cs.symmetry) {
            for (int j = 1; j < J; ++j) {
                std::vector<int> sw = c;
                std::swap(sw[0], sw[j]);
                const std::size_t s2 = ix.scen(sw);
                r.symmetry = std::max({r.symmetry,
                                       std::abs(t.x()[s * J + j] - t.x()[s2 * J]),
                                       std::abs(t.p()[s * J + j] - t.p()[s2 * J]),
                                       std::abs(t.pm()[s * J + j] - t.pm()[s2 * J])});
            }
        }
        for (int j = 0; j < J; ++j) {
            for (int a = 0; a < J; ++a) {
                if (c[a] + 1 >= G) continue;
                std::vector<int> up = c;
                ++up[a];
                const std::size_t s2 = ix.scen(up);
                if (a == j && cs.x_monotone_own_up)
                    r.monotonicity =
                        std::max(r.monotonicity, t.x()[s * J + j] - t.x()[s2 * J + j]);
                if (a == j && cs.p_monotone_own_up)
                    r.monotonicity =
                        std::max(r.monotonicity, t.p()[s * J + j] - t.p()[s2 * J + j]);
                if (a != j && cs.x_monotone_other_down)
                    r.monotonicity =
                        std::max(r.monotonicity, t.x()[s2 * J + j] - t.x()[s * J + j]);
                if (a != j && cs.p_monotone_other_down)
                    r.monotonicity =
                        std::max(r.monotonicity, t.p()[s2 * J + j] - t.p()[s * J + j]);
            }
        }
    } while (ix.next(c));
    return r;
}

std::string table_surface_csv(const MultiAgentTable& t, int axis_a, int axis_b,
                              const std::vector<int>& fixed_coords) {
    const int J = t.agents(), G = t.grid();
    if (axis_a < 0 || axis_a >= J || axis_b < 0 || axis_b >= J || axis_a == axis_b)
        throw std::out_of_range("table_surface_csv: bad axes");
    if (static_cast<int>(fixed_coords.size()) != J)
        throw std::out_of_range("table_surface_csv: fixed_coords must have one entry per agent");
    for (int a = 0; a < J; ++a)
        if (a != axis_a && a != axis_b && (fixed_coords[a] < 0 || fixed_coords[a] >= G))
            throw std::out_of_range("table_surface_csv: fixed coordinate outside grid");
    std::string out = "nu_a,nu_b,x1,p1,pm1\n";
    char line[160];
    std::vector<int> c = fixed_coords;
    for (int ia = 0; ia < G; ++ia) {
        for (int ib = 0; ib < G; ++ib) {
            c[axis_a] = ia;
            c[axis_b] = ib;
            std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g,%.12g,%.12g\n",
                          t.grid_value(ia), t.grid_value(ib), t.x_at(0, c), t.p_at(0, c),
                          t.pm_at(0, c));
            out += line;
        }
    }
    return out;
}

}  // namespace dic
